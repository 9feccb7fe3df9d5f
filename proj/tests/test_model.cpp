#include <doctest.h>

#include <cmath>
#include <random>

#include "qrm/error.hpp"
#include "qrm/model.hpp"

using namespace qrm;

TEST_CASE("uncoupled derived scales") {
    auto d = derived_scales(ModelParams(1, 0.01, 0, 0, 0));
    CHECK(d.gT == doctest::Approx(0.25));
    CHECK(d.gs == doctest::Approx(0.05));
    CHECK(d.varpi_plus == 1.0);
    CHECK(d.varpi_minus == 1.0);
    CHECK(d.b_plus == 0.0);
    CHECK(d.b_minus == 0.0);
    CHECK(d.d_plus == 0.0);
    CHECK(d.d_minus == 0.0);
}

TEST_CASE("squeezed branch frequency") {
    auto d = derived_scales(ModelParams(1, 0.01, 0, 0.9 * 0.25, 0));
    CHECK(d.varpi_minus == doctest::Approx(std::sqrt(0.1)).epsilon(1e-14));
    CHECK(d.varpi_plus >= 1.0);
}

TEST_CASE("linear coupling scale") {
    auto d = derived_scales(ModelParams(1, 0.01, 0.05, 0, 0));
    CHECK(d.gbar1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.g1prime == doctest::Approx(std::sqrt(2.0) * 0.05).epsilon(1e-14));
    // d = -gbar1^2 Omega / 4 at gbar2 = 0
    CHECK(d.d_plus == doctest::Approx(-0.01 / 4).epsilon(1e-13));
}

TEST_CASE("collapse bound rejected") {
    CHECK_THROWS_AS(ModelParams(1, 0.01, 0, 0.25, 0), ParameterError);
    CHECK_THROWS_AS(ModelParams(1, 0.01, 0, 0.3, 0), ParameterError);
    CHECK_THROWS_AS(ModelParams(1, 0.01, 0, -0.01, 0), ParameterError);
    CHECK_THROWS_AS(ModelParams(0, 0.01, 0, 0, 0), ParameterError);
    CHECK_THROWS_AS(ModelParams(1, -1, 0, 0, 0), ParameterError);
    CHECK_NOTHROW(ModelParams(1, 0.01, 0, 0.2499999, 0));
    CHECK_THROWS_AS(ModelParams(1, 0.01, 0, 0.1, 0).with(Parameter::g2, 0.25), ParameterError);
}

TEST_CASE("effective potential simple values") {
    ModelParams p(1, 0.01, 0, 0, 0);
    CHECK(effective_potential(p, Spin::plus, 0) == doctest::Approx(-0.5));
    ModelParams q(1, 0.01, 0, 0.9 * 0.25, 0);
    CHECK(effective_potential(q, Spin::minus, 1) == doctest::Approx(0.5 * 0.1 - 0.5).epsilon(1e-13));
}

TEST_CASE("completed square matches expansion") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ux(-8, 8), ug(-1.5, 1.5), ue(-0.5, 0.5), u2(0, 0.2499);
    for (int k = 0; k < 100; ++k) {
        ModelParams p(1.0, 0.3, ug(rng), u2(rng), ue(rng));
        double x = ux(rng);
        for (Spin s : {Spin::plus, Spin::minus}) {
            double a = effective_potential(p, s, x), b = effective_potential_expanded(p, s, x);
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)) * 10);
        }
    }
}

TEST_CASE("potential minima sit at the derived centres") {
    ModelParams p(1, 0.01, 0.07, 0.2, 0.1);
    for (Spin s : {Spin::plus, Spin::minus}) {
        double c = potential_center(p, s), h = 1e-4;
        double l = effective_potential(p, s, c - h), m = effective_potential(p, s, c), r = effective_potential(p, s, c + h);
        CHECK(m <= l);
        CHECK(m <= r);
    }
}

TEST_CASE("transition bias values") {
    CHECK(transition_bias(1, 0.01, 0, 0.96) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(transition_bias(1, 0.01, 0.5, 0.0) == 0.0);
    CHECK(transition_bias(1, 0.01, 0.5, 1e-9) < 1e-9);
}

TEST_CASE("transition g1 inverts transition bias") {
    double e = transition_bias(1, 0.01, 0.7, 0.8);
    CHECK(transition_g1(1, 0.01, 0.8, e) == doctest::Approx(0.7).epsilon(1e-12));
    for (double g2 : {0.1, 0.5, 0.9, 0.99})
        for (double g1 : {0.01, 0.3, 1.0, 3.0}) {
            double eps = transition_bias(1, 0.003, g1, g2);
            double back = transition_bias(1, 0.003, transition_g1(1, 0.003, g2, eps), g2);
            CHECK(std::abs(back - eps) <= 1e-12 * eps);
        }
    CHECK_THROWS_AS(transition_g1(1, 0.01, 0.5, 0.0), ParameterError);
}

TEST_CASE("transition bias increases with gbar2") {
    for (double g1 : {0.0, 0.5, 2.0}) {
        double prev = -1;
        for (int i = 1; i < 200; ++i) {
            double e = transition_bias(1, 0.01, g1, i / 200.0);
            CHECK(e > prev);
            prev = e;
        }
    }
}

TEST_CASE("low frequency boundary") {
    CHECK(low_freq_boundary(0.6, 0, 1) == doctest::Approx(0.8));
    CHECK(low_freq_boundary(0.999999, 0.33, 1) < 1e-2);
    CHECK_THROWS_AS(low_freq_boundary(0, 0.33, 1), ParameterError);
}

TEST_CASE("parameter names") {
    for (Parameter p : {Parameter::omega, Parameter::Omega, Parameter::g1, Parameter::g2, Parameter::epsilon})
        CHECK(parse_parameter(to_string(p)) == p);
    CHECK_THROWS_AS(parse_parameter("gamma"), ParameterError);
}
