#include <doctest.h>

#include <cmath>

#include "qrm/error.hpp"
#include "qrm/fockspace.hpp"
#include "qrm/polaron.hpp"
#include "qrm/qfi.hpp"

using namespace qrm;

TEST_CASE("degeneracy lifting limit at gbar2 = 0") {
    for (double W : {0.01, 0.001}) {
        ModelParams p(1, W, 0, 0, 0);
        auto q = qfi_ed(p, Parameter::g2);
        CHECK(q.one_sided);
        double expect = (1.0 / 8 + 1 / (4 * W * W)) / (p.gT() * p.gT());
        CHECK(q.total == doctest::Approx(expect).epsilon(0.02));
        // exact second-order perturbation value for comparison
        double pt = 4 / (W * W) + 8 / ((2 + W) * (2 + W));
        CHECK(q.total == doctest::Approx(pt).epsilon(1e-4));
        CHECK(q.rescaled(p) == doctest::Approx(q.total * p.gT() * p.gT()));
    }
}

TEST_CASE("bias QFI is symmetric in the bias") {
    ModelParams p(1, 2.0, 0, 0, 0.3);
    double a = qfi_ed(p, Parameter::epsilon).total;
    double b = qfi_ed(p.with(Parameter::epsilon, -0.3), Parameter::epsilon).total;
    CHECK(a > 0);
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
    // decoupled two-level value (Omega/2)^2 / (eps^2 + (Omega/2)^2)^2
    CHECK(a == doctest::Approx(1.0 / ((0.09 + 1) * (0.09 + 1))).epsilon(1e-6));
}

TEST_CASE("QFI is non-negative and step robust away from transitions") {
    for (auto p : {ModelParams::from_scaled(1, 0.01, 0.5, 0.5, 0.1), ModelParams::from_scaled(1, 1, 0.3, 0.8, 0.33),
                   ModelParams::from_scaled(1, 0.1, 0, 0.3, 0)}) {
        for (Parameter l : {Parameter::g2, Parameter::g1, Parameter::epsilon}) {
            auto q = qfi_ed(p, l);
            CHECK(q.total >= 0);
            CHECK(q.richardson_rel < 0.01);
            CHECK(q.overlap_term < 1e-8 * q.total + 1e-300);
        }
    }
}

TEST_CASE("sign of the stencil vectors does not matter") {
    ModelParams p = ModelParams::from_scaled(1, 0.05, 0.4, 0.6, 0.05);
    int N = 96;
    double h = default_step(p, Parameter::g2);
    auto g = [&](double g2) { return spectrum(p.with(Parameter::g2, g2), N, 1).vectors[0]; };
    auto lo = g(p.g2() - h), mid = g(p.g2()), hi = g(p.g2() + h);
    double ref = qfi_central(lo, mid, hi, h);
    auto flo = lo, fhi = hi, fmid = mid;
    flo.scale(-1);
    fhi.scale(-1);
    fmid.scale(-1);
    CHECK(qfi_central(flo, mid, hi, h) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(qfi_central(lo, mid, fhi, h) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(qfi_central(lo, fmid, hi, h) == doctest::Approx(ref).epsilon(1e-12));
    QfiOptions o;
    o.cutoff = N;
    o.richardson = false;
    CHECK(qfi_ed(p, Parameter::g2, o).total == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("fidelity and susceptibility") {
    ModelParams p = ModelParams::from_scaled(1, 0.1, 0.5, 0.7, 0.05);
    int N = 128;
    CHECK(fidelity(p, Parameter::g2, 0, N) == 1.0);
    QfiOptions o;
    o.cutoff = N;
    double F = qfi_ed(p, Parameter::g2, o).total;
    // step policy: a step where 1 - fidelity is far above round-off
    double d = 1e-3 * p.gT();
    auto chi = [&](double dd) { return 2 * (1 - fidelity(p, Parameter::g2, dd, N)) / (dd * dd); };
    double c1 = chi(d), c2 = chi(d / 2);
    double rich = (4 * c2 - c1) / 3;
    CHECK(4 * c1 == doctest::Approx(F).epsilon(0.02));
    CHECK(4 * rich == doctest::Approx(F).epsilon(0.02));
}

TEST_CASE("fidelity dips across a sharp transition") {
    // bias family setting with g1 = 0.1 gs and Omega = 0.001
    const double W = 0.001, eps = 0.33;
    ModelParams base = ModelParams::from_scaled(1, W, 0.1, 0.5, eps);
    // locate the transition by the analytic locator, then probe around it
    double lo = 0.98, hi = 0.999;
    for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (lo + hi);
        (transition_bias(1, W, 0.1, m) < eps ? lo : hi) = m;
    }
    double gc = 0.5 * (lo + hi), dg = 2e-3;
    int N = 512;
    double across = fidelity(base.with(Parameter::g2, (gc - dg / 2) * base.gT()), Parameter::g2, dg * base.gT(), N);
    double away = fidelity(base.with(Parameter::g2, 0.8 * base.gT()), Parameter::g2, dg * base.gT(), N);
    CHECK(across < 0.5);
    CHECK(away > 0.999);
}

TEST_CASE("bias peak tracks the analytic transition and dominates the unbiased curve") {
    const double W = 0.01;
    ModelParams p = ModelParams::from_scaled(1, W, 0.5, 0.9, 0);
    double et = transition_bias(1, W, 0.5, 0.9);
    std::vector<double> grid;
    for (int k = -10; k <= 10; ++k) grid.push_back(et + 0.001 * k);
    QfiOptions o;
    o.cutoff = 256;
    auto pk = qfi_peak_over_bias(p, grid, o);
    CHECK_FALSE(pk.at_boundary);
    CHECK(std::abs(pk.eps_star - et) <= 0.001 + 1e-12);
    double flat = qfi_ed(p, Parameter::g2, o).total;
    CHECK(pk.peak > flat);
    auto refined = qfi_peak_over_bias(p, grid, o, true);
    CHECK(refined.peak >= pk.peak);
    CHECK(std::abs(refined.eps_star - et) < 0.001);

    // larger linear coupling raises the envelope
    ModelParams p2 = ModelParams::from_scaled(1, W, 1.0, 0.9, 0);
    double et2 = transition_bias(1, W, 1.0, 0.9);
    std::vector<double> grid2;
    for (int k = -10; k <= 10; ++k) grid2.push_back(et2 + 0.001 * k);
    auto pk2 = qfi_peak_over_bias(p2, grid2, o, true);
    CHECK(pk2.peak > refined.peak);
}

TEST_CASE("boundary argmax is flagged") {
    ModelParams p = ModelParams::from_scaled(1, 0.01, 0.5, 0.9, 0);
    double et = transition_bias(1, 0.01, 0.5, 0.9);
    QfiOptions o;
    o.cutoff = 256;
    auto pk = qfi_peak_over_bias(p, {et - 0.05, et - 0.04, et - 0.03}, o);
    CHECK(pk.at_boundary);
}

TEST_CASE("ED and analytic QFI agree at small Omega") {
    ModelParams p = ModelParams::from_scaled(1, 0.001, 0.5, 0.8, 0.33);
    double ed = qfi_ed(p, Parameter::g2).total;
    double an = qfi_analytic(p).total;
    CHECK(an == doctest::Approx(ed).epsilon(0.05));
}

TEST_CASE("stencil past the collapse point is rejected") {
    ModelParams p(1, 0.01, 0, 0.25 - 1e-7, 0);
    QfiOptions o;
    o.cutoff = 64;
    CHECK_THROWS_AS(qfi_ed(p, Parameter::g2, o), ParameterError);
}
