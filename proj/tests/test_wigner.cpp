#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qrm/fockspace.hpp"
#include "qrm/hermite.hpp"
#include "qrm/wigner.hpp"

using namespace qrm;

namespace {

SpinorFockVector vacuum(int N) {
    SpinorFockVector v;
    v.cutoff = N;
    v.plus.assign(N, 0.0);
    v.minus.assign(N, 0.0);
    v.plus[0] = 1;
    return v;
}

SpinorFockVector ground(const ModelParams& p) {
    int N = converge_cutoff(p) * 2;
    return spectrum(p, N, 1).vectors[0];
}

}  // namespace

TEST_CASE("Hermite functions") {
    auto h = hermite_functions(3, 0.7);
    double x = 0.7, g = std::exp(-x * x / 2) / std::pow(std::numbers::pi, 0.25);
    CHECK(h[0] == doctest::Approx(g).epsilon(1e-14));
    CHECK(h[1] == doctest::Approx(std::sqrt(2.0) * x * g).epsilon(1e-14));
    CHECK(h[2] == doctest::Approx((2 * x * x - 1) / std::sqrt(2.0) * g).epsilon(1e-14));
    // deep tail without overflow
    CHECK(std::isfinite(hermite_series(std::vector<double>(400, 0.05), 35.0)));
    auto far = hermite_functions(2000, 60.0);
    for (double v : far) CHECK(std::isfinite(v));
    // orthonormality by quadrature
    double s00 = 0, s57 = 0, s77 = 0;
    for (double t = -15; t <= 15; t += 0.01) {
        auto hh = hermite_functions(7, t);
        s00 += hh[0] * hh[0] * 0.01;
        s57 += hh[5] * hh[7] * 0.01;
        s77 += hh[7] * hh[7] * 0.01;
    }
    CHECK(s00 == doctest::Approx(1).epsilon(1e-10));
    CHECK(s77 == doctest::Approx(1).epsilon(1e-10));
    CHECK(std::abs(s57) < 1e-10);
}

TEST_CASE("position wavefunction of the vacuum") {
    auto xs = linspace(-8, 8, 161);
    auto w = position_wavefunction(vacuum(8), xs);
    double norm = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(w.plus[i] == doctest::Approx(std::exp(-xs[i] * xs[i] / 2) / std::pow(std::numbers::pi, 0.25)));
        CHECK(w.minus[i] == 0.0);
        norm += w.plus[i] * w.plus[i] * 0.1;
    }
    CHECK(norm == doctest::Approx(1).epsilon(1e-10));
    CHECK(w.covers_support);
    CHECK_FALSE(position_wavefunction(vacuum(8), linspace(-2, 2, 11)).covers_support);
}

TEST_CASE("squeezing shows in the spin-resolved wavefunctions") {
    ModelParams p = ModelParams::from_scaled(1, 0.01, 0, 0.9, 0);
    auto v = ground(p);
    auto xs = linspace(-12, 12, 481);
    auto w = position_wavefunction(v, xs);
    auto width = [&](const std::vector<double>& f) {
        double n = 0, m2 = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            n += f[i] * f[i];
            m2 += f[i] * f[i] * xs[i] * xs[i];
        }
        return m2 / n;
    };
    CHECK(width(w.plus) < 0.5);
    CHECK(width(w.minus) > 0.5);
}

TEST_CASE("vacuum Wigner function") {
    auto xs = linspace(-5, 5, 41), ps = linspace(-5, 5, 37);
    auto W = wigner(vacuum(6), xs, ps);
    double worst = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ps.size(); ++j) {
            double ref = std::exp(-xs[i] * xs[i] - ps[j] * ps[j]) / std::numbers::pi;
            worst = std::max(worst, std::abs(W.at_plus(i, j) - ref));
            CHECK(W.at_minus(i, j) == 0.0);
        }
    CHECK(worst < 1e-8);
    CHECK(W.imag_residue < 1e-10);
}

TEST_CASE("squeezed displaced Gaussian without tunneling") {
    ModelParams p = ModelParams::from_scaled(1, 0, 0, 0.9, -0.1);
    p = p.with(Parameter::g1, 0.3);
    auto d = derived_scales(p);
    auto v = ground(p);
    auto xs = linspace(d.b_minus - 6, d.b_minus + 6, 61), ps = linspace(-6, 6, 49);
    auto W = wigner(v, xs, ps);
    double worst = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ps.size(); ++j) {
            double dx = xs[i] - d.b_minus;
            double ref = std::exp(-d.varpi_minus * dx * dx - ps[j] * ps[j] / d.varpi_minus) / std::numbers::pi;
            worst = std::max(worst, std::abs(W.at_minus(i, j) - ref));
            CHECK(std::abs(W.at_plus(i, j)) < 1e-12);
        }
    CHECK(worst < 1e-6);
}

TEST_CASE("normalization and marginals") {
    ModelParams p(1, 1, 0.2, 0.5 * 0.25, 0.1);
    auto v = ground(p);
    auto W = wigner_auto(v);
    CHECK(W.total_integral() == doctest::Approx(1).epsilon(1e-3));
    CHECK_FALSE(W.support_warning);
    auto psi = position_wavefunction(v, W.x);
    double dp = W.p[1] - W.p[0];
    double worst = 0;
    for (std::size_t i = 0; i < W.x.size(); ++i) {
        double mp = 0, mm = 0;
        for (std::size_t j = 0; j < W.p.size(); ++j) {
            mp += W.at_plus(i, j) * dp;
            mm += W.at_minus(i, j) * dp;
        }
        worst = std::max({worst, std::abs(mp - psi.plus[i] * psi.plus[i]), std::abs(mm - psi.minus[i] * psi.minus[i])});
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("parity symmetry without linear coupling and bias") {
    ModelParams p(1, 1, 0, 0.8 * 0.25, 0);
    auto v = ground(p);
    auto xs = linspace(-6, 6, 49), ps = linspace(-5, 5, 41);
    auto W = wigner(v, xs, ps);
    double worst = 0;
    std::size_t nx = xs.size(), np = ps.size();
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < np; ++j) {
            worst = std::max(worst, std::abs(W.at_plus(i, j) - W.at_plus(nx - 1 - i, np - 1 - j)));
            worst = std::max(worst, std::abs(W.at_minus(i, j) - W.at_minus(nx - 1 - i, np - 1 - j)));
        }
    CHECK(worst < 1e-8);
}

TEST_CASE("separated packets near the squeezing edge") {
    ModelParams p(1, 1, 0, 0.9942 * 0.25, 0);
    auto W = wigner_auto(ground(p));
    CHECK(W.x.size() == 256);
    CHECK(W.p.size() == 256);
    CHECK(W.total_integral() == doctest::Approx(1).epsilon(1e-3));
    // interference between the two packets drives W negative somewhere
    double lo = 0;
    for (std::size_t k = 0; k < W.minus.size(); ++k) lo = std::min(lo, W.minus[k]);
    CHECK(lo < -1e-3);
}

TEST_CASE("identical inputs give identical grids") {
    auto v = ground(ModelParams(1, 1, 0.2, 0.1, 0.1));
    auto xs = linspace(-5, 5, 21), ps = linspace(-4, 4, 17);
    auto a = wigner(v, xs, ps), b = wigner(v, xs, ps);
    CHECK(a.plus == b.plus);
    CHECK(a.minus == b.minus);
}
