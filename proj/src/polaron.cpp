#include "qrm/polaron.hpp"

#include <cmath>
#include <limits>

#include "qrm/error.hpp"

namespace qrm {

double PolaronAnsatz::norm2() const {
    double s = 0;
    for (const auto& spin : packets)
        for (const auto& a : spin)
            for (const auto& b : spin) s += a.weight * b.weight * overlap({a.xi, a.center}, {b.xi, b.center});
    return s;
}

namespace {

Packet packet(const DerivedScales& d, Spin s) {
    return s == Spin::plus ? Packet{d.varpi_plus, -d.b_plus} : Packet{d.varpi_minus, d.b_minus};
}

}  // namespace

double overlap_S(const ModelParams& p) {
    auto d = derived_scales(p);
    return 0.5 * p.Omega() * overlap(packet(d, Spin::plus), packet(d, Spin::minus));
}

TwoLevelReduction two_level_reduce(const ModelParams& p) {
    auto d = derived_scales(p);
    const double w = p.omega();
    TwoLevelReduction r;
    r.eps_plus = 0.5 * d.varpi_plus * w + d.d_plus - p.epsilon() - 0.5 * w;
    r.eps_minus = 0.5 * d.varpi_minus * w + d.d_minus + p.epsilon() - 0.5 * w;
    r.e_plus = 0.5 * (r.eps_plus + r.eps_minus);
    // same as w dw/4 + g1^2 g2bar/(w w2^2) - eps, without cancellation
    r.e_minus = 0.25 * w * d.dw + 0.5 * (d.d_plus - d.d_minus) - p.epsilon();
    r.S_Omega = overlap_S(p);
    const double R = std::hypot(r.e_minus, r.S_Omega);
    r.B_plus = r.e_minus - R;
    r.B_minus = r.S_Omega;
    const double theta = std::atan2(r.S_Omega, -r.e_minus);
    r.c_plus = -std::cos(0.5 * theta);
    r.c_minus = std::sin(0.5 * theta);
    r.gap = 2 * R;
    r.energy = r.e_plus - R;
    return r;
}

PolaronAnsatz adiabatic_ansatz(const ModelParams& p) {
    auto d = derived_scales(p);
    auto r = two_level_reduce(p);
    PolaronAnsatz a;
    a.n_p = 1;
    a.packets[0] = {{d.varpi_plus, -d.b_plus, r.c_plus}};
    a.packets[1] = {{d.varpi_minus, d.b_minus, r.c_minus}};
    return a;
}

RhoTerms rho_terms(const ModelParams& p) {
    auto d = derived_scales(p);
    auto r = two_level_reduce(p);
    const double w = p.omega(), g = d.gbar2;
    RhoTerms t{};
    t.e_minus = r.e_minus;
    t.S = r.S_Omega;
    // d/dgbar2 at fixed g1: dd+/dg = g1^2/(w(1+g)^2), dd-/dg = -g1^2/(w(1-g)^2)
    const double g1sq_w = p.g1() * p.g1() / w;
    t.de_minus = 0.25 * w * d.wbar / d.w2 +
                 0.5 * (g1sq_w / ((1 + g) * (1 + g)) + g1sq_w / ((1 - g) * (1 - g)));

    const auto od = overlap_derivatives(packet(d, Spin::plus), packet(d, Spin::minus));
    // packet parameters as functions of gbar2
    const double dxi_p = 0.5 / d.varpi_plus, dxi_m = -0.5 / d.varpi_minus;
    const double dmu_p = d.g1prime / ((1 + g) * (1 + g));   // d(-b+)/dg
    const double dmu_m = d.g1prime / ((1 - g) * (1 - g));   // d(b-)/dg
    t.dS = 0.5 * p.Omega() * (od.d_bra[0] * dxi_p + od.d_bra[1] * dmu_p + od.d_ket[0] * dxi_m + od.d_ket[1] * dmu_m);

    const double R2 = t.e_minus * t.e_minus + t.S * t.S;
    const double R = std::sqrt(R2);
    t.B_plus = t.e_minus - R;
    t.B_minus = t.S;
    t.dB_plus = R > 0 ? t.de_minus - (t.e_minus * t.de_minus + t.S * t.dS) / R : 0;
    t.dB_minus = t.dS;
    if (R2 > 0) {
        double num = t.S * t.de_minus - t.e_minus * t.dS;
        t.F_theta = num * num / (R2 * R2);
        double bn = t.dB_plus * t.B_minus - t.B_plus * t.dB_minus;
        double bd = t.B_plus * t.B_plus + t.B_minus * t.B_minus;
        t.F_B = bd > 0 ? 4 * bn * bn / (bd * bd) : std::numeric_limits<double>::quiet_NaN();
    } else {
        t.F_theta = t.F_B = std::numeric_limits<double>::infinity();
    }
    return t;
}

QfiBreakdown qfi_analytic(const ModelParams& p) {
    auto d = derived_scales(p);
    auto r = two_level_reduce(p);
    auto t = rho_terms(p);
    const double g = d.gbar2, gT2 = d.gT * d.gT;
    const double cp2 = r.c_plus * r.c_plus, cm2 = r.c_minus * r.c_minus;

    QfiBreakdown q;
    q.method = Method::analytic;
    q.lambda = Parameter::g2;
    const double fxi = cp2 / (8 * (1 + g) * (1 + g)) + cm2 / (8 * (1 - g) * (1 - g));
    // gbar1^2 Omega / omega = 2 g1prime^2, valid also when Omega = 0
    const double fx = (cp2 / std::pow(1 + g, 3.5) + cm2 / std::pow(1 - g, 3.5)) * 2 * d.g1prime * d.g1prime;
    q.components[Resource::xi] = fxi / gT2;
    q.components[Resource::x] = fx / gT2;
    q.components[Resource::rho] = t.F_theta / gT2;
    q.components[Resource::xi_x] = 0.0;
    q.components[Resource::xi_rho] = 0.0;
    q.components[Resource::x_rho] = 0.0;
    q.total = q.components[Resource::xi] + q.components[Resource::x] + q.components[Resource::rho];
    if (!std::isfinite(t.F_theta)) q.warnings.push_back("exact level crossing with zero tunneling");
    return q;
}

PeakComponents qfi_peak_components(const ModelParams& p) {
    auto d = derived_scales(p);
    const double g = d.gbar2, gT2 = d.gT * d.gT, w = p.omega(), W = p.Omega();
    if (!(W > 0)) throw ParameterError("peak components need Omega > 0");
    PeakComponents c;
    c.eps_transition = transition_bias(w, W, d.gbar1, g);
    const double g1sq = d.gbar1 * d.gbar1;
    c.xi = (1 + g * g) / (8 * std::pow(1 - g * g, 2) * gT2);
    c.x = (std::pow(1 - g, -3.5) + std::pow(1 + g, -3.5)) * g1sq * W / (2 * w * gT2);
    const double w2 = d.w2, wb = d.wbar;
    const double br = w2 * w2 * w2 * wb * w + g1sq * (1 + g * g) * W;
    c.rho = wb * br * br / (4 * std::pow(w2, 8.5) * W * W * gT2) * std::exp(g1sq * W / (w2 * w2 * w2 * wb * w));
    return c;
}

ExponentFit fit_critical_exponent(const std::vector<double>& gbar2, const std::vector<double>& F, double lo,
                                  double hi) {
    if (gbar2.size() != F.size()) throw ParameterError("sample arrays differ in length");
    if (!(lo > 0 && hi < 1 && lo < hi)) throw ParameterError("fit window must lie inside (0,1)");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < gbar2.size(); ++i) {
        if (gbar2[i] < lo || gbar2[i] > hi) continue;
        if (!(F[i] > 0)) throw NumericalError("non-positive QFI sample inside the fit window");
        xs.push_back(std::log(1 - gbar2[i]));
        ys.push_back(std::log(F[i]));
    }
    const int n = static_cast<int>(xs.size());
    if (n < 8) throw ParameterError("exponent fit needs at least 8 samples in the window");
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double rss = 0;
    for (int i = 0; i < n; ++i) {
        double e = ys[i] - my - slope * (xs[i] - mx);
        rss += e * e;
    }
    ExponentFit f;
    f.gamma = -slope;
    f.std_error = std::sqrt(rss / (n - 2) / sxx);
    f.samples = n;
    return f;
}

std::vector<double> exponent_window(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double a = std::log(1 - lo), b = std::log(1 - hi);
    for (int i = 0; i < n; ++i) g[i] = 1 - std::exp(a + (b - a) * i / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

}  // namespace qrm
