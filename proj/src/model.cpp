#include "qrm/model.hpp"

#include <cmath>
#include <limits>

#include "qrm/error.hpp"

namespace qrm {

std::string_view to_string(Parameter p) {
    switch (p) {
        case Parameter::omega: return "omega";
        case Parameter::Omega: return "Omega";
        case Parameter::g1: return "g1";
        case Parameter::g2: return "g2";
        case Parameter::epsilon: return "epsilon";
    }
    return "?";
}

Parameter parse_parameter(std::string_view name) {
    if (name == "omega") return Parameter::omega;
    if (name == "Omega") return Parameter::Omega;
    if (name == "g1") return Parameter::g1;
    if (name == "g2") return Parameter::g2;
    if (name == "epsilon" || name == "eps") return Parameter::epsilon;
    throw ParameterError("unknown parameter '" + std::string(name) + "'");
}

ModelParams::ModelParams(double omega, double Omega, double g1, double g2, double epsilon)
    : omega_(omega), Omega_(Omega), g1_(g1), g2_(g2), epsilon_(epsilon) {
    if (!std::isfinite(omega) || !std::isfinite(Omega) || !std::isfinite(g1) ||
        !std::isfinite(g2) || !std::isfinite(epsilon))
        throw ParameterError("parameters must be finite");
    if (!(omega > 0)) throw ParameterError("omega must be positive");
    if (Omega < 0) throw ParameterError("Omega must be non-negative");
    if (g2 < 0) throw ParameterError("g2 must be non-negative");
    if (g2 >= omega / 4.0)
        throw ParameterError("g2 must stay below the collapse point omega/4 (spectrum unbounded below)");
}

ModelParams ModelParams::from_scaled(double omega, double Omega, double gbar1, double gbar2,
                                     double epsilon) {
    double gs = std::sqrt(omega * Omega) / 2.0;
    return ModelParams(omega, Omega, gbar1 * gs, gbar2 * omega / 4.0, epsilon);
}

double ModelParams::gs() const { return std::sqrt(omega_ * Omega_) / 2.0; }

double ModelParams::get(Parameter p) const {
    switch (p) {
        case Parameter::omega: return omega_;
        case Parameter::Omega: return Omega_;
        case Parameter::g1: return g1_;
        case Parameter::g2: return g2_;
        case Parameter::epsilon: return epsilon_;
    }
    return 0;
}

ModelParams ModelParams::with(Parameter p, double v) const {
    ModelParams q = *this;
    switch (p) {
        case Parameter::omega: return ModelParams(v, Omega_, g1_, g2_, epsilon_);
        case Parameter::Omega: return ModelParams(omega_, v, g1_, g2_, epsilon_);
        case Parameter::g1: return ModelParams(omega_, Omega_, v, g2_, epsilon_);
        case Parameter::g2: return ModelParams(omega_, Omega_, g1_, v, epsilon_);
        case Parameter::epsilon: return ModelParams(omega_, Omega_, g1_, g2_, v);
    }
    return q;
}

DerivedScales derived_scales(const ModelParams& p) {
    DerivedScales d{};
    const double w = p.omega();
    d.gT = w / 4.0;
    d.gs = p.gs();
    if (d.gs > 0)
        d.gbar1 = p.g1() / d.gs;
    else
        d.gbar1 = p.g1() == 0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    d.gbar2 = p.g2() / d.gT;
    d.g1prime = std::sqrt(2.0) * p.g1() / w;
    d.varpi_plus = std::sqrt(1.0 + d.gbar2);
    d.varpi_minus = std::sqrt(1.0 - d.gbar2);
    d.b_plus = d.g1prime / (1.0 + d.gbar2);
    d.b_minus = d.g1prime / (1.0 - d.gbar2);
    // -gbar1^2 Omega / (4(1 +- gbar2)) written without gs so Omega = 0 is fine
    d.d_plus = -p.g1() * p.g1() / (w * (1.0 + d.gbar2));
    d.d_minus = -p.g1() * p.g1() / (w * (1.0 - d.gbar2));
    d.wbar = 0.5 * (d.varpi_plus + d.varpi_minus);
    d.dw = d.varpi_plus - d.varpi_minus;
    d.w2 = d.varpi_plus * d.varpi_minus;
    return d;
}

double potential_center(const ModelParams& p, Spin s) {
    auto d = derived_scales(p);
    return s == Spin::plus ? -d.b_plus : d.b_minus;
}

double effective_potential(const ModelParams& p, Spin s, double x) {
    auto d = derived_scales(p);
    const double w = p.omega();
    if (s == Spin::plus) {
        double u = x + d.b_plus;
        return 0.5 * w * d.varpi_plus * d.varpi_plus * u * u + d.d_plus - p.epsilon() - 0.5 * w;
    }
    double u = x - d.b_minus;
    return 0.5 * w * d.varpi_minus * d.varpi_minus * u * u + d.d_minus + p.epsilon() - 0.5 * w;
}

double effective_potential_expanded(const ModelParams& p, Spin s, double x) {
    const double sg = spin_sign(s);
    const double w = p.omega();
    return 0.5 * w * x * x + sg * 2.0 * p.g2() * x * x + sg * std::sqrt(2.0) * p.g1() * x -
           sg * p.epsilon() - 0.5 * w;
}

double transition_bias(double omega, double Omega, double gbar1, double gbar2) {
    if (!(gbar2 >= 0 && gbar2 < 1)) throw ParameterError("gbar2 must lie in [0,1)");
    const double wp = std::sqrt(1 + gbar2), wm = std::sqrt(1 - gbar2);
    return 0.25 * omega * (wp - wm) + gbar1 * gbar1 * gbar2 * Omega / (4.0 * (1 - gbar2 * gbar2));
}

double transition_g1(double omega, double Omega, double gbar2, double epsilon) {
    if (!(gbar2 > 0 && gbar2 < 1)) throw ParameterError("gbar2 must lie in (0,1)");
    if (!(Omega > 0)) throw ParameterError("Omega must be positive");
    const double wp = std::sqrt(1 + gbar2), wm = std::sqrt(1 - gbar2);
    const double rad = epsilon - 0.25 * omega * (wp - wm);
    if (rad < 0) throw ParameterError("no transition at this (epsilon, gbar2)");
    return std::sqrt(4.0 * rad * (1 - gbar2 * gbar2) / (gbar2 * Omega));
}

double low_freq_boundary(double gbar2, double epsilon, double Omega) {
    if (!(gbar2 > 0 && gbar2 < 1)) throw ParameterError("gbar2 must lie in (0,1)");
    if (!(Omega > 0)) throw ParameterError("Omega must be positive");
    return (1.0 + epsilon / (gbar2 * Omega)) * std::sqrt(1 - gbar2 * gbar2);
}

}  // namespace qrm
