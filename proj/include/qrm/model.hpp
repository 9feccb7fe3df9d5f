#pragma once

#include <string>
#include <string_view>

namespace qrm {

enum class Parameter { omega, Omega, g1, g2, epsilon };
enum class Spin { plus, minus };

std::string_view to_string(Parameter p);
Parameter parse_parameter(std::string_view name);

inline double spin_sign(Spin s) { return s == Spin::plus ? 1.0 : -1.0; }

/// Physical parameters of the biased linear+nonlinear Rabi Hamiltonian
///   H = omega a^dag a + (Omega/2) sx + g1 sz (a^dag + a) + g2 sz (a^dag + a)^2 - epsilon sz
/// Construction validates omega > 0, Omega >= 0 and 0 <= g2 < omega/4.
class ModelParams {
public:
    ModelParams(double omega, double Omega, double g1, double g2, double epsilon);

    /// Build from the rescaled couplings gbar1 = g1/gs, gbar2 = g2/gT.
    static ModelParams from_scaled(double omega, double Omega, double gbar1, double gbar2,
                                   double epsilon);

    double omega() const { return omega_; }
    double Omega() const { return Omega_; }
    double g1() const { return g1_; }
    double g2() const { return g2_; }
    double epsilon() const { return epsilon_; }

    double get(Parameter p) const;
    ModelParams with(Parameter p, double value) const;

    double gT() const { return omega_ / 4.0; }
    double gs() const;

    bool operator==(const ModelParams&) const = default;

private:
    double omega_, Omega_, g1_, g2_, epsilon_;
};

struct DerivedScales {
    double gT, gs;
    double gbar1;  // NaN when gs == 0 and g1 != 0
    double gbar2;
    double g1prime;
    double varpi_plus, varpi_minus;
    double b_plus, b_minus;
    double d_plus, d_minus;
    double wbar, dw, w2;
};

DerivedScales derived_scales(const ModelParams& p);

/// v_sigma(x) in completed-square form.
double effective_potential(const ModelParams& p, Spin s, double x);
/// Same potential from the direct expansion; kept for cross-checking.
double effective_potential_expanded(const ModelParams& p, Spin s, double x);

/// Position of the spin-resolved potential minimum (dimensionless x).
double potential_center(const ModelParams& p, Spin s);

double transition_bias(double omega, double Omega, double gbar1, double gbar2);
/// Inverse of transition_bias in gbar1. Throws ParameterError when the bias is
/// below the gbar1 = 0 threshold.
double transition_g1(double omega, double Omega, double gbar2, double epsilon);
double low_freq_boundary(double gbar2, double epsilon, double Omega);

}  // namespace qrm
