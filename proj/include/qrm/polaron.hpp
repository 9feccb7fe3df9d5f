#pragma once

#include <array>
#include <vector>

#include "qrm/gaussian.hpp"
#include "qrm/model.hpp"
#include "qrm/qfi.hpp"

namespace qrm {

struct PolaronPacket {
    double xi = 1;
    double center = 0;
    double weight = 0;
};

/// Gaussian packets per spin; index 0 is spin up.
struct PolaronAnsatz {
    std::array<std::vector<PolaronPacket>, 2> packets;
    int n_p = 1;

    /// c^T S c with the packet overlap metric (spins orthogonal).
    double norm2() const;
};

struct TwoLevelReduction {
    double eps_plus = 0, eps_minus = 0;  // single-packet energies
    double e_plus = 0, e_minus = 0;      // (eps_+ +- eps_-)/2
    double S_Omega = 0;
    double B_plus = 0, B_minus = 0;
    double c_plus = 0, c_minus = 0;
    double gap = 0;
    double energy = 0;  // lower branch e_+ - sqrt(e_-^2 + S^2)
};

/// Tunneling element (Omega/2)<phi_+|phi_-> between the adiabatic packets.
double overlap_S(const ModelParams& p);
TwoLevelReduction two_level_reduce(const ModelParams& p);
PolaronAnsatz adiabatic_ansatz(const ModelParams& p);

/// Ingredients of the transition term, all derivatives in gbar2.
struct RhoTerms {
    double e_minus, de_minus, S, dS;
    double B_plus, B_minus, dB_plus, dB_minus;
    double F_theta;  // (S e' - e S')^2 / (e^2 + S^2)^2
    double F_B;      // 4 (B+' B- - B+ B-')^2 / (B+^2 + B-^2)^2
};
RhoTerms rho_terms(const ModelParams& p);

/// Small-Omega analytic QFI with respect to g2 (components xi, x, rho;
/// mixed components are exact zeros).
QfiBreakdown qfi_analytic(const ModelParams& p);

struct PeakComponents {
    double xi = 0, x = 0, rho = 0;
    double eps_transition = 0;
};

/// Components at the bias-induced transition (c+^2 = c-^2 = 1/2); p.epsilon is ignored.
PeakComponents qfi_peak_components(const ModelParams& p);

struct ExponentFit {
    double gamma = 0;
    double std_error = 0;
    int samples = 0;
};

/// gamma from a least-squares fit of ln F against ln(1 - gbar2) on [lo, hi].
ExponentFit fit_critical_exponent(const std::vector<double>& gbar2, const std::vector<double>& F,
                                  double lo = 0.9, double hi = 0.99);

/// n samples with 1 - gbar2 log-spaced between 1 - lo and 1 - hi.
std::vector<double> exponent_window(double lo = 0.9, double hi = 0.99, int n = 20);

}  // namespace qrm
