#pragma once

#include <vector>

#include "qrm/fockspace.hpp"

namespace qrm {

struct Wavefunction {
    std::vector<double> x, plus, minus;
    double boundary_max = 0;  // largest |psi| at the two grid ends
    bool covers_support = true;  // boundary_max <= 1e-6
};

Wavefunction position_wavefunction(const SpinorFockVector& v, const std::vector<double>& x);

/// Radius beyond which both spin components stay below thr.
double support_radius(const SpinorFockVector& v, double thr = 1e-10);

/// Values stored row-major: value[ix * p.size() + ip].
struct WignerGrid {
    std::vector<double> x, p;
    std::vector<double> plus, minus;
    int cutoff = 0;
    double imag_residue = 0;   // largest |Im W| seen on the check rows
    double refine_change = 0;  // largest change on check rows when the quadrature is refined
    bool support_warning = false;

    double at_plus(std::size_t ix, std::size_t ip) const { return plus[ix * p.size() + ip]; }
    double at_minus(std::size_t ix, std::size_t ip) const { return minus[ix * p.size() + ip]; }
    /// sum (W+ + W-) dx dp on the grid (rectangle rule)
    double total_integral() const;
};

/// Spin-resolved Wigner functions on a uniform x grid and any p grid.
/// Throws NumericalError when refining the y quadrature changes values by > 1e-4.
WignerGrid wigner(const SpinorFockVector& v, const std::vector<double>& x, const std::vector<double>& p);

struct WignerOptions {
    int nx = 256, np = 256;
    double Lx = 0, Lp = 0;  // 0 -> automatic
};

/// Default grid sizing from the state: x half-width from the support radius,
/// p half-width from the momentum spread, both at least 6.
WignerGrid wigner_auto(const SpinorFockVector& v, const WignerOptions& opt = {});

std::vector<double> linspace(double a, double b, int n);

}  // namespace qrm
