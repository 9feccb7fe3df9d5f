#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrm/fockspace.hpp"
#include "qrm/model.hpp"

namespace qrm {

enum class Method { ed, analytic, multipolaron };
enum class Resource { xi, x, rho, xi_x, xi_rho, x_rho };

std::string_view to_string(Method m);
std::string_view to_string(Resource r);

struct QfiBreakdown {
    double total = 0;
    std::map<Resource, double> components;  // empty for ED
    // multipolaron only: split of each component into same-packet and
    // cross-packet contributions
    std::map<Resource, double> intra, inter;
    Method method = Method::ed;
    Parameter lambda = Parameter::g2;
    double step = 0;    // finite-difference step actually used (0 for analytic)
    int cutoff = 0;     // ED only
    // diagnostics
    double overlap_term = 0;    // 4 <psi'|psi>^2, subtracted
    double richardson_rel = 0;  // |F(h) - F(h/2)| / F(h/2)
    bool one_sided = false;
    std::vector<std::string> warnings;

    /// Rescaled value F(gbar) = scale^2 F(lambda) with scale = gT for g2, gs for g1.
    double rescaled(const ModelParams& p) const;
};

struct QfiOptions {
    double step = 0;      // 0 -> default per parameter
    int cutoff = 0;       // 0 -> converge_cutoff
    double cutoff_tol = 0;  // 0 -> 1e-10 omega
    bool richardson = true;
    double richardson_tol = 0.01;
    int max_shrink = 6;
};

double default_step(const ModelParams& p, Parameter lambda);
int resolve_cutoff(const ModelParams& p, const QfiOptions& opt);

/// QFI of the ground state with respect to lambda from gauge-aligned finite
/// differences of ED coefficients.
QfiBreakdown qfi_ed(const ModelParams& p, Parameter lambda, const QfiOptions& opt = {});

/// 4(sum dc^2 - (sum dc c)^2) from a central stencil; lo and hi are sign
/// aligned to mid first, so the overall sign of any input is irrelevant.
/// Throws NumericalError when an aligned overlap is below 0.5.
double qfi_central(SpinorFockVector lo, const SpinorFockVector& mid, SpinorFockVector hi, double h);

/// |<psi(lambda)|psi(lambda + delta)>| of ED ground states.
double fidelity(const ModelParams& p, Parameter lambda, double delta, int cutoff);

struct BiasPeak {
    double eps_star = 0;
    double peak = 0;
    bool at_boundary = false;
    std::vector<double> eps_grid;
    std::vector<double> values;  // NaN where evaluation failed
};

/// Maximum over the bias grid of the g2-QFI (p.epsilon is ignored).
/// With refine, the grid argmax is polished by golden-section search in the
/// neighbouring grid cells.
BiasPeak qfi_peak_over_bias(const ModelParams& p, const std::vector<double>& eps_grid,
                            const QfiOptions& opt = {}, bool refine = false);

}  // namespace qrm
