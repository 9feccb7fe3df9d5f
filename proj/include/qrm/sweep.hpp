#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qrm/grid.hpp"
#include "qrm/model.hpp"
#include "qrm/qfi.hpp"

namespace qrm {

enum class Quantity { sigma_z, qfi_ed, qfi_analytic, gap, energy };

std::string_view to_string(Quantity q);
Quantity parse_quantity(std::string_view s);

/// fixed > 0 uses that cutoff everywhere; otherwise converge_cutoff(tol) per point.
struct CutoffPolicy {
    int fixed = 0;
    double tol = 0;
};

int cutoff_for(const ModelParams& p, const CutoffPolicy& c);

struct SweepSpec {
    ModelParams base{1, 0, 0, 0, 0};
    std::vector<Axis> axes;  // names: omega Omega g1 g2 epsilon gbar1 gbar2
    std::vector<Quantity> quantities;
    Parameter lambda = Parameter::g2;  // for QFI quantities
    CutoffPolicy cutoff;
    int threads = 0;  // 0 -> default_threads()
};

/// Thread count from QRM_THREADS, else the hardware concurrency.
int default_threads();

/// Runs fn(i) for i in [0, n) on a shared atomic work counter. Exceptions
/// escaping fn are rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Base parameters with axis values applied; absolute couplings first, then
/// rescaled gbar1/gbar2 so they see the final omega and Omega.
ModelParams apply_axes(const ModelParams& base, const std::vector<std::string>& names,
                       const std::vector<double>& values);

GridResult run_sweep(const SweepSpec& spec);

struct EnvelopePoint {
    double gbar2 = 0;
    double peak = 0;      // max over the bias grid of F(g2)
    double eps_star = 0;
    double eps_transition = 0;  // analytic locator for comparison
    bool at_boundary = false;
};

/// Envelope over bias of the g2-QFI at each gbar2; the bias grid is given
/// relative to transition_bias at that gbar2 (eps = eps_max + offset).
std::vector<EnvelopePoint> qfi_envelope(const ModelParams& base, const std::vector<double>& gbar2,
                                        const std::vector<double>& eps_offsets, const QfiOptions& opt = {},
                                        int threads = 0);

struct PtpsPath {
    Parameter coupling = Parameter::g2;  // g1 or g2, swept in rescaled units from 0
    std::optional<double> gbar_max;      // override for the endpoint
    double scan_hi = 0;                  // 0 -> 0.999 for g2, 1.5 for g1
    int scan_points = 240;
    double rel_tol = 1e-4;               // quadrature refinement target
    int max_evaluations = 4000;
};

struct PtpsResult {
    double T = 0;
    bool divergent = false;
    double divergent_at = 0;
    double gbar_max = 0;
    std::string coupling;
    int cutoff = 0;
    std::vector<double> gbar, inv_gap;  // integrand samples, ascending gbar
    double refinement_change = 0;       // relative change of the last refinement
};

/// Integral of 1/gap over [0, b] by adaptive trapezoid; nodes are added where
/// the local trapezoid/midpoint discrepancy is largest. When the gap falls
/// below tiny the result is flagged divergent.
PtpsResult integrate_inverse_gap(const std::function<double(double)>& gap, double b, double tiny,
                                 double rel_tol = 1e-4, int max_evaluations = 4000);

/// Largest interior local maximum of the ED QFI along the coupling path.
/// cutoff <= 0 sizes the cutoff per point.
double locate_qfi_peak(const ModelParams& p, Parameter coupling, double scan_hi, int scan_points, int cutoff,
                       int threads = 0);

PtpsResult ptps(const ModelParams& p, const PtpsPath& path, const CutoffPolicy& cutoff = {}, int threads = 0);

}  // namespace qrm
