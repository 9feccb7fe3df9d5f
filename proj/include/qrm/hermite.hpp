#pragma once

#include <vector>

namespace qrm {

/// sum_n c[n] h_n(x) for orthonormal Hermite functions h_n, evaluated by the
/// normalized three-term recurrence with a running exponent so large |x| and
/// large n neither overflow nor underflow.
double hermite_series(const std::vector<double>& c, double x);

/// h_0(x) .. h_nmax(x).
std::vector<double> hermite_functions(int nmax, double x);

}  // namespace qrm
