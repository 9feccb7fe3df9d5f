#pragma once

#include <cstddef>
#include <vector>

namespace qrm {

/// Real symmetric band matrix, lower storage in LAPACK layout:
/// element (i, j) with 0 <= i - j <= kd lives at ab[(i - j) + j * (kd + 1)].
class SymmetricBandMatrix {
public:
    SymmetricBandMatrix(int n, int kd);

    int size() const { return n_; }
    int bandwidth() const { return kd_; }

    double& at(int i, int j);  // requires 0 <= i - j <= kd
    double get(int i, int j) const;  // any (i, j); zero outside the band

    const std::vector<double>& data() const { return ab_; }

    void multiply(const double* x, double* y) const;
    double max_abs_row_sum() const;

private:
    int n_, kd_;
    std::vector<double> ab_;
};

struct BandEigenpairs {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
    double max_residual = 0;
};

/// Optional tie-break for exactly degenerate eigenvectors: a diagonal weight
/// w[i]; inside a degenerate cluster vectors are rotated to diagonalize
/// sum_i w[i] v_i v_i and ordered by decreasing expectation.
struct DegeneracyWeight {
    std::vector<double> w;
};

/// Lowest k eigenpairs. Eigenvalues by bisection on the tridiagonal form
/// (dsbevx), eigenvectors by shifted inverse iteration with a banded LU.
/// Throws NumericalError when LAPACK fails or residuals are too large.
BandEigenpairs lowest_eigenpairs(const SymmetricBandMatrix& A, int k,
                                 const DegeneracyWeight* tie_break = nullptr);

/// Eigenvalues only.
std::vector<double> lowest_eigenvalues(const SymmetricBandMatrix& A, int k);

}  // namespace qrm
