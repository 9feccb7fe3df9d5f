#include "qrm/band_eigen.hpp"

#include <lapacke.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qrm/error.hpp"

namespace qrm {

SymmetricBandMatrix::SymmetricBandMatrix(int n, int kd)
    : n_(n), kd_(kd), ab_(static_cast<std::size_t>(kd + 1) * n, 0.0) {}

double& SymmetricBandMatrix::at(int i, int j) {
    return ab_[static_cast<std::size_t>(i - j) + static_cast<std::size_t>(j) * (kd_ + 1)];
}

double SymmetricBandMatrix::get(int i, int j) const {
    if (i < j) std::swap(i, j);
    if (i - j > kd_) return 0.0;
    return ab_[static_cast<std::size_t>(i - j) + static_cast<std::size_t>(j) * (kd_ + 1)];
}

void SymmetricBandMatrix::multiply(const double* x, double* y) const {
    std::fill(y, y + n_, 0.0);
    for (int j = 0; j < n_; ++j) {
        const double* col = ab_.data() + static_cast<std::size_t>(j) * (kd_ + 1);
        y[j] += col[0] * x[j];
        int last = std::min(kd_, n_ - 1 - j);
        for (int d = 1; d <= last; ++d) {
            y[j + d] += col[d] * x[j];
            y[j] += col[d] * x[j + d];
        }
    }
}

double SymmetricBandMatrix::max_abs_row_sum() const {
    std::vector<double> s(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
        const double* col = ab_.data() + static_cast<std::size_t>(j) * (kd_ + 1);
        s[j] += std::abs(col[0]);
        int last = std::min(kd_, n_ - 1 - j);
        for (int d = 1; d <= last; ++d) {
            s[j + d] += std::abs(col[d]);
            s[j] += std::abs(col[d]);
        }
    }
    return *std::max_element(s.begin(), s.end());
}

std::vector<double> lowest_eigenvalues(const SymmetricBandMatrix& A, int k) {
    const int n = A.size(), kd = A.bandwidth();
    if (k < 1 || k > n) throw NumericalError("requested eigenvalue count out of range");
    std::vector<double> ab = A.data();  // dsbevx overwrites
    std::vector<double> w(n), q(1);
    std::vector<lapack_int> ifail(n);
    lapack_int m = 0;
    double abstol = 2.0 * LAPACKE_dlamch('S');
    lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, kd, ab.data(), kd + 1,
                                     q.data(), 1, 0.0, 0.0, 1, k, abstol, &m, w.data(), nullptr,
                                     1, ifail.data());
    if (info != 0 || m != k)
        throw NumericalError("dsbevx failed (info=" + std::to_string(info) + ")");
    w.resize(k);
    return w;
}

namespace {

// Banded LU of (A - shift I) in LAPACK general band storage.
struct BandLU {
    int n, kl;
    std::vector<double> ab;
    std::vector<lapack_int> ipiv;

    BandLU(const SymmetricBandMatrix& A, double shift) : n(A.size()), kl(A.bandwidth()) {
        const int ldab = 3 * kl + 1;
        ab.assign(static_cast<std::size_t>(ldab) * n, 0.0);
        ipiv.resize(n);
        for (int j = 0; j < n; ++j) {
            for (int i = std::max(0, j - kl); i <= std::min(n - 1, j + kl); ++i) {
                double v = A.get(i, j) - (i == j ? shift : 0.0);
                ab[static_cast<std::size_t>(2 * kl + i - j) + static_cast<std::size_t>(j) * ldab] = v;
            }
        }
        lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl, kl, ab.data(), ldab, ipiv.data());
        if (info < 0) throw NumericalError("dgbtrf argument error");
        if (info > 0) singular = true;
    }

    void solve(std::vector<double>& b) const {
        lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, kl, 1, ab.data(), 3 * kl + 1,
                                         ipiv.data(), b.data(), n);
        if (info != 0) throw NumericalError("dgbtrs failed");
    }

    bool singular = false;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void normalize(std::vector<double>& v) {
    double s = std::sqrt(dot(v, v));
    for (auto& x : v) x /= s;
}

// Sign convention: largest-magnitude entry positive; the first index within
// a relative 1e-10 of the maximum decides, so near ties are deterministic.
void fix_gauge(std::vector<double>& v) {
    double mx = 0;
    for (double x : v) mx = std::max(mx, std::abs(x));
    for (double x : v) {
        if (std::abs(x) >= (1 - 1e-10) * mx) {
            if (x < 0)
                for (auto& y : v) y = -y;
            return;
        }
    }
}

}  // namespace

BandEigenpairs lowest_eigenpairs(const SymmetricBandMatrix& A, int k, const DegeneracyWeight* tie_break) {
    const int n = A.size();
    BandEigenpairs out;
    out.values = lowest_eigenvalues(A, k);

    const double scale = std::max(1.0, A.max_abs_row_sum());
    const double eps = std::numeric_limits<double>::epsilon();
    // eigenvalues closer than this are treated as one cluster
    const double cluster_tol = 1e-10 * scale;
    const double degenerate_tol = 1e3 * eps * scale;

    std::vector<std::vector<double>> vecs;
    vecs.reserve(k);
    int start = 0;
    while (start < k) {
        int end = start + 1;
        while (end < k && out.values[end] - out.values[end - 1] < cluster_tol) ++end;

        for (int idx = start; idx < end; ++idx) {
            // shift slightly below the eigenvalue; an exact shift can hit a zero pivot
            double shift = out.values[idx] - 4 * eps * scale;
            BandLU lu(A, shift);
            if (lu.singular) lu = BandLU(A, out.values[idx] - 64 * eps * scale);
            if (lu.singular) throw NumericalError("inverse iteration: singular shifted matrix");

            std::vector<double> v(n);
            for (int i = 0; i < n; ++i)
                v[i] = 1.0 + 0.25 * std::cos(0.7 * (i + 1) + 1.3 * idx) + 0.1 * std::sin(0.31 * (i + 1) * (idx + 1));
            normalize(v);
            for (int it = 0; it < 4; ++it) {
                lu.solve(v);
                for (int c = start; c < idx; ++c) {
                    double o = dot(v, vecs[c]);
                    for (int i = 0; i < n; ++i) v[i] -= o * vecs[c][i];
                }
                normalize(v);
            }
            vecs.push_back(std::move(v));
        }

        // Rayleigh-Ritz inside the cluster, then an optional tie-break on
        // exactly degenerate subspaces.
        const int m = end - start;
        if (m > 1) {
            Eigen::MatrixXd V(n, m);
            for (int c = 0; c < m; ++c)
                for (int i = 0; i < n; ++i) V(i, c) = vecs[start + c][i];
            Eigen::MatrixXd AV(n, m);
            for (int c = 0; c < m; ++c) A.multiply(V.col(c).data(), AV.col(c).data());
            Eigen::MatrixXd Hs = V.transpose() * AV;
            Hs = 0.5 * (Hs + Hs.transpose()).eval();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs);
            Eigen::MatrixXd R = es.eigenvectors();
            Eigen::VectorXd ev = es.eigenvalues();
            if (tie_break) {
                Eigen::MatrixXd W = V * R;
                int a = 0;
                while (a < m) {
                    int b = a + 1;
                    while (b < m && ev(b) - ev(b - 1) < degenerate_tol) ++b;
                    if (b - a > 1) {
                        Eigen::MatrixXd P(b - a, b - a);
                        for (int r = a; r < b; ++r)
                            for (int c = a; c < b; ++c) {
                                double s = 0;
                                for (int i = 0; i < n; ++i) s += tie_break->w[i] * W(i, r) * W(i, c);
                                P(r - a, c - a) = s;
                            }
                        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ps(P);
                        // descending expectation of the weight
                        Eigen::MatrixXd Q = ps.eigenvectors().rowwise().reverse();
                        R.middleCols(a, b - a) = (R.middleCols(a, b - a) * Q).eval();
                    }
                    a = b;
                }
            }
            Eigen::MatrixXd Vn = V * R;
            for (int c = 0; c < m; ++c)
                for (int i = 0; i < n; ++i) vecs[start + c][i] = Vn(i, c);
        }
        start = end;
    }

    std::vector<double> r(n);
    for (int c = 0; c < k; ++c) {
        auto& v = vecs[c];
        normalize(v);
        fix_gauge(v);
        A.multiply(v.data(), r.data());
        double ray = dot(v, r);
        for (int i = 0; i < n; ++i) r[i] -= ray * v[i];
        double res = std::sqrt(dot(r, r));
        out.max_residual = std::max(out.max_residual, res);
        if (res > 1e-9 * scale)
            throw NumericalError("inverse iteration did not converge (residual " + std::to_string(res) +
                                 " for eigenpair " + std::to_string(c) + ")");
    }
    out.vectors = std::move(vecs);
    return out;
}

}  // namespace qrm
