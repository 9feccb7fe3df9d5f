#pragma once

#include <vector>

#include "qrm/band_eigen.hpp"
#include "qrm/model.hpp"

namespace qrm {

/// Eigenvector split into spin components, c_n^+ and c_n^- for n = 0..cutoff.
struct SpinorFockVector {
    std::vector<double> plus, minus;
    int cutoff = 0;

    double norm2() const;
    double dot(const SpinorFockVector& o) const;
    void scale(double s);
};

struct SpectrumSlice {
    std::vector<double> energies;
    std::vector<SpinorFockVector> vectors;
    int cutoff = 0;
    bool converged = false;  // Fock tail weight below 1e-12 for every vector
};

/// Basis index of |n, s> in the interleaved ordering (s = 0 for spin up).
inline int fock_index(int n, Spin s) { return 2 * n + (s == Spin::plus ? 0 : 1); }

/// Truncated Hamiltonian, photon numbers 0..cutoff, bandwidth 4.
SymmetricBandMatrix build_hamiltonian(const ModelParams& p, int cutoff);

SpectrumSlice spectrum(const ModelParams& p, int cutoff, int k);
double ground_energy(const ModelParams& p, int cutoff);

struct CutoffOptions {
    double tol = 0;  // 0 -> 1e-10 omega
    int start = 16;
    int ceiling = 4096;
};

/// Smallest N on the doubling schedule with |E0(2N) - E0(N)| < tol.
/// Throws NumericalError when 2N would exceed the ceiling.
int converge_cutoff(const ModelParams& p, const CutoffOptions& opt = {});

double sigma_z(const SpinorFockVector& v);
/// <x^2> - style helpers used for grid sizing: expectation of p^2 per spin branch,
/// normalized by that branch's weight (0 when the branch is empty).
double momentum_variance(const std::vector<double>& c);
/// Total Fock weight with n >= from, over both spins.
double tail_weight(const SpinorFockVector& v, int from);

double gap_ed(const ModelParams& p, int cutoff);

}  // namespace qrm
