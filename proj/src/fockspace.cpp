#include "qrm/fockspace.hpp"

#include <cmath>
#include <string>

#include "qrm/error.hpp"

namespace qrm {

double SpinorFockVector::norm2() const { return dot(*this); }

double SpinorFockVector::dot(const SpinorFockVector& o) const {
    double s = 0;
    for (std::size_t n = 0; n < plus.size(); ++n) s += plus[n] * o.plus[n] + minus[n] * o.minus[n];
    return s;
}

void SpinorFockVector::scale(double s) {
    for (auto& x : plus) x *= s;
    for (auto& x : minus) x *= s;
}

SymmetricBandMatrix build_hamiltonian(const ModelParams& p, int cutoff) {
    if (cutoff < 1) throw ParameterError("cutoff must be at least 1");
    const int nb = cutoff + 1;
    SymmetricBandMatrix H(2 * nb, 4);
    const double w = p.omega(), half = 0.5 * p.Omega(), g1 = p.g1(), g2 = p.g2(), eps = p.epsilon();
    for (int n = 0; n < nb; ++n) {
        for (Spin s : {Spin::plus, Spin::minus}) {
            const double sg = spin_sign(s);
            const int i = fock_index(n, s);
            H.at(i, i) = w * n + sg * g2 * (2.0 * n + 1.0) - sg * eps;
            if (n + 1 < nb) H.at(fock_index(n + 1, s), i) = sg * g1 * std::sqrt(n + 1.0);
            if (n + 2 < nb) H.at(fock_index(n + 2, s), i) = sg * g2 * std::sqrt((n + 1.0) * (n + 2.0));
        }
        H.at(fock_index(n, Spin::minus), fock_index(n, Spin::plus)) = half;
    }
    return H;
}

namespace {

SpinorFockVector split(const std::vector<double>& v, int cutoff) {
    SpinorFockVector s;
    s.cutoff = cutoff;
    s.plus.resize(cutoff + 1);
    s.minus.resize(cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) {
        s.plus[n] = v[fock_index(n, Spin::plus)];
        s.minus[n] = v[fock_index(n, Spin::minus)];
    }
    return s;
}

}  // namespace

SpectrumSlice spectrum(const ModelParams& p, int cutoff, int k) {
    auto H = build_hamiltonian(p, cutoff);
    if (k < 1 || k > H.size()) throw ParameterError("eigenpair count out of range");
    DegeneracyWeight spin_up;
    spin_up.w.resize(H.size());
    for (int i = 0; i < H.size(); ++i) spin_up.w[i] = (i % 2 == 0) ? 1.0 : 0.0;
    auto ep = lowest_eigenpairs(H, k, &spin_up);

    SpectrumSlice out;
    out.cutoff = cutoff;
    out.energies = ep.values;
    out.converged = true;
    const int tail_from = cutoff + 1 - std::max(1, (cutoff + 1) / 10);
    for (auto& v : ep.vectors) {
        out.vectors.push_back(split(v, cutoff));
        if (tail_weight(out.vectors.back(), tail_from) > 1e-12) out.converged = false;
    }
    return out;
}

double ground_energy(const ModelParams& p, int cutoff) {
    return lowest_eigenvalues(build_hamiltonian(p, cutoff), 1)[0];
}

int converge_cutoff(const ModelParams& p, const CutoffOptions& opt) {
    const double tol = opt.tol > 0 ? opt.tol : 1e-10 * p.omega();
    int N = std::max(1, opt.start);
    double e = ground_energy(p, N);
    while (2 * N <= opt.ceiling) {
        double e2 = ground_energy(p, 2 * N);
        if (std::abs(e2 - e) < tol) return N;
        N *= 2;
        e = e2;
    }
    throw NumericalError("Fock cutoff not converged below ceiling " + std::to_string(opt.ceiling) +
                         " (g2/gT = " + std::to_string(p.g2() / p.gT()) + ")");
}

double sigma_z(const SpinorFockVector& v) {
    double s = 0;
    for (std::size_t n = 0; n < v.plus.size(); ++n) s += v.plus[n] * v.plus[n] - v.minus[n] * v.minus[n];
    return s;
}

double momentum_variance(const std::vector<double>& c) {
    // p = i(a^dag - a)/sqrt2 ; p^2 = (2 a^dag a + 1 - a^2 - a^dag^2)/2
    double w = 0, num = 0;
    const std::size_t N = c.size();
    for (std::size_t n = 0; n < N; ++n) {
        w += c[n] * c[n];
        num += c[n] * c[n] * (2.0 * n + 1.0);
        if (n + 2 < N) num -= 2.0 * c[n] * c[n + 2] * std::sqrt((n + 1.0) * (n + 2.0));
    }
    return w > 0 ? 0.5 * num / w : 0.0;
}

double tail_weight(const SpinorFockVector& v, int from) {
    double s = 0;
    for (std::size_t n = std::max(0, from); n < v.plus.size(); ++n) s += v.plus[n] * v.plus[n] + v.minus[n] * v.minus[n];
    return s;
}

double gap_ed(const ModelParams& p, int cutoff) {
    auto e = lowest_eigenvalues(build_hamiltonian(p, cutoff), 2);
    return std::max(0.0, e[1] - e[0]);
}

}  // namespace qrm
