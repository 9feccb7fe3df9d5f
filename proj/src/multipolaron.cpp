#include "qrm/multipolaron.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "qrm/error.hpp"
#include "qrm/gaussian.hpp"

namespace qrm {

namespace {

// forward-mode dual number over the four parameters of a packet pair
struct Dual {
    double v = 0;
    std::array<double, 4> d{};

    Dual() = default;
    Dual(double x) : v(x) {}
    static Dual var(double x, int i) {
        Dual r(x);
        r.d[i] = 1;
        return r;
    }
};

Dual operator+(Dual a, const Dual& b) {
    a.v += b.v;
    for (int i = 0; i < 4; ++i) a.d[i] += b.d[i];
    return a;
}
Dual operator-(Dual a, const Dual& b) {
    a.v -= b.v;
    for (int i = 0; i < 4; ++i) a.d[i] -= b.d[i];
    return a;
}
Dual operator*(const Dual& a, const Dual& b) {
    Dual r(a.v * b.v);
    for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
}
Dual operator/(const Dual& a, const Dual& b) {
    Dual r(a.v / b.v);
    for (int i = 0; i < 4; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) / (b.v * b.v);
    return r;
}
Dual chain(const Dual& a, double f, double df) {
    Dual r(f);
    for (int i = 0; i < 4; ++i) r.d[i] = df * a.d[i];
    return r;
}
Dual exp(const Dual& a) {
    double e = std::exp(a.v);
    return chain(a, e, e);
}
Dual sqrt(const Dual& a) {
    double s = std::sqrt(a.v);
    return chain(a, s, 0.5 / s);
}

struct Block {
    Dual S, H;
};

// overlap and Hamiltonian element between two packets of the same spin
Block same_spin(const ModelParams& p, double sg, double ua, double ma, double ub, double mb) {
    Dual xa = exp(Dual::var(ua, 0)), mua = Dual::var(ma, 1);
    Dual xb = exp(Dual::var(ub, 2)), mub = Dual::var(mb, 3);
    Dual A = xa + xb, D = mua - mub, P = xa * xb / A;
    Dual S = sqrt(sqrt(xa * xb)) * sqrt(Dual(2.0) / A) * exp(Dual(-0.5) * P * D * D);
    Dual m = (xa * mua + xb * mub) / A;
    Dual x1 = S * m;
    Dual x2 = S * (m * m + Dual(1.0) / A);
    Dual p2 = S * P * (Dual(1.0) - P * D * D);
    const double w = p.omega();
    Dual H = Dual(0.5 * w) * p2 + Dual(0.5 * w + 2 * sg * p.g2()) * x2 + Dual(sg * std::sqrt(2.0) * p.g1()) * x1 +
             Dual(-0.5 * w - sg * p.epsilon()) * S;
    return {S, H};
}

Dual cross_overlap(double ua, double ma, double ub, double mb) {
    Dual xa = exp(Dual::var(ua, 0)), mua = Dual::var(ma, 1);
    Dual xb = exp(Dual::var(ub, 2)), mub = Dual::var(mb, 3);
    Dual A = xa + xb, D = mua - mub, P = xa * xb / A;
    return sqrt(sqrt(xa * xb)) * sqrt(Dual(2.0) / A) * exp(Dual(-0.5) * P * D * D);
}

constexpr int spin_of(int i) { return i < 2 ? 0 : 1; }

struct Matrices {
    Eigen::Matrix4d H, S;
    std::array<Eigen::Matrix4d, 8> dH, dS;
};

Matrices assemble(const ModelParams& p, const std::array<double, 8>& th) {
    Matrices M;
    M.H.setZero();
    M.S.setZero();
    for (auto& m : M.dH) m.setZero();
    for (auto& m : M.dS) m.setZero();
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            const double ua = th[2 * i], ma = th[2 * i + 1], ub = th[2 * j], mb = th[2 * j + 1];
            Dual S, H;
            if (spin_of(i) == spin_of(j)) {
                auto b = same_spin(p, spin_of(i) == 0 ? 1.0 : -1.0, ua, ma, ub, mb);
                S = b.S;
                H = b.H;
            } else {
                H = Dual(0.5 * p.Omega()) * cross_overlap(ua, ma, ub, mb);
            }
            M.H(i, j) = M.H(j, i) = H.v;
            M.S(i, j) = M.S(j, i) = S.v;
            // map pair derivatives onto the global parameter slots
            for (int k = 0; k < 2; ++k) {
                M.dH[2 * i + k](i, j) += H.d[k];
                M.dS[2 * i + k](i, j) += S.d[k];
                M.dH[2 * j + k](i, j) += H.d[2 + k];
                M.dS[2 * j + k](i, j) += S.d[2 + k];
            }
            if (i != j)
                for (int k = 0; k < 8; ++k) {
                    M.dH[k](j, i) = M.dH[k](i, j);
                    M.dS[k](j, i) = M.dS[k](i, j);
                }
        }
    }
    return M;
}

// Lowest generalized eigenpair by canonical orthogonalization.
double lowest(const Matrices& M, Eigen::Vector4d& c) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> so(M.S);
    const auto& s = so.eigenvalues();
    const double smax = s.maxCoeff();
    int keep = 0;
    for (int i = 0; i < 4; ++i)
        if (s(i) > 1e-12 * smax) ++keep;
    Eigen::MatrixXd X(4, keep);
    for (int i = 4 - keep, c2 = 0; i < 4; ++i, ++c2) X.col(c2) = so.eigenvectors().col(i) / std::sqrt(s(i));
    Eigen::MatrixXd Hp = X.transpose() * M.H * X;
    Hp = 0.5 * (Hp + Hp.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eh(Hp);
    c = X * eh.eigenvectors().col(0);
    // weight gauge: largest entry positive
    int im = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(c(i)) > std::abs(c(im)) * (1 + 1e-10)) im = i;
    if (c(im) < 0) c = -c;
    return eh.eigenvalues()(0);
}

double norm8(const std::array<double, 8>& g) {
    double s = 0;
    for (double x : g) s += x * x;
    return std::sqrt(s);
}

}  // namespace

double multipolaron_energy(const ModelParams& p, const std::array<double, 8>& theta, std::array<double, 8>* grad,
                           std::array<double, 4>* cout) {
    auto M = assemble(p, theta);
    Eigen::Vector4d c;
    double E = lowest(M, c);
    if (grad)
        for (int k = 0; k < 8; ++k) (*grad)[k] = c.dot((M.dH[k] - E * M.dS[k]) * c);
    if (cout)
        for (int i = 0; i < 4; ++i) (*cout)[i] = c(i);
    return E;
}

std::array<double, 8> multipolaron_seed(const ModelParams& p) {
    auto d = derived_scales(p);
    const double up_xi = std::log(d.varpi_plus), up_mu = -d.b_plus;
    const double dn_xi = std::log(d.varpi_minus), dn_mu = d.b_minus;
    return {up_xi, up_mu, dn_xi, dn_mu, dn_xi, dn_mu, up_xi, up_mu};
}

namespace {

bool collapsed(const std::array<double, 8>& th) {
    for (int s = 0; s < 2; ++s) {
        Packet a{std::exp(th[4 * s]), th[4 * s + 1]}, b{std::exp(th[4 * s + 2]), th[4 * s + 3]};
        if (overlap(a, b) > 1 - 1e-8) return true;
    }
    return false;
}

// Alternative anti-polaron placement used after a collapse: the opposite
// spin's centre with twice its frequency.
std::array<double, 8> reseed(const ModelParams& p) {
    auto th = multipolaron_seed(p);
    th[2] += std::log(2.0);
    th[6] += std::log(2.0);
    return th;
}

struct Fit {
    std::array<double, 8> theta;
    double E, gnorm;
    int iters;
    bool ok;
};

// Levenberg-Marquardt on the analytic gradient with a finite-difference Hessian.
Fit minimize(const ModelParams& p, std::array<double, 8> th, const MultiOptions& opt) {
    const double tol = opt.grad_tol > 0 ? opt.grad_tol : 1e-9 * p.omega();
    std::array<double, 8> g;
    double E = multipolaron_energy(p, th, &g);
    double lambda = 1e-3 * p.omega();
    int it = 0;
    for (; it < opt.max_iter && norm8(g) >= tol; ++it) {
        Eigen::Matrix<double, 8, 8> Hs;
        const double h = 1e-6;
        for (int l = 0; l < 8; ++l) {
            auto tp = th, tm = th;
            tp[l] += h;
            tm[l] -= h;
            std::array<double, 8> gp, gm;
            multipolaron_energy(p, tp, &gp);
            multipolaron_energy(p, tm, &gm);
            for (int k = 0; k < 8; ++k) Hs(k, l) = (gp[k] - gm[k]) / (2 * h);
        }
        Hs = 0.5 * (Hs + Hs.transpose()).eval();
        Eigen::Matrix<double, 8, 1> gv;
        for (int k = 0; k < 8; ++k) gv(k) = g[k];

        bool accepted = false;
        for (int tries = 0; tries < 60 && !accepted; ++tries) {
            Eigen::Matrix<double, 8, 8> A = Hs;
            A.diagonal().array() += lambda;
            Eigen::LLT<Eigen::Matrix<double, 8, 8>> llt(A);
            if (llt.info() != Eigen::Success) {
                lambda *= 10;
                continue;
            }
            Eigen::Matrix<double, 8, 1> step = -llt.solve(gv);
            std::array<double, 8> tn;
            for (int k = 0; k < 8; ++k) tn[k] = th[k] + step(k);
            std::array<double, 8> gn;
            double En = multipolaron_energy(p, tn, &gn);
            // energy differences near the optimum drop below round-off; then
            // accept on gradient decrease
            const double fuzz = 1e-14 * std::max(1.0, std::abs(E));
            if (std::isfinite(En) && (En < E - fuzz || (En <= E + fuzz && norm8(gn) < norm8(g)))) {
                th = tn;
                E = En;
                g = gn;
                lambda = std::max(lambda / 5, 1e-14);
                accepted = true;
            } else {
                lambda *= 8;
            }
        }
        if (!accepted) break;
    }
    return {th, E, norm8(g), it, norm8(g) < tol};
}

MultiAnsatz pack(const ModelParams& p, const Fit& f, bool reseeded) {
    MultiAnsatz m;
    m.theta = f.theta;
    m.energy = multipolaron_energy(p, f.theta, nullptr, &m.c);
    m.gradient_norm = f.gnorm;
    m.iterations = f.iters;
    m.reseeded = reseeded;
    m.ansatz.n_p = 2;
    for (int i = 0; i < 4; ++i)
        m.ansatz.packets[spin_of(i)].push_back({std::exp(f.theta[2 * i]), f.theta[2 * i + 1], m.c[i]});
    return m;
}

}  // namespace

MultiAnsatz variational_ground(const ModelParams& p, const MultiOptions& opt, const std::array<double, 8>* start) {
    auto th = start ? *start : multipolaron_seed(p);
    bool reseeded = false;
    if (collapsed(th)) {
        th = reseed(p);
        reseeded = true;
    }
    Fit f = minimize(p, th, opt);
    if (collapsed(f.theta) || !f.ok) {
        if (reseeded)
            throw NumericalError("multipolaron optimization failed after re-seeding (gradient norm " +
                                 std::to_string(f.gnorm) + ")");
        f = minimize(p, reseed(p), opt);
        reseeded = true;
        if (collapsed(f.theta)) throw NumericalError("multipolaron packets collapsed onto each other");
        if (!f.ok)
            throw NumericalError("multipolaron optimization did not converge (gradient norm " +
                                 std::to_string(f.gnorm) + " after " + std::to_string(f.iters) + " iterations)");
    }
    return pack(p, f, reseeded);
}

namespace {

double state_overlap(const MultiAnsatz& a, const MultiAnsatz& b) {
    double s = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (spin_of(i) != spin_of(j)) continue;
            Packet pa{std::exp(a.theta[2 * i]), a.theta[2 * i + 1]};
            Packet pb{std::exp(b.theta[2 * j]), b.theta[2 * j + 1]};
            s += a.c[i] * b.c[j] * overlap(pa, pb);
        }
    return s;
}

// Packets keep their role across the stencil when width and centre move
// continuously; a jump means a swap or a different local minimum.
bool same_identity(const MultiAnsatz& a, const MultiAnsatz& b) {
    for (int i = 0; i < 4; ++i) {
        if (std::abs(a.c[i]) < 1e-8 && std::abs(b.c[i]) < 1e-8) continue;
        if (std::abs(a.theta[2 * i] - b.theta[2 * i]) > 0.2) return false;
        const double mu = std::abs(a.theta[2 * i + 1]);
        if (std::abs(a.theta[2 * i + 1] - b.theta[2 * i + 1]) > 0.2 * std::max(1.0, mu)) return false;
    }
    return true;
}

}  // namespace

QfiBreakdown qfi_decompose_multi(const ModelParams& p, double step, const MultiOptions& opt) {
    double h = step > 0 ? step : 1e-3 * p.gT();
    if (p.g2() - h < 0 || p.g2() + h >= p.gT())
        throw ParameterError("multipolaron stencil leaves the g2 domain");
    const MultiAnsatz m0 = variational_ground(p, opt);

    MultiAnsatz mp, mm;
    for (int attempt = 0;; ++attempt) {
        mp = variational_ground(p.with(Parameter::g2, p.g2() + h), opt, &m0.theta);
        mm = variational_ground(p.with(Parameter::g2, p.g2() - h), opt, &m0.theta);
        if (same_identity(m0, mp) && same_identity(m0, mm)) break;
        if (attempt >= 3) throw NumericalError("packet identity lost across the multipolaron stencil");
        h *= 0.5;
    }
    for (MultiAnsatz* m : {&mp, &mm})
        if (state_overlap(*m, m0) < 0)
            for (auto& x : m->c) x = -x;

    std::array<double, 4> c, dc, xi, dxi, dmu;
    std::array<Packet, 4> pk;
    for (int i = 0; i < 4; ++i) {
        c[i] = m0.c[i];
        dc[i] = (mp.c[i] - mm.c[i]) / (2 * h);
        xi[i] = std::exp(m0.theta[2 * i]);
        dxi[i] = (std::exp(mp.theta[2 * i]) - std::exp(mm.theta[2 * i])) / (2 * h);
        dmu[i] = (mp.theta[2 * i + 1] - mm.theta[2 * i + 1]) / (2 * h);
        pk[i] = {xi[i], m0.theta[2 * i + 1]};
    }

    QfiBreakdown q;
    q.method = Method::multipolaron;
    q.lambda = Parameter::g2;
    q.step = h;
    for (Resource r : {Resource::xi, Resource::x, Resource::rho, Resource::xi_x, Resource::xi_rho, Resource::x_rho})
        q.intra[r] = q.inter[r] = 0;
    double proj = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (spin_of(i) != spin_of(j)) continue;
            auto od = overlap_derivatives(pk[i], pk[j]);
            auto& dst = i == j ? q.intra : q.inter;
            const double pd[2] = {dxi[i], dmu[i]}, qd[2] = {dxi[j], dmu[j]};
            dst[Resource::rho] += 4 * dc[i] * dc[j] * od.S;
            dst[Resource::xi] += 4 * c[i] * c[j] * pd[0] * qd[0] * od.d_both[0][0];
            dst[Resource::x] += 4 * c[i] * c[j] * pd[1] * qd[1] * od.d_both[1][1];
            dst[Resource::xi_x] += 8 * c[i] * c[j] * pd[0] * qd[1] * od.d_both[0][1];
            dst[Resource::xi_rho] += 8 * dc[i] * c[j] * qd[0] * od.d_ket[0];
            dst[Resource::x_rho] += 8 * dc[i] * c[j] * qd[1] * od.d_ket[1];
            // <psi'|psi>
            proj += (dc[i] * od.S + c[i] * (pd[0] * od.d_bra[0] + pd[1] * od.d_bra[1])) * c[j];
        }
    q.total = 0;
    for (auto& [r, v] : q.intra) {
        q.components[r] = v + q.inter[r];
        q.total += q.components[r];
    }
    q.overlap_term = 4 * proj * proj;
    return q;
}

}  // namespace qrm
