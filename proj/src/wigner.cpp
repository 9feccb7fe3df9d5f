#include "qrm/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qrm/error.hpp"
#include "qrm/hermite.hpp"

namespace qrm {

std::vector<double> linspace(double a, double b, int n) {
    if (n < 2) throw ParameterError("grid needs at least two points");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    v.back() = b;
    return v;
}

Wavefunction position_wavefunction(const SpinorFockVector& v, const std::vector<double>& x) {
    Wavefunction w;
    w.x = x;
    w.plus.resize(x.size());
    w.minus.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        w.plus[i] = hermite_series(v.plus, x[i]);
        w.minus[i] = hermite_series(v.minus, x[i]);
    }
    if (!x.empty()) {
        for (std::size_t i : {std::size_t(0), x.size() - 1})
            w.boundary_max = std::max({w.boundary_max, std::abs(w.plus[i]), std::abs(w.minus[i])});
    }
    w.covers_support = w.boundary_max <= 1e-6;
    return w;
}

double support_radius(const SpinorFockVector& v, double thr) {
    // Hermite functions up to the cutoff decay like a Gaussian past the
    // largest classical turning point
    const double start = std::sqrt(2.0 * v.cutoff + 1) + 10.0;
    const double step = 0.02;
    for (double r = start; r > 0; r -= step) {
        double a = std::max({std::abs(hermite_series(v.plus, r)), std::abs(hermite_series(v.minus, r)),
                             std::abs(hermite_series(v.plus, -r)), std::abs(hermite_series(v.minus, -r))});
        if (a > thr) return r + step;
    }
    return step;
}

double WignerGrid::total_integral() const {
    if (x.size() < 2 || p.size() < 2) return 0;
    const double dx = x[1] - x[0], dp = p[1] - p[0];
    double s = 0;
    for (std::size_t i = 0; i < plus.size(); ++i) s += plus[i] + minus[i];
    return s * dx * dp;
}

namespace {

// W(x, p) for one row by the symmetric trapezoid rule in y = 2 j du, using
// f_j = psi(x + j du) psi(x - j du) supplied by the caller.
void row(const std::vector<double>& fj, double du, const std::vector<double>& p, double* out) {
    const double dy = 2 * du;
    for (std::size_t ip = 0; ip < p.size(); ++ip) {
        double s = fj.empty() ? 0 : fj[0];
        for (std::size_t j = 1; j < fj.size(); ++j) s += 2 * fj[j] * std::cos(p[ip] * j * dy);
        out[ip] = s * dy / (2 * std::numbers::pi);
    }
}

struct HalfLines {
    std::vector<double> a, b;  // psi(x + j du), psi(x - j du)
};

HalfLines half_lines(const std::vector<double>& c, double x, double du, double R) {
    HalfLines h;
    for (int j = 0;; ++j) {
        double u = x + j * du, w = x - j * du;
        if (std::abs(u) > R && std::abs(w) > R) break;
        h.a.push_back(std::abs(u) > R ? 0.0 : hermite_series(c, u));
        h.b.push_back(std::abs(w) > R ? 0.0 : hermite_series(c, w));
    }
    return h;
}

}  // namespace

WignerGrid wigner(const SpinorFockVector& v, const std::vector<double>& x, const std::vector<double>& p) {
    if (x.size() < 2 || p.empty()) throw ParameterError("Wigner grid too small");
    const double dx = x[1] - x[0];
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::abs((x[i] - x[i - 1]) - dx) > 1e-9 * std::max(1.0, std::abs(dx)))
            throw ParameterError("Wigner x grid must be uniform");

    WignerGrid g;
    g.x = x;
    g.p = p;
    g.cutoff = v.cutoff;
    g.plus.assign(x.size() * p.size(), 0.0);
    g.minus.assign(x.size() * p.size(), 0.0);

    const double R = support_radius(v);
    double pmax = 0;
    for (double q : p) pmax = std::max(pmax, std::abs(q));
    const double spread = std::sqrt(std::max(momentum_variance(v.plus), momentum_variance(v.minus)));
    const double band = pmax + 8 * spread + 4;
    // dy = 2 du must keep the aliased frequencies 2 pi / dy beyond p +- band
    const double du_max = std::numbers::pi / (2 * band);
    const int m = std::max(1, static_cast<int>(std::ceil(std::abs(dx) / du_max)));
    const double du = dx / m;

    // psi on the fine lattice u_k = x_0 + k du covering [-R, R]
    const long kmin = static_cast<long>(std::floor((-R - x[0]) / du)) - 1;
    const long kmax = static_cast<long>(std::ceil((R - x[0]) / du)) + 1;
    std::vector<double> up(kmax - kmin + 1), um(kmax - kmin + 1);
    for (long k = kmin; k <= kmax; ++k) {
        double u = x[0] + k * du;
        if (std::abs(u) > R) continue;
        up[k - kmin] = hermite_series(v.plus, u);
        um[k - kmin] = hermite_series(v.minus, u);
    }
    auto fetch = [&](const std::vector<double>& arr, long k) {
        return (k < kmin || k > kmax) ? 0.0 : arr[k - kmin];
    };

    for (std::size_t i = 0; i < x.size(); ++i) {
        const long ki = static_cast<long>(i) * m;
        std::vector<double> fp, fm;
        for (long j = 0;; ++j) {
            double a = x[i] + j * du, b = x[i] - j * du;
            if (std::abs(a) > R && std::abs(b) > R) break;
            fp.push_back(fetch(up, ki + j) * fetch(up, ki - j));
            fm.push_back(fetch(um, ki + j) * fetch(um, ki - j));
        }
        row(fp, du, p, &g.plus[i * p.size()]);
        row(fm, du, p, &g.minus[i * p.size()]);
    }

    // refinement check on a few rows: half the lattice spacing and a doubled
    // support radius. The sine part pairs y with -y and must cancel.
    std::vector<std::size_t> check = {x.size() / 2, x.size() / 4, (3 * x.size()) / 4};
    for (std::size_t i : check) {
        for (int s = 0; s < 2; ++s) {
            const auto& c = s == 0 ? v.plus : v.minus;
            auto h = half_lines(c, x[i], 0.5 * du, 2 * R);
            std::vector<double> f(h.a.size());
            for (std::size_t j = 0; j < f.size(); ++j) f[j] = h.a[j] * h.b[j];
            std::vector<double> out(p.size());
            row(f, 0.5 * du, p, out.data());
            const auto& cur = s == 0 ? g.plus : g.minus;
            for (std::size_t ip = 0; ip < p.size(); ++ip) {
                g.refine_change = std::max(g.refine_change, std::abs(out[ip] - cur[i * p.size() + ip]));
                double im = 0;
                for (std::size_t j = 1; j < f.size(); ++j)
                    im += std::sin(p[ip] * j * du) * (h.a[j] * h.b[j] - h.b[j] * h.a[j]);
                g.imag_residue = std::max(g.imag_residue, std::abs(im) * du / (2 * std::numbers::pi));
            }
        }
    }
    if (g.refine_change > 1e-4) throw NumericalError("Wigner quadrature not converged");
    if (g.imag_residue > 1e-10) throw NumericalError("Wigner function has a non-negligible imaginary part");

    auto wf = position_wavefunction(v, {x.front(), x.back()});
    g.support_warning = !wf.covers_support;
    return g;
}

WignerGrid wigner_auto(const SpinorFockVector& v, const WignerOptions& opt) {
    double Lx = opt.Lx > 0 ? opt.Lx : std::max(6.0, support_radius(v, 1e-8));
    double spread = std::sqrt(std::max(momentum_variance(v.plus), momentum_variance(v.minus)));
    double Lp = opt.Lp > 0 ? opt.Lp : std::max(6.0, 8 * spread);
    return wigner(v, linspace(-Lx, Lx, opt.nx), linspace(-Lp, Lp, opt.np));
}

}  // namespace qrm
