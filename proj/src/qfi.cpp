#include "qrm/qfi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qrm/error.hpp"

namespace qrm {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::ed: return "ED";
        case Method::analytic: return "analytic";
        case Method::multipolaron: return "multipolaron";
    }
    return "?";
}

std::string_view to_string(Resource r) {
    switch (r) {
        case Resource::xi: return "xi";
        case Resource::x: return "x";
        case Resource::rho: return "rho";
        case Resource::xi_x: return "xi_x";
        case Resource::xi_rho: return "xi_rho";
        case Resource::x_rho: return "x_rho";
    }
    return "?";
}

double QfiBreakdown::rescaled(const ModelParams& p) const {
    switch (lambda) {
        case Parameter::g2: return total * p.gT() * p.gT();
        case Parameter::g1: return total * p.gs() * p.gs();
        default: return total;
    }
}

double default_step(const ModelParams& p, Parameter lambda) {
    switch (lambda) {
        case Parameter::g2: return 1e-5 * p.gT();
        case Parameter::g1: return p.gs() > 0 ? 1e-5 * p.gs() : 1e-5 * p.omega();
        default: return 1e-5 * p.omega();
    }
}

int resolve_cutoff(const ModelParams& p, const QfiOptions& opt) {
    if (opt.cutoff > 0) return opt.cutoff;
    CutoffOptions co;
    co.tol = opt.cutoff_tol;
    return converge_cutoff(p, co);
}

namespace {

SpinorFockVector ground(const ModelParams& p, int cutoff) {
    return spectrum(p, cutoff, 1).vectors[0];
}

// Parameter value is inside the model domain.
bool in_domain(const ModelParams& p, Parameter lambda, double v) {
    switch (lambda) {
        case Parameter::g2: return v >= 0 && v < p.gT();
        case Parameter::Omega: return v >= 0;
        case Parameter::omega: return v > 4 * p.g2();
        default: return true;
    }
}

struct Stencil {
    double F = 0, overlap_term = 0;
};

// Align sign to the reference; returns the overlap before alignment.
double align(SpinorFockVector& v, const SpinorFockVector& ref) {
    double o = v.dot(ref);
    if (o < 0) v.scale(-1.0);
    return std::abs(o);
}

Stencil evaluate(const ModelParams& p, Parameter lambda, double h, int cutoff, bool one_sided,
                 const SpinorFockVector& c0) {
    const double lam = p.get(lambda);
    SpinorFockVector a, b;
    if (!one_sided) {
        a = ground(p.with(lambda, lam + h), cutoff);
        b = ground(p.with(lambda, lam - h), cutoff);
    } else {
        a = ground(p.with(lambda, lam + h), cutoff);
        b = ground(p.with(lambda, lam + 2 * h), cutoff);
    }
    double oa = align(a, c0), ob = align(b, c0);
    if (std::min(oa, ob) < 0.5)
        throw NumericalError("stencil overlap below 0.5 (level crossing inside the step); use a smaller step");

    double sum2 = 0, proj = 0;
    const std::size_t N = c0.plus.size();
    auto acc = [&](double d, double c) {
        sum2 += d * d;
        proj += d * c;
    };
    for (std::size_t n = 0; n < N; ++n) {
        if (!one_sided) {
            acc((a.plus[n] - b.plus[n]) / (2 * h), c0.plus[n]);
            acc((a.minus[n] - b.minus[n]) / (2 * h), c0.minus[n]);
        } else {
            acc((-3 * c0.plus[n] + 4 * a.plus[n] - b.plus[n]) / (2 * h), c0.plus[n]);
            acc((-3 * c0.minus[n] + 4 * a.minus[n] - b.minus[n]) / (2 * h), c0.minus[n]);
        }
    }
    Stencil s;
    s.overlap_term = 4 * proj * proj;
    s.F = 4 * sum2 - s.overlap_term;
    if (proj * proj >= 1e-8 * sum2 && sum2 > 0)
        throw NumericalError("QFI sanity check failed: <psi'|psi> is not negligible");
    return s;
}

}  // namespace

double qfi_central(SpinorFockVector lo, const SpinorFockVector& mid, SpinorFockVector hi, double h) {
    if (std::min(align(lo, mid), align(hi, mid)) < 0.5) throw NumericalError("stencil overlap below 0.5");
    double sum2 = 0, proj = 0;
    for (std::size_t n = 0; n < mid.plus.size(); ++n) {
        double dp = (hi.plus[n] - lo.plus[n]) / (2 * h), dm = (hi.minus[n] - lo.minus[n]) / (2 * h);
        sum2 += dp * dp + dm * dm;
        proj += dp * mid.plus[n] + dm * mid.minus[n];
    }
    return 4 * (sum2 - proj * proj);
}

QfiBreakdown qfi_ed(const ModelParams& p, Parameter lambda, const QfiOptions& opt) {
    QfiBreakdown out;
    out.method = Method::ed;
    out.lambda = lambda;
    out.cutoff = resolve_cutoff(p, opt);
    double h = opt.step > 0 ? opt.step : default_step(p, lambda);
    const double lam = p.get(lambda);

    auto c0 = ground(p, out.cutoff);

    bool one_sided = false;
    if (!in_domain(p, lambda, lam - h)) {
        if (!in_domain(p, lambda, lam + 2 * h))
            throw ParameterError("finite-difference stencil leaves the parameter domain");
        one_sided = true;
    } else if (!in_domain(p, lambda, lam + h)) {
        throw ParameterError("finite-difference stencil crosses the collapse point; reduce the step");
    }
    out.one_sided = one_sided;
    if (one_sided) out.warnings.push_back("one-sided stencil at the domain edge");

    Stencil s;
    int shrinks = 0;
    while (true) {
        try {
            s = evaluate(p, lambda, h, out.cutoff, one_sided, c0);
            break;
        } catch (const NumericalError&) {
            if (++shrinks > opt.max_shrink) throw;
            h *= 0.25;
            out.warnings.push_back("step shrunk after low stencil overlap");
        }
    }

    if (opt.richardson) {
        for (int tries = 0;; ++tries) {
            Stencil half = evaluate(p, lambda, 0.5 * h, out.cutoff, one_sided, c0);
            double denom = std::max(std::abs(half.F), std::numeric_limits<double>::min());
            out.richardson_rel = std::abs(s.F - half.F) / denom;
            if (out.richardson_rel < opt.richardson_tol) break;
            h *= 0.5;
            s = half;
            if (tries >= 3) {
                out.warnings.push_back("Richardson halving check above tolerance");
                break;
            }
        }
    }
    out.step = h;
    out.total = std::max(0.0, s.F);
    out.overlap_term = s.overlap_term;
    return out;
}

double fidelity(const ModelParams& p, Parameter lambda, double delta, int cutoff) {
    auto a = ground(p, cutoff);
    if (delta == 0) return 1.0;
    auto b = ground(p.with(lambda, p.get(lambda) + delta), cutoff);
    return std::min(1.0, std::abs(a.dot(b)));
}

BiasPeak qfi_peak_over_bias(const ModelParams& p, const std::vector<double>& eps_grid, const QfiOptions& opt,
                            bool refine) {
    if (eps_grid.size() < 3) throw ParameterError("bias grid needs at least 3 points");
    BiasPeak out;
    out.eps_grid = eps_grid;
    out.values.assign(eps_grid.size(), std::numeric_limits<double>::quiet_NaN());
    QfiOptions o = opt;
    if (o.cutoff <= 0) o.cutoff = resolve_cutoff(p.with(Parameter::epsilon, eps_grid[eps_grid.size() / 2]), opt);
    std::size_t best = 0;
    double bestv = -1;
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        try {
            out.values[i] = qfi_ed(p.with(Parameter::epsilon, eps_grid[i]), Parameter::g2, o).total;
        } catch (const NumericalError&) {
            continue;
        }
        if (out.values[i] > bestv) {
            bestv = out.values[i];
            best = i;
        }
    }
    if (bestv < 0) throw NumericalError("QFI failed at every bias grid point");
    out.eps_star = eps_grid[best];
    out.peak = bestv;
    out.at_boundary = best == 0 || best + 1 == eps_grid.size();
    if (refine && !out.at_boundary) {
        auto f = [&](double e) { return qfi_ed(p.with(Parameter::epsilon, e), Parameter::g2, o).total; };
        double a = eps_grid[best - 1], b = eps_grid[best + 1];
        const double r = 0.5 * (std::sqrt(5.0) - 1);
        double x1 = b - r * (b - a), x2 = a + r * (b - a);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 40 && b - a > 1e-9 * std::max(1.0, std::abs(b)); ++it) {
            if (f1 > f2) {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - r * (b - a); f1 = f(x1);
            } else {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + r * (b - a); f2 = f(x2);
            }
        }
        double xm = f1 > f2 ? x1 : x2, fm = std::max(f1, f2);
        if (fm > out.peak) {
            out.peak = fm;
            out.eps_star = xm;
        }
    }
    return out;
}

}  // namespace qrm
