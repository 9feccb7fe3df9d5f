#include "qrm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "qrm/error.hpp"
#include "qrm/fockspace.hpp"
#include "qrm/polaron.hpp"

namespace qrm {

std::string_view to_string(Quantity q) {
    switch (q) {
        case Quantity::sigma_z: return "sigma_z";
        case Quantity::qfi_ed: return "qfi_ed";
        case Quantity::qfi_analytic: return "qfi_analytic";
        case Quantity::gap: return "gap";
        case Quantity::energy: return "energy";
    }
    return "?";
}

Quantity parse_quantity(std::string_view s) {
    for (Quantity q : {Quantity::sigma_z, Quantity::qfi_ed, Quantity::qfi_analytic, Quantity::gap, Quantity::energy})
        if (to_string(q) == s) return q;
    throw ParameterError("unknown quantity '" + std::string(s) + "'");
}

int cutoff_for(const ModelParams& p, const CutoffPolicy& c) {
    if (c.fixed > 0) return c.fixed;
    CutoffOptions o;
    o.tol = c.tol;
    return converge_cutoff(p, o);
}

int default_threads() {
    if (const char* e = std::getenv("QRM_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(e, &end, 10);
        if (end != e && v > 0) return static_cast<int>(v);
    }
    unsigned h = std::thread::hardware_concurrency();
    return h > 0 ? static_cast<int>(h) : 1;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 0) threads = default_threads();
    threads = static_cast<int>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex mu;
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lk(mu);
                if (!err) err = std::current_exception();
                next = n;
            }
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (err) std::rethrow_exception(err);
}

ModelParams apply_axes(const ModelParams& base, const std::vector<std::string>& names,
                       const std::vector<double>& values) {
    ModelParams p = base;
    for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k] != "gbar1" && names[k] != "gbar2") p = p.with(parse_parameter(names[k]), values[k]);
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (names[k] == "gbar1") p = p.with(Parameter::g1, values[k] * p.gs());
        if (names[k] == "gbar2") p = p.with(Parameter::g2, values[k] * p.gT());
    }
    return p;
}

GridResult run_sweep(const SweepSpec& spec) {
    if (spec.quantities.empty()) throw ParameterError("sweep needs at least one quantity");
    GridResult g;
    for (const auto& a : spec.axes) {
        if (a.name != "gbar1" && a.name != "gbar2") parse_parameter(a.name);
        g.axis_names.push_back(a.name);
        g.axes.push_back(a.values());
    }
    for (Quantity q : spec.quantities) g.columns.emplace_back(to_string(q));
    const std::size_t n = g.points();
    g.values.assign(n, std::vector<double>(spec.quantities.size(), std::numeric_limits<double>::quiet_NaN()));
    g.reasons.assign(n, "");
    std::vector<int> cutoffs(n, 0);

    parallel_for(n, spec.threads, [&](std::size_t i) {
        try {
            ModelParams p = apply_axes(spec.base, g.axis_names, g.coordinates(i));
            int N = 0;
            auto need_cutoff = [&] {
                if (N == 0) N = cutoff_for(p, spec.cutoff);
                return N;
            };
            std::optional<SpectrumSlice> sl;
            for (std::size_t k = 0; k < spec.quantities.size(); ++k) {
                switch (spec.quantities[k]) {
                    case Quantity::sigma_z:
                    case Quantity::energy:
                        if (!sl) sl = spectrum(p, need_cutoff(), 1);
                        g.values[i][k] = spec.quantities[k] == Quantity::sigma_z ? sigma_z(sl->vectors[0])
                                                                                   : sl->energies[0];
                        break;
                    case Quantity::gap:
                        // the excited state needs more room than the ground state
                        g.values[i][k] = gap_ed(p, spec.cutoff.fixed > 0 ? need_cutoff() : 2 * need_cutoff());
                        break;
                    case Quantity::qfi_ed: {
                        QfiOptions o;
                        o.cutoff = need_cutoff();
                        g.values[i][k] = qfi_ed(p, spec.lambda, o).total;
                        break;
                    }
                    case Quantity::qfi_analytic: g.values[i][k] = qfi_analytic(p).total; break;
                }
            }
            cutoffs[i] = N;
        } catch (const std::exception& e) {
            g.reasons[i] = e.what();
        }
    });
    int nmin = std::numeric_limits<int>::max(), nmax = 0;
    for (int c : cutoffs)
        if (c > 0) {
            nmin = std::min(nmin, c);
            nmax = std::max(nmax, c);
        }
    if (nmax > 0) g.set_meta("cutoff_range", std::to_string(nmin) + ".." + std::to_string(nmax));
    return g;
}

std::vector<EnvelopePoint> qfi_envelope(const ModelParams& base, const std::vector<double>& gbar2,
                                        const std::vector<double>& eps_offsets, const QfiOptions& opt,
                                        int threads) {
    std::vector<EnvelopePoint> out(gbar2.size());
    auto d = derived_scales(base);
    parallel_for(gbar2.size(), threads, [&](std::size_t i) {
        ModelParams p = base.with(Parameter::g2, gbar2[i] * base.gT());
        double et = transition_bias(base.omega(), base.Omega(), d.gbar1, gbar2[i]);
        std::vector<double> grid;
        for (double o : eps_offsets) grid.push_back(et + o);
        auto pk = qfi_peak_over_bias(p, grid, opt, false);
        out[i] = {gbar2[i], pk.peak, pk.eps_star, et, pk.at_boundary};
    });
    return out;
}

PtpsResult integrate_inverse_gap(const std::function<double(double)>& gap, double b, double tiny, double rel_tol,
                                 int max_evaluations) {
    if (!(b > 0)) throw ParameterError("PTPS endpoint must be positive");
    PtpsResult r;
    std::map<double, double> f;  // node -> 1/gap
    auto eval = [&](double x) -> bool {
        double d = gap(x);
        if (!(d >= tiny)) {
            r.divergent = true;
            r.divergent_at = x;
            return false;
        }
        f[x] = 1.0 / d;
        return true;
    };
    const int n0 = 64;
    for (int i = 0; i <= n0; ++i)
        if (!eval(b * i / n0)) return r;

    auto trapezoid = [&] {
        double s = 0;
        for (auto it = f.begin(), nx = std::next(it); nx != f.end(); ++it, ++nx)
            s += 0.5 * (nx->first - it->first) * (it->second + nx->second);
        return s;
    };

    while (true) {
        // local error of each interval from its midpoint
        struct Cell {
            double a, b, fa, fb, err;
        };
        std::vector<Cell> cells;
        for (auto it = f.begin(), nx = std::next(it); nx != f.end(); ++it, ++nx)
            cells.push_back({it->first, nx->first, it->second, nx->second, 0});
        const double T = trapezoid();
        double total_err = 0;
        std::vector<std::pair<double, double>> mids;
        for (auto& c : cells) {
            double m = 0.5 * (c.a + c.b);
            double dg = gap(m);
            if (!(dg >= tiny)) {
                r.divergent = true;
                r.divergent_at = m;
                return r;
            }
            mids.emplace_back(m, 1.0 / dg);
            double h = c.b - c.a;
            c.err = std::abs(0.5 * h * (c.fa + c.fb) - 0.25 * h * (c.fa + 2 * mids.back().second + c.fb));
            total_err += c.err;
        }
        // refine where the error is concentrated (near the gap minimum)
        double thresh = 0;
        std::vector<double> errs;
        for (auto& c : cells) errs.push_back(c.err);
        std::sort(errs.begin(), errs.end(), std::greater<>());
        double acc = 0;
        for (double e : errs) {
            acc += e;
            thresh = e;
            if (acc > 0.8 * total_err) break;
        }
        for (std::size_t k = 0; k < cells.size(); ++k)
            if (cells[k].err >= thresh) f[mids[k].first] = mids[k].second;
        const double Tn = trapezoid();
        r.refinement_change = std::abs(Tn - T) / Tn;
        if ((r.refinement_change < rel_tol && total_err < rel_tol * Tn) ||
            static_cast<int>(f.size()) > max_evaluations) {
            r.T = Tn;
            break;
        }
    }
    for (auto& [x, v] : f) {
        r.gbar.push_back(x);
        r.inv_gap.push_back(v);
    }
    r.gbar_max = b;
    return r;
}

namespace {

double coupling_scale(const ModelParams& p, Parameter c) {
    if (c == Parameter::g2) return p.gT();
    if (c == Parameter::g1) {
        if (!(p.gs() > 0)) throw ParameterError("rescaled g1 needs Omega > 0");
        return p.gs();
    }
    throw ParameterError("PTPS path must sweep g1 or g2");
}

}  // namespace

double locate_qfi_peak(const ModelParams& p, Parameter coupling, double scan_hi, int scan_points, int cutoff,
                       int threads) {
    const double scale = coupling_scale(p, coupling);
    std::vector<double> xs(scan_points);
    for (int i = 0; i < scan_points; ++i) {
        double t = double(i) / (scan_points - 1);
        // g2 paths get denser toward the collapse point
        xs[i] = coupling == Parameter::g2 ? 1 - std::exp(std::log(1 - scan_hi) * t) : scan_hi * t;
    }
    const double tiny_gap = 1e-9 * p.omega();
    auto F = [&](double x) -> double {
        ModelParams q = p.with(coupling, x * scale);
        QfiOptions o;
        o.cutoff = cutoff > 0 ? cutoff : 2 * converge_cutoff(q);
        o.richardson = false;
        if (gap_ed(q, o.cutoff) < tiny_gap) return std::numeric_limits<double>::quiet_NaN();
        return qfi_ed(q, coupling, o).total;
    };
    std::vector<double> fs(scan_points, std::numeric_limits<double>::quiet_NaN());
    parallel_for(scan_points, threads, [&](std::size_t i) {
        try {
            fs[i] = F(xs[i]);
        } catch (const NumericalError&) {
        }
    });
    int best = -1;
    for (int i = 1; i + 1 < scan_points; ++i) {
        if (!std::isfinite(fs[i]) || !std::isfinite(fs[i - 1]) || !std::isfinite(fs[i + 1])) continue;
        if (fs[i] > fs[i - 1] && fs[i] >= fs[i + 1] && (best < 0 || fs[i] > fs[best])) best = i;
    }
    if (best < 0) throw NumericalError("no interior QFI maximum along the path");
    double a = xs[best - 1], b = xs[best + 1];
    const double r = 0.5 * (std::sqrt(5.0) - 1);
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = F(x1), f2 = F(x2);
    for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
        if (f1 > f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - r * (b - a); f1 = F(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + r * (b - a); f2 = F(x2);
        }
    }
    return f1 > f2 ? x1 : x2;
}

PtpsResult ptps(const ModelParams& p, const PtpsPath& path, const CutoffPolicy& cutoff, int threads) {
    const double scale = coupling_scale(p, path.coupling);
    const double hi = path.scan_hi > 0 ? path.scan_hi : (path.coupling == Parameter::g2 ? 0.999 : 1.5);
    if (path.coupling == Parameter::g2 && !(hi < 1)) throw ParameterError("g2 scan must stay below the collapse point");

    double gmax = path.gbar_max ? *path.gbar_max
                                : locate_qfi_peak(p, path.coupling, hi, path.scan_points, cutoff.fixed, threads);
    // the required cutoff grows along the path, so the endpoint value covers it;
    // doubled for the excited state
    int N = cutoff.fixed;
    if (N <= 0) N = 2 * cutoff_for(p.with(path.coupling, gmax * scale), cutoff);
    auto gap = [&](double x) { return gap_ed(p.with(path.coupling, x * scale), N); };
    PtpsResult r = integrate_inverse_gap(gap, gmax, 1e-12 * p.omega(), path.rel_tol, path.max_evaluations);
    r.gbar_max = gmax;
    r.coupling = path.coupling == Parameter::g2 ? "gbar2" : "gbar1";
    r.cutoff = N;
    return r;
}

}  // namespace qrm
