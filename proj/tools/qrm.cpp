#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

#include "qrm/config.hpp"
#include "qrm/error.hpp"
#include "qrm/fockspace.hpp"
#include "qrm/io.hpp"
#include "qrm/multipolaron.hpp"
#include "qrm/polaron.hpp"
#include "qrm/qfi.hpp"
#include "qrm/sweep.hpp"
#include "qrm/wigner.hpp"

using namespace qrm;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---- option access --------------------------------------------------------

const std::string& opt(const RunConfig& c, const std::string& key) {
    auto it = c.options.find(key);
    if (it == c.options.end()) throw ParameterError("missing option '" + key + "'");
    return it->second;
}

double opt_double(const RunConfig& c, const std::string& key) {
    const std::string& s = opt(c, key);
    double v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ParameterError("--" + key + ": not a number: '" + s + "'");
    return v;
}

int opt_int(const RunConfig& c, const std::string& key) {
    const std::string& s = opt(c, key);
    int v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ParameterError("--" + key + ": not an integer: '" + s + "'");
    return v;
}

bool opt_flag(const RunConfig& c, const std::string& key) { return opt(c, key) == "true"; }

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

Axis parse_axis(const std::string& spec) {
    auto f = split(spec, ':');
    if (f.size() != 4 && f.size() != 5) throw ParameterError("axis '" + spec + "': expected name:start:stop:count[:log]");
    RunConfig tmp;
    tmp.options = {{"start", f[1]}, {"stop", f[2]}, {"count", f[3]}};
    Axis a{f[0], opt_double(tmp, "start"), opt_double(tmp, "stop"), opt_int(tmp, "count"), false};
    if (f.size() == 5) {
        if (f[4] != "log") throw ParameterError("axis '" + spec + "': fifth field must be 'log'");
        a.log = true;
    }
    return a;
}

int threads_of(const RunConfig& c) { return c.threads > 0 ? c.threads : default_threads(); }

std::string fmt(double v) { return format_double(v); }

// ---- QFI breakdown rows ---------------------------------------------------

constexpr Resource kResources[] = {Resource::xi, Resource::x, Resource::rho,
                                   Resource::xi_x, Resource::xi_rho, Resource::x_rho};

std::vector<std::string> breakdown_columns(Method m, Parameter lambda) {
    std::vector<std::string> cols{"total"};
    if (lambda == Parameter::g1 || lambda == Parameter::g2) cols.emplace_back("rescaled");
    if (m == Method::ed) return cols;
    for (Resource r : kResources) cols.emplace_back(to_string(r));
    if (m == Method::multipolaron) {
        for (Resource r : kResources) cols.push_back("intra_" + std::string(to_string(r)));
        for (Resource r : kResources) cols.push_back("inter_" + std::string(to_string(r)));
    }
    return cols;
}

std::vector<double> breakdown_row(const QfiBreakdown& q, const ModelParams& p) {
    std::vector<double> row{q.total};
    if (q.lambda == Parameter::g1 || q.lambda == Parameter::g2) row.push_back(q.rescaled(p));
    if (q.method == Method::ed) return row;
    auto get = [](const std::map<Resource, double>& m, Resource r) {
        auto it = m.find(r);
        return it == m.end() ? 0.0 : it->second;
    };
    for (Resource r : kResources) row.push_back(get(q.components, r));
    if (q.method == Method::multipolaron) {
        for (Resource r : kResources) row.push_back(get(q.intra, r));
        for (Resource r : kResources) row.push_back(get(q.inter, r));
    }
    return row;
}

Method parse_method(const std::string& s) {
    if (s == "ed") return Method::ed;
    if (s == "analytic") return Method::analytic;
    if (s == "multipolaron") return Method::multipolaron;
    throw ParameterError("unknown method '" + s + "' (ed, analytic, multipolaron)");
}

QfiBreakdown compute_qfi(const ModelParams& p, Method m, Parameter lambda, double step, int cutoff) {
    if (m != Method::ed && lambda != Parameter::g2)
        throw ParameterError("the " + std::string(to_string(m)) + " method only covers lambda = g2");
    switch (m) {
        case Method::analytic: return qfi_analytic(p);
        case Method::multipolaron: return qfi_decompose_multi(p, step);
        case Method::ed: break;
    }
    QfiOptions o;
    o.step = step;
    o.cutoff = cutoff;
    return qfi_ed(p, lambda, o);
}

/// One row per point of a single axis, filled in parallel; failures become
/// missing values with a reason.
GridResult axis_table(const Axis& axis, const std::vector<std::string>& columns, int threads,
                      const std::function<std::vector<double>(double)>& fn) {
    GridResult g;
    g.axis_names = {axis.name};
    g.axes = {axis.values()};
    g.columns = columns;
    const std::size_t n = g.axes[0].size();
    g.values.assign(n, std::vector<double>(columns.size(), kNaN));
    g.reasons.assign(n, "");
    parallel_for(n, threads, [&](std::size_t i) {
        try {
            g.values[i] = fn(g.axes[0][i]);
        } catch (const std::exception& e) {
            g.reasons[i] = e.what();
        }
    });
    return g;
}

void set_cutoff_range(GridResult& g, const std::vector<int>& cutoffs) {
    int lo = std::numeric_limits<int>::max(), hi = 0;
    for (int c : cutoffs)
        if (c > 0) {
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
    if (hi > 0) g.set_meta("cutoff", lo == hi ? std::to_string(lo) : std::to_string(lo) + ".." + std::to_string(hi));
}

// ---- subcommands ----------------------------------------------------------

GridResult run_ground_state(const RunConfig& c) {
    ModelParams p = resolve_params(c.params);
    int N = c.cutoff > 0 ? c.cutoff : converge_cutoff(p);
    auto sl = spectrum(p, N, 1);
    auto g = scalar_result({"energy", "sigma_z", "converged"},
                           {sl.energies[0], sigma_z(sl.vectors[0]), sl.converged ? 1.0 : 0.0});
    g.set_meta("cutoff", std::to_string(N));
    return g;
}

GridResult run_gap(const RunConfig& c) {
    ModelParams p = resolve_params(c.params);
    int N = c.cutoff > 0 ? c.cutoff : 2 * converge_cutoff(p);
    auto g = scalar_result({"gap"}, {gap_ed(p, N)});
    g.set_meta("cutoff", std::to_string(N));
    return g;
}

GridResult run_qfi(const RunConfig& c) {
    ModelParams p = resolve_params(c.params);
    Parameter lambda = parse_parameter(opt(c, "lambda"));
    Method m = parse_method(opt(c, "method"));
    auto q = compute_qfi(p, m, lambda, opt_double(c, "step"), c.cutoff);
    auto g = scalar_result(breakdown_columns(m, lambda), breakdown_row(q, p));
    g.set_meta("method", std::string(to_string(q.method)));
    g.set_meta("lambda", std::string(to_string(q.lambda)));
    if (q.cutoff > 0) g.set_meta("cutoff", std::to_string(q.cutoff));
    g.set_meta("step", fmt(q.step));
    g.set_meta("overlap_term", fmt(q.overlap_term));
    if (m == Method::ed) {
        g.set_meta("richardson_rel", fmt(q.richardson_rel));
        g.set_meta("one_sided", q.one_sided ? "true" : "false");
    }
    std::string w;
    for (const auto& s : q.warnings) w += (w.empty() ? "" : "; ") + s;
    if (!w.empty()) g.set_meta("warnings", w);
    return g;
}

GridResult run_qfi_curve(const RunConfig& c) {
    ModelParams base = resolve_params(c.params);
    Axis axis = parse_axis(opt(c, "axis"));
    Parameter lambda = parse_parameter(opt(c, "lambda"));
    Method m = parse_method(opt(c, "method"));
    double step = opt_double(c, "step");
    auto vals = axis.values();
    std::vector<int> cutoffs(vals.size(), 0);
    auto g = axis_table(axis, breakdown_columns(m, lambda), threads_of(c), [&](double v) {
        ModelParams p = apply_axes(base, {axis.name}, {v});
        auto q = compute_qfi(p, m, lambda, step, c.cutoff);
        auto idx = std::find(vals.begin(), vals.end(), v) - vals.begin();
        cutoffs[idx] = q.cutoff;
        return breakdown_row(q, p);
    });
    g.set_meta("method", std::string(to_string(m)));
    g.set_meta("lambda", std::string(to_string(lambda)));
    set_cutoff_range(g, cutoffs);
    return g;
}

GridResult run_qfi_envelope(const RunConfig& c) {
    ModelParams base = resolve_params(c.params);
    Axis axis = parse_axis(opt(c, "axis"));
    if (axis.name != "gbar2") throw ParameterError("qfi-envelope sweeps gbar2");
    double span = opt_double(c, "eps-span"), step = opt_double(c, "eps-step");
    if (!(step > 0) || !(span >= 0)) throw ParameterError("--eps-step must be positive and --eps-span non-negative");
    int n = int(std::llround(span / step));
    std::vector<double> offsets;
    for (int k = -n; k <= n; ++k) offsets.push_back(k * step);
    QfiOptions o;
    o.cutoff = c.cutoff;
    auto vals = axis.values();
    auto env = qfi_envelope(base, vals, offsets, o, threads_of(c));
    GridResult g;
    g.axis_names = {"gbar2"};
    g.axes = {vals};
    g.columns = {"peak", "rescaled_peak", "eps_star", "eps_transition", "at_boundary"};
    const double gT = base.gT();
    for (const auto& e : env)
        g.values.push_back({e.peak, e.peak * gT * gT, e.eps_star, e.eps_transition, e.at_boundary ? 1.0 : 0.0});
    g.reasons.assign(vals.size(), "");
    g.set_meta("lambda", "g2");
    return g;
}

GridResult run_analytic_compare(const RunConfig& c) {
    ModelParams base = resolve_params(c.params);
    Axis axis = parse_axis(opt(c, "axis"));
    auto vals = axis.values();
    std::vector<int> cutoffs(vals.size(), 0);
    auto g = axis_table(axis, {"F_ed", "F_analytic", "rel_err"}, threads_of(c), [&](double v) {
        ModelParams p = apply_axes(base, {axis.name}, {v});
        QfiOptions o;
        o.cutoff = c.cutoff;
        auto ed = qfi_ed(p, Parameter::g2, o);
        cutoffs[std::find(vals.begin(), vals.end(), v) - vals.begin()] = ed.cutoff;
        double an = qfi_analytic(p).total;
        return std::vector<double>{ed.total, an, std::abs(an - ed.total) / ed.total};
    });
    double worst = 0;
    for (const auto& r : g.values)
        if (std::isfinite(r[2])) worst = std::max(worst, r[2]);
    g.set_meta("lambda", "g2");
    g.set_meta("max_rel_err", fmt(worst));
    set_cutoff_range(g, cutoffs);
    return g;
}

GridResult run_phase_diagram(const RunConfig& c) {
    SweepSpec s;
    s.base = resolve_params(c.params);
    for (const auto& a : split(opt(c, "axis"), ';')) s.axes.push_back(parse_axis(a));
    if (s.axes.empty()) throw ParameterError("phase-diagram needs at least one --axis");
    for (const auto& q : split(opt(c, "quantity"), ';')) s.quantities.push_back(parse_quantity(q));
    s.lambda = parse_parameter(opt(c, "lambda"));
    s.cutoff.fixed = c.cutoff;
    s.threads = threads_of(c);
    auto g = run_sweep(s);
    if (auto* r = g.find_meta("cutoff_range")) {
        std::string v = *r;
        g.meta.erase(std::remove_if(g.meta.begin(), g.meta.end(), [](auto& kv) { return kv.first == "cutoff_range"; }),
                     g.meta.end());
        g.set_meta("cutoff", v);
    }
    return g;
}

GridResult run_wigner(const RunConfig& c) {
    ModelParams p = resolve_params(c.params);
    int N = c.cutoff > 0 ? c.cutoff : 2 * converge_cutoff(p);
    auto v = spectrum(p, N, 1).vectors[0];
    WignerOptions o;
    o.nx = opt_int(c, "nx");
    o.np = opt_int(c, "np");
    o.Lx = opt_double(c, "Lx");
    o.Lp = opt_double(c, "Lp");
    if (o.nx < 2 || o.np < 2) throw ParameterError("--nx and --np must be at least 2");
    auto W = wigner_auto(v, o);
    const bool amp = opt_flag(c, "amplify");
    GridResult g;
    g.axis_names = {"x", "p"};
    g.axes = {W.x, W.p};
    g.columns = {"w_plus", "w_minus"};
    if (amp) {
        g.columns.emplace_back("amp_plus");
        g.columns.emplace_back("amp_minus");
    }
    for (std::size_t k = 0; k < W.plus.size(); ++k) {
        std::vector<double> row{W.plus[k], W.minus[k]};
        if (amp) {
            row.push_back(std::pow(std::abs(W.plus[k]), 0.25));
            row.push_back(std::pow(std::abs(W.minus[k]), 0.25));
        }
        g.values.push_back(std::move(row));
    }
    g.reasons.assign(g.values.size(), "");
    g.set_meta("cutoff", std::to_string(N));
    g.set_meta("imag_residue", fmt(W.imag_residue));
    g.set_meta("refine_change", fmt(W.refine_change));
    g.set_meta("support_warning", W.support_warning ? "true" : "false");
    return g;
}

GridResult run_ptps(const RunConfig& c) {
    ModelParams p = resolve_params(c.params);
    PtpsPath path;
    path.coupling = parse_parameter(opt(c, "path"));
    if (!opt(c, "gbar-max").empty()) path.gbar_max = opt_double(c, "gbar-max");
    path.scan_hi = opt_double(c, "scan-hi");
    path.scan_points = opt_int(c, "scan-points");
    path.rel_tol = opt_double(c, "rel-tol");
    if (path.scan_points < 3) throw ParameterError("--scan-points must be at least 3");
    CutoffPolicy cp;
    cp.fixed = c.cutoff;
    auto r = ptps(p, path, cp, threads_of(c));
    auto g = scalar_result({"T", "gbar_max", "divergent", "divergent_at", "refinement_change"},
                           {r.divergent ? kNaN : r.T, r.gbar_max, r.divergent ? 1.0 : 0.0,
                            r.divergent ? r.divergent_at : kNaN, r.refinement_change});
    if (r.divergent) g.reasons[0] = "gap closes along the path: divergent preparation time";
    g.set_meta("coupling", r.coupling);
    g.set_meta("cutoff", std::to_string(r.cutoff));
    g.set_meta("evaluations", std::to_string(r.gbar.size()));
    return g;
}

GridResult run_fit_exponent(const RunConfig& c) {
    ModelParams base = resolve_params(c.params);
    Method m = parse_method(opt(c, "method"));
    if (m == Method::multipolaron) throw ParameterError("fit-exponent supports ed and analytic");
    const std::string comp = opt(c, "component");
    if (comp != "total" && comp != "xi" && comp != "x" && comp != "rho")
        throw ParameterError("unknown component '" + comp + "' (total, xi, x, rho)");
    if (m == Method::ed && comp != "total") throw ParameterError("ED gives only the total QFI");
    const double lo = opt_double(c, "lo"), hi = opt_double(c, "hi");
    auto xs = exponent_window(lo, hi, opt_int(c, "points"));
    std::vector<double> fs(xs.size());
    parallel_for(xs.size(), threads_of(c), [&](std::size_t i) {
        ModelParams p = base.with(Parameter::g2, xs[i] * base.gT());
        if (m == Method::ed) {
            QfiOptions o;
            o.cutoff = c.cutoff;
            fs[i] = qfi_ed(p, Parameter::g2, o).total;
        } else {
            auto q = qfi_analytic(p);
            fs[i] = comp == "total" ? q.total
                    : comp == "xi"  ? q.components.at(Resource::xi)
                    : comp == "x"   ? q.components.at(Resource::x)
                                    : q.components.at(Resource::rho);
        }
    });
    auto f = fit_critical_exponent(xs, fs, lo, hi);
    auto g = scalar_result({"gamma", "std_error", "samples"}, {f.gamma, f.std_error, double(f.samples)});
    g.set_meta("method", std::string(to_string(m)));
    g.set_meta("component", comp);
    return g;
}

// ---- command table --------------------------------------------------------

struct OptSpec {
    std::string name, def, help;
    bool flag = false;
    bool multi = false;
};

struct Command {
    std::string name, help;
    std::vector<OptSpec> opts;
    GridResult (*run)(const RunConfig&);
};

const std::vector<Command>& commands() {
    static const std::vector<Command> table = {
        {"ground-state", "Ground-state energy and <sigma_z> by exact diagonalization", {}, run_ground_state},
        {"gap", "Gap between the two lowest levels", {}, run_gap},
        {"qfi",
         "Quantum Fisher information of the ground state",
         {{"lambda", "g2", "parameter to estimate (omega, Omega, g1, g2, epsilon)"},
          {"method", "ed", "ed, analytic or multipolaron"},
          {"step", "0", "finite-difference step (0: automatic)"}},
         run_qfi},
        {"qfi-curve",
         "QFI along one axis",
         {{"axis", "gbar2:0.5:0.99:40", "name:start:stop:count[:log]"},
          {"lambda", "g2", "parameter to estimate"},
          {"method", "ed", "ed, analytic or multipolaron"},
          {"step", "0", "finite-difference step (0: automatic)"}},
         run_qfi_curve},
        {"qfi-envelope",
         "Maximum over the bias of the g2-QFI along gbar2",
         {{"axis", "gbar2:0.5:0.99:20", "gbar2:start:stop:count[:log]"},
          {"eps-span", "0.01", "half-width of the bias grid around the transition bias"},
          {"eps-step", "0.001", "bias grid spacing"}},
         run_qfi_envelope},
        {"analytic-compare",
         "Closed-form small-Omega QFI against exact diagonalization",
         {{"axis", "gbar2:0.5:0.99:40", "name:start:stop:count[:log]"}},
         run_analytic_compare},
        {"phase-diagram",
         "Quantities over a rectangular parameter grid",
         {{"axis", "", "name:start:stop:count[:log], repeat for more axes", false, true},
          {"quantity", "sigma_z", "sigma_z, energy, gap, qfi_ed, qfi_analytic; repeatable", false, true},
          {"lambda", "g2", "parameter for QFI quantities"}},
         run_phase_diagram},
        {"wigner",
         "Spin-resolved Wigner functions of the ground state",
         {{"nx", "256", "x grid points"},
          {"np", "256", "p grid points"},
          {"Lx", "0", "x half-width (0: automatic)"},
          {"Lp", "0", "p half-width (0: automatic)"},
          {"amplify", "false", "add |W|^(1/4) display columns", true}},
         run_wigner},
        {"ptps",
         "Probe-state preparation time along a coupling path",
         {{"path", "g2", "coupling swept from zero: g1 or g2"},
          {"gbar-max", "", "path endpoint in rescaled units (default: QFI peak)"},
          {"scan-hi", "0", "peak scan upper end (0: 0.999 for g2, 1.5 for g1)"},
          {"scan-points", "240", "peak scan resolution"},
          {"rel-tol", "1e-4", "quadrature refinement target"}},
         run_ptps},
        {"fit-exponent",
         "Critical exponent of the QFI toward gbar2 -> 1",
         {{"component", "total", "total, xi, x or rho"},
          {"method", "analytic", "analytic or ed"},
          {"lo", "0.9", "window start in gbar2"},
          {"hi", "0.99", "window end in gbar2"},
          {"points", "20", "samples in the window"}},
         run_fit_exponent},
    };
    return table;
}

const Command& find_command(const std::string& name) {
    for (const auto& c : commands())
        if (c.name == name) return c;
    throw ParameterError("unknown subcommand '" + name + "'");
}

/// Run the configuration and attach provenance.
GridResult execute(const RunConfig& cfg) {
    GridResult body = find_command(cfg.subcommand).run(cfg);
    GridResult g = body;
    g.meta.clear();
    g.set_meta("version", std::string("qrm ") + QRM_VERSION);
    g.set_meta("config", cfg.to_json());
    for (const auto& [k, v] : body.meta) g.set_meta(k, v);
    return g;
}

// storage CLI11 binds into, one per subcommand
struct Bound {
    const Command* cmd = nullptr;
    CLI::App* app = nullptr;
    std::map<std::string, std::string> params{{"omega", "1"}, {"Omega", "0"}, {"g1", "0"}, {"g2", "0"}, {"epsilon", "0"}};
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::map<std::string, std::vector<std::string>> multi;
    int cutoff = 0, threads = 0;
    std::string format = "csv", output = "-";

    RunConfig config() const {
        RunConfig c;
        c.subcommand = cmd->name;
        c.params = params;
        c.options = values;
        for (const auto& [k, v] : flags) c.options[k] = v ? "true" : "false";
        for (const auto& [k, v] : multi) {
            std::string s;
            for (const auto& e : v) s += (s.empty() ? "" : ";") + e;
            c.options[k] = s.empty() ? values.count(k) ? values.at(k) : "" : s;
        }
        c.cutoff = cutoff;
        c.threads = threads;
        c.format = format;
        c.output = output;
        return c;
    }
};

void add_common(CLI::App* sc, Bound& b) {
    sc->add_option("--omega", b.params["omega"], "cavity frequency")->capture_default_str();
    sc->add_option("--Omega", b.params["Omega"], "qubit splitting")->capture_default_str();
    sc->add_option("--g1", b.params["g1"], "linear coupling; suffix gs or gT for scaled units")->capture_default_str();
    sc->add_option("--g2", b.params["g2"], "nonlinear coupling; suffix gs or gT for scaled units")->capture_default_str();
    sc->add_option("--epsilon,--eps", b.params["epsilon"], "bias; suffix gs or gT for scaled units")
        ->capture_default_str();
    sc->add_option("--cutoff", b.cutoff, "Fock cutoff per spin (0: converge automatically)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sc->add_option("--threads", b.threads, "worker threads (0: QRM_THREADS or hardware)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sc->add_option("--format", b.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sc->add_option("-o,--output", b.output, "output file, - for stdout")->capture_default_str();
}

int fail(int code, const std::string& msg) {
    std::cerr << "qrm: error: " << msg << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ground-state properties and quantum Fisher information of the biased linear+nonlinear Rabi model"};
    app.set_version_flag("--version", std::string("qrm ") + QRM_VERSION);
    app.require_subcommand(1);

    std::deque<Bound> bound;
    for (const auto& cmd : commands()) {
        Bound& b = bound.emplace_back();
        b.cmd = &cmd;
        b.app = app.add_subcommand(cmd.name, cmd.help);
        add_common(b.app, b);
        for (const auto& o : cmd.opts) {
            if (o.flag) {
                b.flags[o.name] = false;
                b.app->add_flag("--" + o.name, b.flags[o.name], o.help);
            } else if (o.multi) {
                b.values[o.name] = o.def;
                b.app->add_option("--" + o.name, b.multi[o.name], o.help + (o.def.empty() ? "" : " [" + o.def + "]"));
            } else {
                b.values[o.name] = o.def;
                b.app->add_option("--" + o.name, b.values[o.name], o.help)->capture_default_str();
            }
        }
    }

    std::string replay_file, replay_out;
    auto* replay = app.add_subcommand("replay", "Re-run the configuration recorded in an output file");
    replay->add_option("file", replay_file, "file written by an earlier run")->required();
    replay->add_option("-o,--output", replay_out, "destination (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg;
        std::string dest;
        if (replay->parsed()) {
            cfg = config_from_output(read_file(replay_file));
            dest = replay_out.empty() ? "-" : replay_out;
        } else {
            for (const auto& b : bound)
                if (b.app->parsed()) cfg = b.config();
            dest = cfg.output;
        }
        GridResult g = execute(cfg);
        write_output(dest, serialize(g, parse_format(cfg.format)));
        for (std::size_t i = 0; i < g.reasons.size(); ++i)
            if (!g.reasons[i].empty()) std::cerr << "qrm: warning: point " << i << ": " << g.reasons[i] << "\n";
        return 0;
    } catch (const ParameterError& e) {
        return fail(2, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(2, std::string("malformed configuration: ") + e.what());
    } catch (const NumericalError& e) {
        return fail(1, e.what());
    } catch (const IoError& e) {
        return fail(1, e.what());
    } catch (const std::exception& e) {
        return fail(1, e.what());
    }
}
