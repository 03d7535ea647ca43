#include "cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "cli/config.hpp"
#include "wavereg/error.hpp"
#include "wavereg/forward_solver.hpp"
#include "wavereg/kernel.hpp"
#include "wavereg/reconstruct.hpp"
#include "wavereg/trace_io.hpp"
#include "wavereg/transform.hpp"

namespace wavereg::cli {

namespace {

namespace fs = std::filesystem;

// Files produced by a command, flushed together once it succeeds.
struct Outputs {
    std::vector<std::pair<std::string, std::string>> files;
    std::string to_stdout;
    bool use_stdout = false;
};

struct Context {
    const json& config;
    const Options& opts;
    Outputs& outputs;
    std::ostream& err;
};

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Header lines shared by every CSV artifact.
std::string csv_preamble(const std::string& command, const json& resolved, const Options& opts) {
    std::string s = "# command=" + command + "\n# config=" + compact(resolved) + "\n";
    if (opts.timestamp) {
        s += "# timestamp=" + utc_timestamp() + "\n";
    }
    return s;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json stamp(json j, const std::string& command, const json& resolved, const Options& opts) {
    j["command"] = command;
    j["config"] = resolved;
    if (opts.timestamp) {
        j["timestamp"] = utc_timestamp();
    }
    return j;
}

std::vector<double> checked_h_list(const json& root, const std::vector<double>& fallback) {
    const auto h = get_number_list(root, "h_list", fallback, "config");
    if (h.empty()) {
        throw ConfigError("h_list: must not be empty");
    }
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0.0) || (i > 0 && !(h[i] < h[i - 1]))) {
            throw ConfigError("h_list: values must be positive and strictly decreasing");
        }
    }
    return h;
}

SampledTrace load_trace(const std::string& path) {
    if (!fs::exists(path)) {
        throw ConfigError("trace file " + path + " does not exist");
    }
    try {
        return read_trace_file(path);
    } catch (const std::exception& e) {
        throw ConfigError("trace file " + path + ": " + e.what());
    }
}

std::optional<double> metadata_number(const SampledTrace& g, const std::string& key) {
    const auto it = g.metadata.find(key);
    if (it == g.metadata.end()) {
        return std::nullopt;
    }
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// ---------------------------------------------------------------- kernel-eval

int cmd_kernel_eval(Context& ctx) {
    const json& root = ctx.config;
    check_keys(root, {"kernel", "quadrature", "grid"}, "config");
    const KernelParams params = parse_kernel(section(root, "kernel"), KernelParams{});
    const QuadratureSpec quad = parse_quadrature(section(root, "quadrature"));
    const json& g = section(root, "grid");
    check_keys(g, {"x_min", "x_max", "nx", "t_min", "t_max", "nt"}, "grid");
    const double x_min = get_number(g, "x_min", -2.0, "grid");
    const double x_max = get_number(g, "x_max", 2.0, "grid");
    const int nx = get_int(g, "nx", 9, "grid");
    const double t_min = get_number(g, "t_min", -params.y0, "grid");
    const double t_max = get_number(g, "t_max", params.y0, "grid");
    const int nt = get_int(g, "nt", 9, "grid");
    if (nx < 0 || nt < 0) {
        throw ConfigError("grid: nx and nt must be >= 0");
    }
    if (x_max < x_min || t_max < t_min) {
        throw ConfigError("grid: need x_min <= x_max and t_min <= t_max");
    }
    if (nt > 0 && (std::abs(t_min) > params.y0 || std::abs(t_max) > params.y0)) {
        throw ConfigError("grid: |t| must not exceed kernel.y0");
    }
    json resolved = {{"kernel", to_json(params)},
                     {"quadrature", to_json(quad)},
                     {"grid",
                      {{"x_min", x_min},
                       {"x_max", x_max},
                       {"nx", nx},
                       {"t_min", t_min},
                       {"t_max", t_max},
                       {"nt", nt}}}};

    auto node = [](double lo, double hi, int n, int i) {
        return n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    };
    std::ostringstream csv;
    csv << csv_preamble("kernel-eval", resolved, ctx.opts) << "x,t,K\n";
    for (int j = 0; j < nt; ++j) {
        const double t = node(t_min, t_max, nt, j);
        for (int i = 0; i < nx; ++i) {
            const double x = node(x_min, x_max, nx, i);
            csv << format_double(x) << ',' << format_double(t) << ','
                << format_double(kernel_closed_form(x, t, params, quad)) << '\n';
        }
    }
    if (ctx.opts.out_dir.empty()) {
        ctx.outputs.use_stdout = true;
        ctx.outputs.to_stdout = csv.str();
    } else {
        ctx.outputs.files.emplace_back("kernel_eval.csv", csv.str());
    }
    return kExitOk;
}

// --------------------------------------------------------------- kernel-check

int cmd_kernel_check(Context& ctx) {
    const json& root = ctx.config;
    check_keys(root, {"kernel", "quadrature", "h_list", "grid", "dual_tol", "bessel", "g_identity"},
               "config");
    const json& kj = section(root, "kernel");
    check_keys(kj, {"y0", "c"}, "kernel");
    KernelParams base;
    base.y0 = get_number(kj, "y0", 1.0, "kernel");
    base.c = get_number(kj, "c", 1.0, "kernel");
    base.validate();
    const QuadratureSpec quad = parse_quadrature(section(root, "quadrature"));
    const auto h_list = checked_h_list(root, {0.1, 0.03, 0.01});
    const json& g = section(root, "grid");
    check_keys(g, {"x_max", "nx", "t_max", "nt"}, "grid");
    const double x_max = get_number(g, "x_max", 2.0, "grid");
    const int nx = get_int(g, "nx", 10, "grid");
    const double t_max = get_number(g, "t_max", 0.95, "grid");
    const int nt = get_int(g, "nt", 10, "grid");
    if (nx < 2 || nt < 2 || !(x_max > 0.0) || !(t_max > 0.0) || t_max >= base.y0) {
        throw ConfigError("grid: need nx, nt >= 2, x_max > 0 and 0 < t_max < kernel.y0");
    }
    const double dual_tol = get_number(root, "dual_tol", 1e-6, "config");
    const json& bj = section(root, "bessel");
    check_keys(bj, {"z", "tol"}, "bessel");
    const auto z_list = get_number_list(bj, "z", {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}, "bessel");
    const double bessel_tol = get_number(bj, "tol", 1e-10, "bessel");
    const json& gj = section(root, "g_identity");
    check_keys(gj, {"k_max", "omega_max", "n", "y0", "tol"}, "g_identity");
    const double k_max = get_number(gj, "k_max", 3.0, "g_identity");
    const double w_max = get_number(gj, "omega_max", 3.0, "g_identity");
    const int gn = get_int(gj, "n", 9, "g_identity");
    const double g_y0 = get_number(gj, "y0", 1.0, "g_identity");
    const double g_tol = get_number(gj, "tol", 1e-8, "g_identity");
    if (gn < 2 || !(g_y0 > 0.0) || !(k_max >= 0.0) || !(w_max >= 0.0)) {
        throw ConfigError("g_identity: need n >= 2, y0 > 0, k_max, omega_max >= 0");
    }
    for (double z : z_list) {
        if (std::abs(z) > kMaxExponent) {
            throw ConfigError("bessel.z: |z| must not exceed 700");
        }
    }
    json resolved = {{"kernel", {{"y0", base.y0}, {"c", base.c}}},
                     {"quadrature", to_json(quad)},
                     {"h_list", h_list},
                     {"grid", {{"x_max", x_max}, {"nx", nx}, {"t_max", t_max}, {"nt", nt}}},
                     {"dual_tol", dual_tol},
                     {"bessel", {{"z", z_list}, {"tol", bessel_tol}}},
                     {"g_identity",
                      {{"k_max", k_max}, {"omega_max", w_max}, {"n", gn}, {"y0", g_y0}, {"tol", g_tol}}}};

    json report;
    json per_h = json::array();
    double dual_max = 0.0;
    for (double h : h_list) {
        KernelParams p = base;
        p.h = h;
        const double kc = default_k_cutoff(p);
        std::vector<double> xs(nx);
        for (int i = 0; i < nx; ++i) {
            xs[i] = -x_max + 2.0 * x_max * i / (nx - 1);
        }
        double max_rel = 0.0;
        double max_abs = 0.0;
        for (int j = 0; j < nt; ++j) {
            const double t = -t_max + 2.0 * t_max * j / (nt - 1);
            const auto row = kernel_fourier_oracle_row(xs, t, p, kc, quad);
            for (int i = 0; i < nx; ++i) {
                const double closed = kernel_closed_form(xs[i], t, p, quad);
                const double diff = std::abs(closed - row[i].value);
                max_abs = std::max(max_abs, diff);
                max_rel = std::max(max_rel, diff / std::max(std::abs(row[i].value), 1e-300));
            }
        }
        dual_max = std::max(dual_max, max_rel);
        per_h.push_back({{"h", h}, {"k_cutoff", kc}, {"max_rel_error", max_rel},
                         {"max_abs_error", max_abs}});
    }
    const bool dual_ok = dual_max <= dual_tol;
    report["dual"] = {{"tolerance", dual_tol}, {"max_rel_error", dual_max}, {"per_h", per_h},
                      {"pass", dual_ok}};

    json cases = json::array();
    double bessel_max = 0.0;
    for (double z : z_list) {
        const double sum = h_function(z, quad) + h_function(-z, quad);
        const double i0 = bessel_i0_series(z);
        const double e = std::abs(sum - i0);
        bessel_max = std::max(bessel_max, e);
        cases.push_back({{"z", z}, {"h_sum", sum}, {"i0_series", i0}, {"abs_error", e}});
    }
    const bool bessel_ok = bessel_max <= bessel_tol;
    report["bessel"] = {{"tolerance", bessel_tol}, {"max_abs_error", bessel_max},
                        {"cases", cases}, {"pass", bessel_ok}};

    double g_max = 0.0;
    for (int a = 0; a < gn; ++a) {
        const double k = -k_max + 2.0 * k_max * a / (gn - 1);
        for (int b = 0; b < gn; ++b) {
            const double w = -w_max + 2.0 * w_max * b / (gn - 1);
            const auto [gp, gm] = g_functions(k, w, g_y0, quad);
            g_max = std::max(g_max, std::abs(gp + gm - transfer_factor(k, w, g_y0) / std::numbers::pi));
        }
    }
    const bool g_ok = g_max <= g_tol;
    report["g_identity"] = {{"tolerance", g_tol}, {"max_abs_error", g_max}, {"pass", g_ok}};
    const bool pass = dual_ok && bessel_ok && g_ok;
    report["pass"] = pass;
    ctx.outputs.files.emplace_back("kernel_check.json",
                                   stamp(report, "kernel-check", resolved, ctx.opts).dump(2) + "\n");
    if (!pass) {
        ctx.err << "kernel-check: tolerance failure (dual " << dual_max << ", bessel "
                << bessel_max << ", g " << g_max << ")\n";
    }
    return pass ? kExitOk : kExitTolerance;
}

// ---------------------------------------------------------------- reconstruct

json report_json(const ConvergenceReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries) {
        entries.push_back({{"h", e.h},
                           {"estimate", number_or_null(e.estimate)},
                           {"abs_error", number_or_null(e.abs_error)},
                           {"max_exponent", number_or_null(e.max_exponent)},
                           {"levels", e.levels},
                           {"roundoff", number_or_null(e.roundoff)},
                           {"status", to_string(e.status)},
                           {"message", e.message}});
    }
    json j = {{"entries", entries},
              {"target", r.target ? json(*r.target) : json(nullptr)},
              {"guard_h", r.guard_h ? json(*r.guard_h) : json(nullptr)},
              {"aperture", to_json(r.aperture)},
              {"quadrature", to_json(r.quadrature)}};
    if (const auto* last = r.last_ok()) {
        j["last_ok"] = {{"h", last->h}, {"estimate", last->estimate}};
        if (r.target && *r.target != 0.0) {
            j["last_ok"]["rel_error"] = last->abs_error / std::abs(*r.target);
        }
    }
    return j;
}

int cmd_reconstruct(Context& ctx) {
    const json& root = ctx.config;
    check_keys(root, {"aperture", "quadrature", "h_list", "trace", "target"}, "config");
    const Aperture ap = parse_aperture(section(root, "aperture"));
    const QuadratureSpec quad = parse_quadrature(section(root, "quadrature"));
    const auto h_list = checked_h_list(root, {0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625});
    const TraceSource src = parse_trace_source(section(root, "trace"));
    std::optional<double> target = get_optional_number(root, "target", "config");

    BoundaryTrace trace = BoundaryTrace::zero();
    std::string target_source = target ? "config" : "none";
    switch (src.kind) {
        case TraceSource::Kind::Modes: {
            std::vector<WeightedTrace> parts;
            for (const auto& t : src.modes) {
                parts.push_back({t.weight, mode_boundary_trace(t.mode)});
            }
            trace = superpose(std::move(parts));
            if (!target) {
                target = superposition_interior_value(src.modes, ap.x0, ap.y0, ap.t0);
                target_source = "modes";
            }
            break;
        }
        case TraceSource::Kind::File: {
            SampledTrace g = load_trace(src.path);
            const double w = bounding_halfwidth(ap);
            if (!g.covers(ap.x0 - w, ap.x0 + w, ap.t0 - ap.y0, ap.t0 + ap.y0)) {
                throw CoverageError("trace grid [" + format_double(g.x_min) + ", " +
                                    format_double(g.x_max) + "] x [" + format_double(g.t_min) +
                                    ", " + format_double(g.t_max) +
                                    "] does not cover the aperture rectangle |x - x0| <= " +
                                    format_double(w) + ", |t - t0| <= " + format_double(ap.y0));
            }
            if (!target) {
                const auto px = metadata_number(g, "probe_x");
                const auto py = metadata_number(g, "probe_y");
                const auto pt = metadata_number(g, "probe_t");
                const auto pu = metadata_number(g, "probe_u");
                if (px && py && pt && pu && std::abs(*px - ap.x0) < 1e-9 &&
                    std::abs(*py - ap.y0) < 1e-9 && std::abs(*pt - ap.t0) < 1e-9) {
                    target = *pu;
                    target_source = "trace metadata";
                }
            }
            trace = BoundaryTrace::sampled(std::move(g), src.interpolation);
            break;
        }
        case TraceSource::Kind::Zero:
            if (!target) {
                target = 0.0;
                target_source = "zero trace";
            }
            break;
    }

    json resolved = {{"aperture", to_json(ap)},
                     {"quadrature", to_json(quad)},
                     {"h_list", h_list},
                     {"trace", to_json(src)},
                     {"target", target ? json(*target) : json(nullptr)}};

    const ConvergenceReport report = h_sweep(trace, ap, h_list, quad, target);

    std::ostringstream csv;
    csv << csv_preamble("reconstruct", resolved, ctx.opts);
    write_report_csv(csv, report);
    json j = report_json(report);
    j["target_source"] = target_source;
    ctx.outputs.files.emplace_back("report.csv", csv.str());
    ctx.outputs.files.emplace_back("report.json",
                                   stamp(j, "reconstruct", resolved, ctx.opts).dump(2) + "\n");
    return kExitOk;
}

// ----------------------------------------------------------------------- fdtd

int cmd_fdtd(Context& ctx) {
    const json& root = ctx.config;
    check_keys(root, {"fdtd", "initial", "probes", "trace"}, "config");
    FdtdSetup setup = parse_fdtd(root);
    try {
        setup.config.validate();
    } catch (const SolverConstraintError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const json resolved = to_json(setup);
    const FdtdResult res = fdtd_run(setup.config, setup.probes, setup.traces);

    SampledTrace trace = res.traces.front();
    trace.metadata["config"] = compact(resolved);
    trace.metadata["command"] = "fdtd";
    if (ctx.opts.timestamp) {
        trace.metadata["timestamp"] = utc_timestamp();
    }
    const std::string support = res.support_margin >= 2.0 * setup.config.dx ? "ok" : "violated";
    trace.metadata["support_check"] = support;
    ctx.outputs.files.emplace_back("trace.csv", trace_csv(trace));

    std::ostringstream probes;
    probes << csv_preamble("fdtd", resolved, ctx.opts);
    probes << "# courant=" << format_double(res.courant) << "\n";
    probes << "# support_margin=" << format_double(res.support_margin) << "\n";
    probes << "# support_check=" << support << "\n";
    probes << "probe,x,y,t,u\n";
    for (std::size_t p = 0; p < res.probes.size(); ++p) {
        const auto& s = res.probes[p];
        for (std::size_t n = 0; n < s.times.size(); ++n) {
            probes << p << ',' << format_double(s.probe.x) << ',' << format_double(s.probe.y) << ','
                   << format_double(s.times[n]) << ',' << format_double(s.values[n]) << '\n';
        }
    }
    ctx.outputs.files.emplace_back("probes.csv", probes.str());

    if (setup.config.record_energy) {
        std::ostringstream e;
        e << csv_preamble("fdtd", resolved, ctx.opts) << "t,energy\n";
        for (std::size_t n = 0; n < res.energy.size(); ++n) {
            e << format_double((n + 0.5) * setup.config.dt) << ',' << format_double(res.energy[n])
              << '\n';
        }
        ctx.outputs.files.emplace_back("energy.csv", e.str());
    }
    return kExitOk;
}

// ---------------------------------------------------------------------- decay

int cmd_decay(Context& ctx) {
    const json& root = ctx.config;
    check_keys(root, {"kernel", "quadrature", "epsilon", "d", "nt", "nx", "h_list", "slack"},
               "config");
    const json& kj = section(root, "kernel");
    check_keys(kj, {"y0", "c"}, "kernel");
    KernelParams base;
    base.y0 = get_number(kj, "y0", 1.0, "kernel");
    base.c = get_number(kj, "c", 1.0, "kernel");
    base.validate();
    const QuadratureSpec quad = parse_quadrature(section(root, "quadrature"));
    const double eps = get_number(root, "epsilon", 0.3, "config");
    const double d = get_number(root, "d", 2.0, "config");
    const int nt = get_int(root, "nt", 21, "config");
    const int nx = get_int(root, "nx", 20, "config");
    const double slack = get_number(root, "slack", 0.2, "config");
    const auto h_list = checked_h_list(root, {0.2, 0.1, 0.05, 0.025});
    if (!(eps > 0.0) || !(d > 0.0) || nt < 2 || nx < 1 || slack < 0.0) {
        throw ConfigError("decay: need epsilon > 0, d > 0, nt >= 2, nx >= 1, slack >= 0");
    }
    const double a = decay_constant_a(base.c, d);
    json resolved = {{"kernel", {{"y0", base.y0}, {"c", base.c}}},
                     {"quadrature", to_json(quad)},
                     {"epsilon", eps},
                     {"d", d},
                     {"nt", nt},
                     {"nx", nx},
                     {"h_list", h_list},
                     {"slack", slack}};

    std::ostringstream csv;
    csv << csv_preamble("decay", resolved, ctx.opts);
    csv << "# a=" << format_double(a) << "\n";
    bool ok = true;
    if (eps > d) {
        csv << "# band empty: epsilon > d\n";
    }
    csv << "h,x,t,log_abs_K,bound_rhs,a,envelope\n";
    if (eps <= d) {
        double prev_env = 0.0;
        std::ostringstream env_lines;
        for (std::size_t i = 0; i < h_list.size(); ++i) {
            KernelParams p = base;
            p.h = h_list[i];
            const auto samples = sample_decay_band(p, eps, d, nt, nx, quad);
            const double env = decay_envelope(samples);
            for (const auto& s : samples) {
                csv << format_double(p.h) << ',' << format_double(s.x) << ',' << format_double(s.t)
                    << ',' << format_double(s.log_abs_k) << ',' << format_double(s.bound_rhs) << ','
                    << format_double(a) << ',' << format_double(env) << '\n';
            }
            if (i > 0 && env > (1.0 + slack) * prev_env) {
                ok = false;
            }
            env_lines << "h=" << format_double(p.h) << " envelope=" << format_double(env) << "\n";
            prev_env = env;
        }
        if (!ok) {
            ctx.err << "decay: envelope grows along the sweep beyond the slack\n" << env_lines.str();
        }
    }
    ctx.outputs.files.emplace_back("decay.csv", csv.str());
    return ok ? kExitOk : kExitTolerance;
}

// ------------------------------------------------------------------- spectral

int cmd_spectral(Context& ctx) {
    const json& root = ctx.config;
    check_keys(root, {"trace", "y0", "target", "tol"}, "config");
    const json& tj = section(root, "trace");
    check_keys(tj, {"path"}, "trace");
    const std::string path = get_string(tj, "path", "trace.csv", "trace");
    const double y0 = get_number(root, "y0", 1.0, "config");
    if (!(y0 > 0.0)) {
        throw ConfigError("y0: must be positive");
    }
    const double tol = get_number(root, "tol", 0.02, "config");
    std::optional<double> target = get_optional_number(root, "target", "config");
    const SampledTrace g = load_trace(path);
    std::string target_source = target ? "config" : "none";
    if (!target) {
        const auto px = metadata_number(g, "probe_x");
        const auto py = metadata_number(g, "probe_y");
        const auto pt = metadata_number(g, "probe_t");
        const auto pu = metadata_number(g, "probe_u");
        if (px && py && pt && pu && std::abs(*px) < 1e-9 && std::abs(*py - y0) < 1e-9 &&
            std::abs(*pt) < 1e-9) {
            target = *pu;
            target_source = "trace metadata";
        }
    }
    json resolved = {{"trace", {{"path", path}}},
                     {"y0", y0},
                     {"target", target ? json(*target) : json(nullptr)},
                     {"tol", tol}};

    const SpectralResult r = spectral_reconstruct(g, y0);
    json j = {{"value", r.value},
              {"boundary_fraction", r.boundary_fraction},
              {"nyquist_fraction", r.nyquist_fraction},
              {"warnings", r.warnings},
              {"target", target ? json(*target) : json(nullptr)},
              {"target_source", target_source}};
    bool ok = true;
    if (target && *target != 0.0) {
        const double rel = std::abs(r.value - *target) / std::abs(*target);
        j["rel_error"] = rel;
        ok = rel <= tol;
        j["pass"] = ok;
    }
    for (const auto& w : r.warnings) {
        ctx.err << "spectral: warning: " << w << "\n";
    }
    ctx.outputs.files.emplace_back("spectral.json",
                                   stamp(j, "spectral", resolved, ctx.opts).dump(2) + "\n");
    return ok ? kExitOk : kExitTolerance;
}

const std::map<std::string, std::function<int(Context&)>>& commands() {
    static const std::map<std::string, std::function<int(Context&)>> table = {
        {"kernel-eval", cmd_kernel_eval}, {"kernel-check", cmd_kernel_check},
        {"reconstruct", cmd_reconstruct}, {"fdtd", cmd_fdtd},
        {"decay", cmd_decay},             {"spectral", cmd_spectral},
    };
    return table;
}

void flush(const Outputs& outputs, const Options& opts, std::ostream& out) {
    if (outputs.use_stdout) {
        out << outputs.to_stdout;
    }
    if (outputs.files.empty()) {
        return;
    }
    const fs::path dir = opts.out_dir.empty() ? fs::path(".") : fs::path(opts.out_dir);
    fs::create_directories(dir);
    for (const auto& [name, content] : outputs.files) {
        const fs::path target = dir / name;
        const fs::path tmp = dir / (name + ".tmp");
        {
            std::ofstream f(tmp, std::ios::binary);
            if (!f) {
                throw std::runtime_error("cannot write " + tmp.string());
            }
            f << content;
        }
        fs::rename(tmp, target);
    }
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, fn] : commands()) {
            v.push_back(name);
        }
        return v;
    }();
    return names;
}

int run_command(const std::string& name, const Options& opts, std::ostream& out,
                std::ostream& err) {
    const auto it = commands().find(name);
    if (it == commands().end()) {
        err << "unknown command: " << name << "\n";
        return kExitConfig;
    }
    Outputs outputs;
    int code = kExitOk;
    try {
        const json config = load_config(opts.config_path);
        Context ctx{config, opts, outputs, err};
        code = it->second(ctx);
    } catch (const ConfigError& e) {
        err << name << ": invalid config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const OverflowError& e) {
        err << name << ": kernel overflow: exponent " << format_double(e.exponent()) << ": "
            << e.what() << "\n";
        return kExitOverflow;
    } catch (const CoverageError& e) {
        err << name << ": coverage error: " << e.what() << "\n";
        return kExitCoverage;
    } catch (const SupportError& e) {
        err << name << ": support error: " << e.what() << "\n";
        return kExitCoverage;
    } catch (const SolverConstraintError& e) {
        err << name << ": solver constraint violated: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::invalid_argument& e) {
        err << name << ": invalid config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        err << name << ": invalid config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const json::exception& e) {
        err << name << ": invalid config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << name << ": error: " << e.what() << "\n";
        return kExitTolerance;
    }
    try {
        flush(outputs, opts, out);
    } catch (const std::exception& e) {
        err << name << ": cannot write output: " << e.what() << "\n";
        return kExitConfig;
    }
    return code;
}

}  // namespace wavereg::cli
