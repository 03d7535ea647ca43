#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wavereg::cli {

namespace {

std::string phase_name(Phase p) { return p == Phase::Cos ? "cos" : "sin"; }

Phase parse_phase(const json& obj, const std::string& key, const std::string& where) {
    const std::string s = get_string(obj, key, "cos", where);
    if (s == "cos") {
        return Phase::Cos;
    }
    if (s == "sin") {
        return Phase::Sin;
    }
    throw ConfigError(where + "." + key + ": expected \"cos\" or \"sin\", got \"" + s + "\"");
}

const json& empty_object() {
    static const json e = json::object();
    return e;
}

}  // namespace

json load_config(const std::string& path) {
    if (path.empty()) {
        return json::object();
    }
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config root must be a JSON object");
    }
    return j;
}

void check_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(where + ": unknown key \"" + key + "\"");
        }
    }
}

const json& section(const json& obj, const std::string& key) {
    const auto it = obj.find(key);
    return it == obj.end() ? empty_object() : *it;
}

double get_number(const json& obj, const std::string& key, double fallback,
                  const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_number()) {
        throw ConfigError(where + "." + key + ": expected a number");
    }
    const double v = it->get<double>();
    if (!std::isfinite(v)) {
        throw ConfigError(where + "." + key + ": must be finite");
    }
    return v;
}

int get_int(const json& obj, const std::string& key, int fallback, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_number_integer()) {
        throw ConfigError(where + "." + key + ": expected an integer");
    }
    return it->get<int>();
}

bool get_bool(const json& obj, const std::string& key, bool fallback, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_boolean()) {
        throw ConfigError(where + "." + key + ": expected true or false");
    }
    return it->get<bool>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& fallback,
                       const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_string()) {
        throw ConfigError(where + "." + key + ": expected a string");
    }
    return it->get<std::string>();
}

std::vector<double> get_number_list(const json& obj, const std::string& key,
                                    const std::vector<double>& fallback, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_array()) {
        throw ConfigError(where + "." + key + ": expected an array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : *it) {
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            throw ConfigError(where + "." + key + ": expected an array of finite numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

std::optional<double> get_optional_number(const json& obj, const std::string& key,
                                          const std::string& where) {
    if (obj.find(key) == obj.end() || obj.at(key).is_null()) {
        return std::nullopt;
    }
    return get_number(obj, key, 0.0, where);
}

KernelParams parse_kernel(const json& obj, const KernelParams& defaults) {
    check_keys(obj, {"y0", "c", "h"}, "kernel");
    KernelParams p;
    p.y0 = get_number(obj, "y0", defaults.y0, "kernel");
    p.c = get_number(obj, "c", defaults.c, "kernel");
    p.h = get_number(obj, "h", defaults.h, "kernel");
    p.validate();
    return p;
}

json to_json(const KernelParams& p) { return {{"y0", p.y0}, {"c", p.c}, {"h", p.h}}; }

Aperture parse_aperture(const json& obj) {
    check_keys(obj, {"y0", "c", "epsilon", "x0", "t0"}, "aperture");
    Aperture a;
    a.y0 = get_number(obj, "y0", a.y0, "aperture");
    a.c = get_number(obj, "c", a.c, "aperture");
    a.epsilon = get_number(obj, "epsilon", a.epsilon, "aperture");
    a.x0 = get_number(obj, "x0", a.x0, "aperture");
    a.t0 = get_number(obj, "t0", a.t0, "aperture");
    a.validate();
    return a;
}

json to_json(const Aperture& a) {
    return {{"y0", a.y0}, {"c", a.c}, {"epsilon", a.epsilon}, {"x0", a.x0}, {"t0", a.t0}};
}

QuadratureSpec parse_quadrature(const json& obj) {
    check_keys(obj,
               {"nodes_t", "nodes_x", "nodes_s", "cell_nodes", "refinement", "rel_tol",
                "kernel_rel_tol"},
               "quadrature");
    QuadratureSpec q;
    q.nodes_t = get_int(obj, "nodes_t", q.nodes_t, "quadrature");
    q.nodes_x = get_int(obj, "nodes_x", q.nodes_x, "quadrature");
    q.nodes_s = get_int(obj, "nodes_s", q.nodes_s, "quadrature");
    q.cell_nodes = get_int(obj, "cell_nodes", q.cell_nodes, "quadrature");
    q.refinement = get_int(obj, "refinement", q.refinement, "quadrature");
    q.rel_tol = get_number(obj, "rel_tol", q.rel_tol, "quadrature");
    q.kernel_rel_tol = get_number(obj, "kernel_rel_tol", q.kernel_rel_tol, "quadrature");
    if (q.refinement > 8) {
        throw ConfigError("quadrature.refinement: at most 8 doublings");
    }
    q.validate();
    return q;
}

json to_json(const QuadratureSpec& q) {
    return {{"nodes_t", q.nodes_t},       {"nodes_x", q.nodes_x},
            {"nodes_s", q.nodes_s},       {"cell_nodes", q.cell_nodes},
            {"refinement", q.refinement}, {"rel_tol", q.rel_tol},
            {"kernel_rel_tol", q.kernel_rel_tol}};
}

Mode parse_mode(const json& obj, const std::string& where) {
    check_keys(obj, {"weight", "amplitude", "k", "l", "x_phase", "t_phase"}, where);
    Mode m;
    m.amplitude = get_number(obj, "amplitude", m.amplitude, where);
    m.k = get_number(obj, "k", m.k, where);
    m.l = get_number(obj, "l", m.l, where);
    m.x_phase = parse_phase(obj, "x_phase", where);
    m.t_phase = parse_phase(obj, "t_phase", where);
    m.validate();
    return m;
}

json to_json(const Mode& m) {
    return {{"amplitude", m.amplitude},
            {"k", m.k},
            {"l", m.l},
            {"x_phase", phase_name(m.x_phase)},
            {"t_phase", phase_name(m.t_phase)}};
}

std::vector<ModeTerm> parse_mode_terms(const json& arr, const std::string& where) {
    if (!arr.is_array()) {
        throw ConfigError(where + ": expected an array of modes");
    }
    std::vector<ModeTerm> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        ModeTerm t;
        t.mode = parse_mode(arr[i], w);
        t.weight = get_number(arr[i], "weight", 1.0, w);
        out.push_back(t);
    }
    return out;
}

TraceSource parse_trace_source(const json& obj) {
    check_keys(obj, {"type", "modes", "path", "interpolation"}, "trace");
    TraceSource s;
    const std::string type = get_string(obj, "type", "modes", "trace");
    if (type == "modes") {
        s.kind = TraceSource::Kind::Modes;
        if (obj.contains("modes")) {
            s.modes = parse_mode_terms(obj.at("modes"), "trace.modes");
        } else {
            s.modes = {ModeTerm{1.0, Mode{1.0, 0.5, 1.0, Phase::Cos, Phase::Cos}}};
        }
    } else if (type == "file") {
        s.kind = TraceSource::Kind::File;
        s.path = get_string(obj, "path", "", "trace");
        if (s.path.empty()) {
            throw ConfigError("trace.path: required for a file trace");
        }
        const std::string interp = get_string(obj, "interpolation", "lagrange6", "trace");
        if (interp == "lagrange6") {
            s.interpolation = Interpolation::Lagrange6;
        } else if (interp == "bilinear") {
            s.interpolation = Interpolation::Bilinear;
        } else {
            throw ConfigError("trace.interpolation: expected \"lagrange6\" or \"bilinear\"");
        }
    } else if (type == "zero") {
        s.kind = TraceSource::Kind::Zero;
    } else {
        throw ConfigError("trace.type: expected \"modes\", \"file\" or \"zero\"");
    }
    return s;
}

json to_json(const TraceSource& s) {
    switch (s.kind) {
        case TraceSource::Kind::Modes: {
            json modes = json::array();
            for (const auto& t : s.modes) {
                json m = to_json(t.mode);
                m["weight"] = t.weight;
                modes.push_back(m);
            }
            return {{"type", "modes"}, {"modes", modes}};
        }
        case TraceSource::Kind::File:
            return {{"type", "file"},
                    {"path", s.path},
                    {"interpolation",
                     s.interpolation == Interpolation::Bilinear ? "bilinear" : "lagrange6"}};
        case TraceSource::Kind::Zero:
            return {{"type", "zero"}};
    }
    return {};
}

std::function<double(double, double)> InitialData::function() const {
    switch (kind) {
        case Kind::Bump:
            return bump_initial_data(cx, cy, radius);
        case Kind::Zero:
            return [](double, double) { return 0.0; };
        case Kind::WindowedMode:
            return windowed_mode_initial_data(mode, x_inner, x_outer, y_inner, y_outer);
    }
    return {};
}

FdtdSetup parse_fdtd(const json& root) {
    FdtdSetup s;
    const json& f = section(root, "fdtd");
    check_keys(f, {"X", "Y", "dx", "dt", "T", "full_plane", "record_energy"}, "fdtd");
    FdtdConfig& c = s.config;
    c.X = get_number(f, "X", c.X, "fdtd");
    c.Y = get_number(f, "Y", c.Y, "fdtd");
    c.dx = get_number(f, "dx", c.dx, "fdtd");
    c.dt = get_number(f, "dt", c.dt, "fdtd");
    c.T = get_number(f, "T", c.T, "fdtd");
    c.full_plane = get_bool(f, "full_plane", c.full_plane, "fdtd");
    c.record_energy = get_bool(f, "record_energy", c.record_energy, "fdtd");

    const json& ini = section(root, "initial");
    check_keys(ini,
               {"type", "cx", "cy", "radius", "mode", "x_inner", "x_outer", "y_inner", "y_outer"},
               "initial");
    InitialData& d = s.initial;
    const std::string type = get_string(ini, "type", "bump", "initial");
    if (type == "bump") {
        d.kind = InitialData::Kind::Bump;
        d.cx = get_number(ini, "cx", d.cx, "initial");
        d.cy = get_number(ini, "cy", d.cy, "initial");
        d.radius = get_number(ini, "radius", d.radius, "initial");
        if (!(d.radius > 0.0)) {
            throw ConfigError("initial.radius: must be positive");
        }
    } else if (type == "zero") {
        d.kind = InitialData::Kind::Zero;
    } else if (type == "windowed_mode") {
        d.kind = InitialData::Kind::WindowedMode;
        if (!ini.contains("mode")) {
            throw ConfigError("initial.mode: required for a windowed mode");
        }
        d.mode = parse_mode(ini.at("mode"), "initial.mode");
        d.x_inner = get_number(ini, "x_inner", d.x_inner, "initial");
        d.x_outer = get_number(ini, "x_outer", d.x_outer, "initial");
        d.y_inner = get_number(ini, "y_inner", d.y_inner, "initial");
        d.y_outer = get_number(ini, "y_outer", d.y_outer, "initial");
        if (!(0.0 <= d.x_inner && d.x_inner < d.x_outer && 0.0 <= d.y_inner &&
              d.y_inner < d.y_outer)) {
            throw ConfigError("initial: windows need 0 <= inner < outer");
        }
    } else {
        throw ConfigError("initial.type: expected \"bump\", \"zero\" or \"windowed_mode\"");
    }
    c.initial = d.function();

    const auto pit = root.find("probes");
    if (pit == root.end()) {
        s.probes = {Probe{}};
    } else {
        if (!pit->is_array()) {
            throw ConfigError("probes: expected an array");
        }
        for (std::size_t i = 0; i < pit->size(); ++i) {
            const std::string w = "probes[" + std::to_string(i) + "]";
            const json& p = (*pit)[i];
            check_keys(p, {"x", "y", "t_end"}, w);
            Probe pr;
            pr.x = get_number(p, "x", pr.x, w);
            pr.y = get_number(p, "y", pr.y, w);
            pr.t_end = get_number(p, "t_end", pr.t_end, w);
            s.probes.push_back(pr);
        }
    }

    const json& tr = section(root, "trace");
    check_keys(tr, {"x_lo", "x_hi", "t_lo", "t_hi", "x_stride", "t_stride"}, "trace");
    TraceRequest r;
    r.x_lo = get_number(tr, "x_lo", r.x_lo, "trace");
    r.x_hi = get_number(tr, "x_hi", r.x_hi, "trace");
    r.t_lo = get_number(tr, "t_lo", r.t_lo, "trace");
    r.t_hi = get_number(tr, "t_hi", r.t_hi, "trace");
    r.x_stride = get_int(tr, "x_stride", r.x_stride, "trace");
    r.t_stride = get_int(tr, "t_stride", r.t_stride, "trace");
    s.traces = {r};
    return s;
}

json to_json(const FdtdSetup& s) {
    const FdtdConfig& c = s.config;
    json out;
    out["fdtd"] = {{"X", c.X},          {"Y", c.Y},
                   {"dx", c.dx},        {"dt", c.dt},
                   {"T", c.T},          {"full_plane", c.full_plane},
                   {"record_energy", c.record_energy}};
    const InitialData& d = s.initial;
    switch (d.kind) {
        case InitialData::Kind::Bump:
            out["initial"] = {{"type", "bump"}, {"cx", d.cx}, {"cy", d.cy}, {"radius", d.radius}};
            break;
        case InitialData::Kind::Zero:
            out["initial"] = {{"type", "zero"}};
            break;
        case InitialData::Kind::WindowedMode:
            out["initial"] = {{"type", "windowed_mode"}, {"mode", to_json(d.mode)},
                              {"x_inner", d.x_inner},    {"x_outer", d.x_outer},
                              {"y_inner", d.y_inner},    {"y_outer", d.y_outer}};
            break;
    }
    out["probes"] = json::array();
    for (const auto& p : s.probes) {
        out["probes"].push_back({{"x", p.x}, {"y", p.y}, {"t_end", p.t_end}});
    }
    const TraceRequest& r = s.traces.front();
    out["trace"] = {{"x_lo", r.x_lo},         {"x_hi", r.x_hi},
                    {"t_lo", r.t_lo},         {"t_hi", r.t_hi},
                    {"x_stride", r.x_stride}, {"t_stride", r.t_stride}};
    return out;
}

std::string compact(const json& j) { return j.dump(); }

}  // namespace wavereg::cli
