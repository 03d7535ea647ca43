#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavereg/forward_solver.hpp"
#include "wavereg/geometry.hpp"
#include "wavereg/kernel.hpp"
#include "wavereg/quadrature.hpp"
#include "wavereg/synthetic.hpp"

namespace wavereg::cli {

using json = nlohmann::json;

/// Malformed or out-of-range configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads a JSON document; an empty path yields an empty object.
json load_config(const std::string& path);

/// Throws ConfigError if obj is not an object or holds keys outside `allowed`.
void check_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where);

const json& section(const json& obj, const std::string& key);

double get_number(const json& obj, const std::string& key, double fallback,
                  const std::string& where);
int get_int(const json& obj, const std::string& key, int fallback, const std::string& where);
bool get_bool(const json& obj, const std::string& key, bool fallback, const std::string& where);
std::string get_string(const json& obj, const std::string& key, const std::string& fallback,
                       const std::string& where);
std::vector<double> get_number_list(const json& obj, const std::string& key,
                                    const std::vector<double>& fallback, const std::string& where);
std::optional<double> get_optional_number(const json& obj, const std::string& key,
                                          const std::string& where);

KernelParams parse_kernel(const json& obj, const KernelParams& defaults);
json to_json(const KernelParams& p);

Aperture parse_aperture(const json& obj);
json to_json(const Aperture& a);

QuadratureSpec parse_quadrature(const json& obj);
json to_json(const QuadratureSpec& q);

Mode parse_mode(const json& obj, const std::string& where);
json to_json(const Mode& m);

std::vector<ModeTerm> parse_mode_terms(const json& arr, const std::string& where);

/// Where a reconstruct/spectral trace comes from.
struct TraceSource {
    enum class Kind { Modes, File, Zero } kind = Kind::Modes;
    std::vector<ModeTerm> modes;
    std::string path;
    Interpolation interpolation = Interpolation::Lagrange6;
};

TraceSource parse_trace_source(const json& obj);
json to_json(const TraceSource& s);

/// Initial data of an FDTD run, kept in a serializable form.
struct InitialData {
    enum class Kind { Bump, Zero, WindowedMode } kind = Kind::Bump;
    double cx = 0.0, cy = 1.2, radius = 0.8;
    Mode mode;
    double x_inner = 2.0, x_outer = 4.0, y_inner = 2.0, y_outer = 3.0;

    std::function<double(double, double)> function() const;
};

struct FdtdSetup {
    FdtdConfig config;
    InitialData initial;
    std::vector<Probe> probes;
    std::vector<TraceRequest> traces;
};

FdtdSetup parse_fdtd(const json& root);
json to_json(const FdtdSetup& s);

/// Single-line dump for CSV header comments.
std::string compact(const json& j);

}  // namespace wavereg::cli
