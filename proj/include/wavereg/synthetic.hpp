#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace wavereg {

enum class Phase { Cos, Sin };

/// u(x, y, t) = amplitude * sin(l y) * X(k x) * T(omega t), omega = sqrt(k^2 + l^2).
/// Solves the wave equation on y >= 0 and vanishes on y = 0.
struct Mode {
    double amplitude = 1.0;
    double k = 0.0;
    double l = 1.0;
    Phase x_phase = Phase::Cos;
    Phase t_phase = Phase::Cos;

    double omega() const;
    void validate() const;
};

double mode_interior_value(const Mode& mode, double x, double y, double t);

struct ModeTerm {
    double weight = 1.0;
    Mode mode;
};

double superposition_interior_value(std::span<const ModeTerm> terms, double x, double y, double t);

enum class Interpolation { Bilinear, Lagrange6 };

/// Uniform grid of boundary-derivative samples, endpoints included.
/// values[j * nx + i] holds v(x_i, t_j).
struct SampledTrace {
    double x_min = 0.0;
    double x_max = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    int nx = 0;
    int nt = 0;
    std::vector<double> values;
    std::map<std::string, std::string> metadata;

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double dt() const { return (t_max - t_min) / (nt - 1); }
    double x(int i) const { return x_min + i * dx(); }
    double t(int j) const { return t_min + j * dt(); }
    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }

    /// Throws std::invalid_argument on inconsistent metadata or sizes.
    void validate() const;
    bool covers(double x_lo, double x_hi, double t_lo, double t_hi) const;
    /// Throws CoverageError for points off the grid.
    double interpolate(double x, double t, Interpolation method) const;
};

/// Boundary data v(x, t) = du/dy(x, 0, t), either a closure or a sampled grid.
class BoundaryTrace {
public:
    using Function = std::function<double(double, double)>;

    static BoundaryTrace analytic(Function f);
    static BoundaryTrace sampled(SampledTrace grid,
                                 Interpolation method = Interpolation::Lagrange6);
    static BoundaryTrace zero();

    bool is_sampled() const;
    const SampledTrace& grid() const;  // throws std::logic_error for analytic traces
    Interpolation interpolation() const { return method_; }
    BoundaryTrace with_interpolation(Interpolation method) const;

    double operator()(double x, double t) const;

private:
    explicit BoundaryTrace(Function f) : data_(std::move(f)) {}
    BoundaryTrace(std::shared_ptr<const SampledTrace> g, Interpolation m)
        : data_(std::move(g)), method_(m) {}

    std::variant<Function, std::shared_ptr<const SampledTrace>> data_;
    Interpolation method_ = Interpolation::Lagrange6;
};

/// Exact v(x, t) = amplitude * l * X(k x) * T(omega t).
BoundaryTrace mode_boundary_trace(const Mode& mode);

struct WeightedTrace {
    double weight = 1.0;
    BoundaryTrace trace;
};

/// Pointwise weighted sum of analytic traces; empty input gives the zero trace.
BoundaryTrace superpose(std::vector<WeightedTrace> traces);

/// Samples an analytic trace on nx x nt uniform nodes including the endpoints.
SampledTrace sample_trace(const BoundaryTrace& trace, double x_lo, double x_hi, double t_lo,
                          double t_hi, int nx, int nt);

}  // namespace wavereg
