#include "wavereg/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wavereg/error.hpp"

namespace wavereg {

namespace {

double phase(Phase p, double arg) { return p == Phase::Cos ? std::cos(arg) : std::sin(arg); }

constexpr int kStencil = 6;

// Local Lagrange weights on `m` consecutive nodes starting at `first`, for a
// query at fractional grid position pos.
int lagrange_weights(double pos, int n, int m, std::array<double, kStencil>& w) {
    int first = static_cast<int>(std::floor(pos)) - (m / 2 - 1);
    first = std::clamp(first, 0, n - m);
    for (int j = 0; j < m; ++j) {
        double wj = 1.0;
        for (int q = 0; q < m; ++q) {
            if (q != j) {
                wj *= (pos - (first + q)) / static_cast<double>(j - q);
            }
        }
        w[j] = wj;
    }
    return first;
}

}  // namespace

double Mode::omega() const { return std::sqrt(k * k + l * l); }

void Mode::validate() const {
    if (!std::isfinite(amplitude) || !std::isfinite(k) || !std::isfinite(l)) {
        throw std::invalid_argument("Mode: amplitude, k and l must be finite");
    }
    if (!(l > 0.0)) {
        throw std::invalid_argument("Mode: vertical frequency l must be > 0");
    }
}

double mode_interior_value(const Mode& mode, double x, double y, double t) {
    return mode.amplitude * std::sin(mode.l * y) * phase(mode.x_phase, mode.k * x) *
           phase(mode.t_phase, mode.omega() * t);
}

double superposition_interior_value(std::span<const ModeTerm> terms, double x, double y,
                                    double t) {
    double sum = 0.0;
    for (const auto& term : terms) {
        sum += term.weight * mode_interior_value(term.mode, x, y, t);
    }
    return sum;
}

void SampledTrace::validate() const {
    if (nx < 2 || nt < 2) {
        throw std::invalid_argument("SampledTrace: nx and nt must be >= 2");
    }
    if (!(x_max > x_min) || !(t_max > t_min)) {
        throw std::invalid_argument("SampledTrace: degenerate range");
    }
    if (values.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(nt)) {
        throw std::invalid_argument("SampledTrace: expected " +
                                    std::to_string(static_cast<long long>(nx) * nt) +
                                    " values, got " + std::to_string(values.size()));
    }
}

bool SampledTrace::covers(double x_lo, double x_hi, double t_lo, double t_hi) const {
    const double sx = 1e-9 * dx();
    const double st = 1e-9 * dt();
    return x_lo >= x_min - sx && x_hi <= x_max + sx && t_lo >= t_min - st && t_hi <= t_max + st;
}

double SampledTrace::interpolate(double xq, double tq, Interpolation method) const {
    if (!covers(xq, xq, tq, tq)) {
        throw CoverageError("SampledTrace: point (" + std::to_string(xq) + ", " +
                            std::to_string(tq) + ") lies outside the grid");
    }
    const double px = std::clamp((xq - x_min) / dx(), 0.0, static_cast<double>(nx - 1));
    const double pt = std::clamp((tq - t_min) / dt(), 0.0, static_cast<double>(nt - 1));

    if (method == Interpolation::Bilinear) {
        const int i = std::min(static_cast<int>(px), nx - 2);
        const int j = std::min(static_cast<int>(pt), nt - 2);
        const double a = px - i;
        const double b = pt - j;
        return (1 - a) * (1 - b) * at(i, j) + a * (1 - b) * at(i + 1, j) +
               (1 - a) * b * at(i, j + 1) + a * b * at(i + 1, j + 1);
    }

    const int mx = std::min(kStencil, nx);
    const int mt = std::min(kStencil, nt);
    std::array<double, kStencil> wx{};
    std::array<double, kStencil> wt{};
    const int ix = lagrange_weights(px, nx, mx, wx);
    const int it = lagrange_weights(pt, nt, mt, wt);
    double sum = 0.0;
    for (int b = 0; b < mt; ++b) {
        double row = 0.0;
        const double* base = values.data() + static_cast<std::size_t>(it + b) * nx + ix;
        for (int a = 0; a < mx; ++a) {
            row += wx[a] * base[a];
        }
        sum += wt[b] * row;
    }
    return sum;
}

BoundaryTrace BoundaryTrace::analytic(Function f) {
    if (!f) {
        throw std::invalid_argument("BoundaryTrace::analytic: empty function");
    }
    return BoundaryTrace(std::move(f));
}

BoundaryTrace BoundaryTrace::sampled(SampledTrace grid, Interpolation method) {
    grid.validate();
    return BoundaryTrace(std::make_shared<const SampledTrace>(std::move(grid)), method);
}

BoundaryTrace BoundaryTrace::zero() {
    return BoundaryTrace([](double, double) { return 0.0; });
}

bool BoundaryTrace::is_sampled() const {
    return std::holds_alternative<std::shared_ptr<const SampledTrace>>(data_);
}

const SampledTrace& BoundaryTrace::grid() const {
    if (!is_sampled()) {
        throw std::logic_error("BoundaryTrace::grid: trace is analytic");
    }
    return *std::get<std::shared_ptr<const SampledTrace>>(data_);
}

BoundaryTrace BoundaryTrace::with_interpolation(Interpolation method) const {
    BoundaryTrace copy = *this;
    copy.method_ = method;
    return copy;
}

double BoundaryTrace::operator()(double x, double t) const {
    if (const auto* f = std::get_if<Function>(&data_)) {
        return (*f)(x, t);
    }
    return std::get<std::shared_ptr<const SampledTrace>>(data_)->interpolate(x, t, method_);
}

BoundaryTrace mode_boundary_trace(const Mode& mode) {
    mode.validate();
    const double scale = mode.amplitude * mode.l;
    const double omega = mode.omega();
    return BoundaryTrace::analytic([mode, scale, omega](double x, double t) {
        return scale * phase(mode.x_phase, mode.k * x) * phase(mode.t_phase, omega * t);
    });
}

BoundaryTrace superpose(std::vector<WeightedTrace> traces) {
    if (traces.empty()) {
        return BoundaryTrace::zero();
    }
    for (const auto& wt : traces) {
        if (wt.trace.is_sampled()) {
            throw std::invalid_argument("superpose: all traces must be analytic");
        }
    }
    return BoundaryTrace::analytic([traces = std::move(traces)](double x, double t) {
        double sum = 0.0;
        for (const auto& wt : traces) {
            sum += wt.weight * wt.trace(x, t);
        }
        return sum;
    });
}

SampledTrace sample_trace(const BoundaryTrace& trace, double x_lo, double x_hi, double t_lo,
                          double t_hi, int nx, int nt) {
    if (nx < 2 || nt < 2) {
        throw std::invalid_argument("sample_trace: nx and nt must be >= 2");
    }
    if (!(x_hi > x_lo) || !(t_hi > t_lo)) {
        throw std::invalid_argument("sample_trace: degenerate range");
    }
    SampledTrace out;
    out.x_min = x_lo;
    out.x_max = x_hi;
    out.t_min = t_lo;
    out.t_max = t_hi;
    out.nx = nx;
    out.nt = nt;
    out.values.resize(static_cast<std::size_t>(nx) * nt);
    for (int j = 0; j < nt; ++j) {
        for (int i = 0; i < nx; ++i) {
            out.values[static_cast<std::size_t>(j) * nx + i] = trace(out.x(i), out.t(j));
        }
    }
    return out;
}

}  // namespace wavereg
