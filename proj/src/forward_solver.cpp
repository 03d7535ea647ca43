#include "wavereg/forward_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "wavereg/error.hpp"
#include "wavereg/parallel.hpp"
#include "wavereg/trace_io.hpp"

namespace wavereg {

namespace {

int integral_ratio(double num, double den, const char* what) {
    const double r = num / den;
    const double n = std::round(r);
    if (std::abs(r - n) > 1e-6 || n < 1) {
        throw std::invalid_argument(std::string("FdtdConfig: ") + what +
                                    " must be a positive integer multiple of the step");
    }
    return static_cast<int>(n);
}

struct Grid {
    int nx = 0;
    int ny = 0;
    int steps = 0;
    double y_origin = 0.0;
    int row_y0 = 0;  // row index of y = 0

    double x(int i, double X, double dx) const { return -X + i * dx; }
    double y(int j, double dx) const { return y_origin + j * dx; }
};

Grid make_grid(const FdtdConfig& c) {
    Grid g;
    g.nx = 2 * integral_ratio(c.X, c.dx, "X") + 1;
    const int half = integral_ratio(c.Y, c.dx, "Y");
    g.ny = c.full_plane ? 2 * half + 1 : half + 1;
    g.y_origin = c.full_plane ? -c.Y : 0.0;
    g.row_y0 = c.full_plane ? half : 0;
    g.steps = integral_ratio(c.T, c.dt, "T");
    return g;
}

struct SupportBox {
    bool empty = true;
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;  // y measured in y >= 0
};

SupportBox find_support(const FdtdConfig& c, const Grid& g) {
    SupportBox box;
    const int half_rows = c.full_plane ? g.row_y0 : 0;
    for (int j = half_rows; j < g.ny; ++j) {
        const double y = g.y(j, c.dx);
        for (int i = 0; i < g.nx; ++i) {
            if (c.initial(g.x(i, c.X, c.dx), y) != 0.0) {
                const double x = g.x(i, c.X, c.dx);
                if (box.empty) {
                    box = {false, x, x, y, y};
                } else {
                    box.x_lo = std::min(box.x_lo, x);
                    box.x_hi = std::max(box.x_hi, x);
                    box.y_lo = std::min(box.y_lo, y);
                    box.y_hi = std::max(box.y_hi, y);
                }
            }
        }
    }
    return box;
}

double margin_from_box(const FdtdConfig& c, const SupportBox& box, std::span<const Probe> probes,
                       std::span<const TraceRequest> traces) {
    if (box.empty) {
        return std::numeric_limits<double>::infinity();
    }
    const double to_left = box.x_lo + c.X;
    const double to_right = c.X - box.x_hi;
    const double to_top = c.Y - box.y_hi;
    double margin = std::numeric_limits<double>::infinity();
    auto observe = [&](double x, double y, double horizon) {
        margin = std::min(margin, to_left + (x + c.X) - horizon);
        margin = std::min(margin, to_right + (c.X - x) - horizon);
        margin = std::min(margin, to_top + (c.Y - y) - horizon);
        if (c.full_plane) {
            margin = std::min(margin, to_top + (c.Y + y) - horizon);
        }
    };
    for (const auto& tr : traces) {
        const double horizon = std::max(std::abs(tr.t_lo), std::abs(tr.t_hi));
        observe(tr.x_lo, 0.0, horizon);
        observe(tr.x_hi, 0.0, horizon);
    }
    for (const auto& p : probes) {
        observe(p.x, p.y, p.t_end < 0.0 ? c.T : std::min(p.t_end, c.T));
    }
    return margin;
}

struct TraceLayout {
    int i_first = 0;
    int count_x = 0;
    int m_first = 0;
    int count_t = 0;
    int x_stride = 1;
    int t_stride = 1;
};

TraceLayout layout_trace(const TraceRequest& r, const FdtdConfig& c, const Grid& g) {
    if (r.x_stride < 1 || r.t_stride < 1) {
        throw std::invalid_argument("TraceRequest: strides must be >= 1");
    }
    TraceLayout L;
    L.x_stride = r.x_stride;
    L.t_stride = r.t_stride;
    const int i_lo = static_cast<int>(std::ceil((r.x_lo + c.X) / c.dx - 1e-6));
    const int i_hi = static_cast<int>(std::floor((r.x_hi + c.X) / c.dx + 1e-6));
    const int m_lo = static_cast<int>(std::ceil(r.t_lo / c.dt - 1e-6));
    const int m_hi = static_cast<int>(std::floor(r.t_hi / c.dt + 1e-6));
    if (i_lo < 0 || i_hi > g.nx - 1 || i_hi <= i_lo) {
        throw std::invalid_argument("TraceRequest: x range must lie inside [-X, X]");
    }
    if (std::abs(m_lo) > g.steps || std::abs(m_hi) > g.steps || m_hi <= m_lo) {
        throw std::invalid_argument("TraceRequest: t range must lie inside [-T, T]");
    }
    L.i_first = i_lo;
    L.count_x = (i_hi - i_lo) / r.x_stride + 1;
    L.m_first = m_lo;
    L.count_t = (m_hi - m_lo) / r.t_stride + 1;
    if (L.count_x < 2 || L.count_t < 2) {
        throw std::invalid_argument("TraceRequest: needs at least two nodes per axis");
    }
    return L;
}

double bilinear(const std::vector<double>& u, const Grid& g, const FdtdConfig& c, double x,
                double y) {
    const double px = (x + c.X) / c.dx;
    const double py = (y - g.y_origin) / c.dx;
    const int i = std::clamp(static_cast<int>(std::floor(px)), 0, g.nx - 2);
    const int j = std::clamp(static_cast<int>(std::floor(py)), 0, g.ny - 2);
    const double a = px - i;
    const double b = py - j;
    auto at = [&](int ii, int jj) { return u[static_cast<std::size_t>(jj) * g.nx + ii]; };
    return (1 - a) * (1 - b) * at(i, j) + a * (1 - b) * at(i + 1, j) + (1 - a) * b * at(i, j + 1) +
           a * b * at(i + 1, j + 1);
}

}  // namespace

void FdtdConfig::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(X) || !positive(Y) || !positive(dx) || !positive(dt) || !positive(T)) {
        throw std::invalid_argument("FdtdConfig: X, Y, dx, dt and T must be positive");
    }
    if (!initial) {
        throw std::invalid_argument("FdtdConfig: initial data is required");
    }
    if (dt > dx / std::sqrt(2.0) * (1.0 + 1e-12)) {
        throw SolverConstraintError("FdtdConfig: CFL violated, dt = " + std::to_string(dt) +
                                    " > dx / sqrt(2) = " + std::to_string(dx / std::sqrt(2.0)));
    }
    make_grid(*this);
}

double bump_profile(double s) {
    const double q = 1.0 - s * s;
    return q > 0.0 ? std::exp(1.0 - 1.0 / q) : 0.0;
}

std::function<double(double, double)> bump_initial_data(double cx, double cy, double radius) {
    return [=](double x, double y) {
        const double r = std::hypot(x - cx, y - cy);
        return bump_profile(r / radius) * y * std::exp(-y);
    };
}

double plateau_window(double s, double inner, double outer) {
    const double a = std::abs(s);
    if (a <= inner) {
        return 1.0;
    }
    if (a >= outer) {
        return 0.0;
    }
    const double u = (a - inner) / (outer - inner);
    auto f = [](double v) { return v > 0.0 ? std::exp(-1.0 / v) : 0.0; };
    return f(1.0 - u) / (f(1.0 - u) + f(u));
}

std::function<double(double, double)> windowed_mode_initial_data(const Mode& mode, double x_inner,
                                                                  double x_outer, double y_inner,
                                                                  double y_outer) {
    mode.validate();
    return [=](double x, double y) {
        return mode_interior_value(mode, x, y, 0.0) * plateau_window(x, x_inner, x_outer) *
               plateau_window(y, y_inner, y_outer);
    };
}

FdtdConfig default_bump_config() {
    FdtdConfig c;
    c.initial = bump_initial_data(0.0, 1.2, 0.8);
    return c;
}

double support_margin(const FdtdConfig& config, std::span<const Probe> probes,
                      std::span<const TraceRequest> traces) {
    config.validate();
    const Grid g = make_grid(config);
    return margin_from_box(config, find_support(config, g), probes, traces);
}

FdtdResult fdtd_run(const FdtdConfig& config, std::span<const Probe> probes,
                    std::span<const TraceRequest> traces) {
    config.validate();
    const Grid g = make_grid(config);
    std::vector<TraceLayout> layouts;
    for (const auto& r : traces) {
        layouts.push_back(layout_trace(r, config, g));
    }
    for (const auto& p : probes) {
        if (std::abs(p.x) > config.X || p.y < 0.0 || p.y > config.Y) {
            throw std::invalid_argument("fdtd_run: probe outside the domain");
        }
    }
    const SupportBox box = find_support(config, g);
    const double margin = margin_from_box(config, box, probes, traces);
    if (margin < 2.0 * config.dx) {
        throw SolverConstraintError("fdtd_run: support overflow, artificial boundaries reach "
                                    "the observed region (margin " +
                                    std::to_string(margin) + " < 2 dx)");
    }

    const std::size_t cells = static_cast<std::size_t>(g.nx) * g.ny;
    std::vector<double> prev(cells, 0.0), cur(cells, 0.0), next(cells, 0.0);
    double peak = 0.0;
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            const double v = config.initial(g.x(i, config.X, config.dx), g.y(j, config.dx));
            prev[static_cast<std::size_t>(j) * g.nx + i] = v;
            peak = std::max(peak, std::abs(v));
        }
    }
    if (!config.full_plane) {
        double boundary = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            boundary = std::max(boundary, std::abs(config.initial(g.x(i, config.X, config.dx), 0.0)));
        }
        if (boundary > 1e-12 * std::max(peak, 1.0)) {
            throw SolverConstraintError("fdtd_run: initial data does not vanish on y = 0");
        }
    }

    const double lambda = (config.dt / config.dx) * (config.dt / config.dx);
    const int nx = g.nx;
    // next = a * cur - b * old + lambda_scale * L(cur) on interior cells; edges stay 0.
    auto step = [&](const std::vector<double>& u, const std::vector<double>& old,
                    std::vector<double>& out, double a, double b, double lambda_scale) {
        parallel::for_each_index(static_cast<std::size_t>(g.ny - 2), [&](std::size_t r) {
            const std::size_t j = r + 1;
            if (!config.full_plane && static_cast<int>(j) == g.row_y0) {
                return;
            }
            const double* up = u.data() + (j + 1) * nx;
            const double* uc = u.data() + j * nx;
            const double* dn = u.data() + (j - 1) * nx;
            const double* uo = old.data() + j * nx;
            double* o = out.data() + j * nx;
            for (int i = 1; i < nx - 1; ++i) {
                const double lap = uc[i + 1] + uc[i - 1] + up[i] + dn[i] - 4.0 * uc[i];
                o[i] = a * uc[i] - b * uo[i] + lambda_scale * lap;
            }
        });
    };

    // Which steps feed a trace, and the v-row at each such step.
    std::vector<char> need(static_cast<std::size_t>(g.steps) + 1, 0);
    for (const auto& L : layouts) {
        for (int q = 0; q < L.count_t; ++q) {
            need[static_cast<std::size_t>(std::abs(L.m_first + q * L.t_stride))] = 1;
        }
    }
    std::map<int, std::vector<double>> vrows;
    const int r1 = g.row_y0 + 1;
    const int r2 = g.row_y0 + 2;
    auto record_trace = [&](int n, const std::vector<double>& u) {
        if (!need[static_cast<std::size_t>(n)]) {
            return;
        }
        std::vector<double> row(static_cast<std::size_t>(nx));
        for (int i = 0; i < nx; ++i) {
            row[i] = (4.0 * u[static_cast<std::size_t>(r1) * nx + i] -
                      u[static_cast<std::size_t>(r2) * nx + i]) /
                     (2.0 * config.dx);
        }
        vrows.emplace(n, std::move(row));
    };

    FdtdResult result;
    result.courant = config.dt / config.dx;
    result.support_margin = margin;
    result.probes.resize(probes.size());
    for (std::size_t p = 0; p < probes.size(); ++p) {
        result.probes[p].probe = probes[p];
    }
    auto record_probes = [&](int n, const std::vector<double>& u) {
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const double end = probes[p].t_end < 0.0 ? config.T : probes[p].t_end;
            if (n * config.dt > end + 1e-9 * config.dt) {
                continue;
            }
            result.probes[p].times.push_back(n * config.dt);
            result.probes[p].values.push_back(bilinear(u, g, config, probes[p].x, probes[p].y));
        }
    };
    auto energy = [&](const std::vector<double>& newer, const std::vector<double>& older) {
        double kinetic = 0.0;
        double potential = 0.0;
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const std::size_t a = static_cast<std::size_t>(j) * nx + i;
                const double du = (newer[a] - older[a]) / config.dt;
                kinetic += du * du;
                if (i + 1 < nx) {
                    potential += (newer[a + 1] - newer[a]) * (older[a + 1] - older[a]);
                }
                if (j + 1 < g.ny) {
                    potential += (newer[a + nx] - newer[a]) * (older[a + nx] - older[a]);
                }
            }
        }
        const double area = config.dx * config.dx;
        return 0.5 * area * (kinetic + potential / area);
    };

    // prev holds u^0. First step from rest: u^1 = u^0 + (lambda / 2) L u^0.
    record_trace(0, prev);
    record_probes(0, prev);
    step(prev, prev, cur, 1.0, 0.0, 0.5 * lambda);
    if (config.record_energy) {
        result.energy.push_back(energy(cur, prev));
    }
    record_trace(1, cur);
    record_probes(1, cur);
    for (int n = 1; n < g.steps; ++n) {
        step(cur, prev, next, 2.0, 1.0, lambda);
        if (config.record_energy) {
            result.energy.push_back(energy(next, cur));
        }
        std::swap(prev, cur);
        std::swap(cur, next);
        record_trace(n + 1, cur);
        record_probes(n + 1, cur);
    }

    for (std::size_t r = 0; r < layouts.size(); ++r) {
        const auto& L = layouts[r];
        SampledTrace tr;
        tr.nx = L.count_x;
        tr.nt = L.count_t;
        tr.x_min = g.x(L.i_first, config.X, config.dx);
        tr.x_max = tr.x_min + (L.count_x - 1) * L.x_stride * config.dx;
        tr.t_min = L.m_first * config.dt;
        tr.t_max = tr.t_min + (L.count_t - 1) * L.t_stride * config.dt;
        tr.values.resize(static_cast<std::size_t>(tr.nx) * tr.nt);
        for (int q = 0; q < L.count_t; ++q) {
            const auto& row = vrows.at(std::abs(L.m_first + q * L.t_stride));
            for (int i = 0; i < L.count_x; ++i) {
                tr.values[static_cast<std::size_t>(q) * tr.nx + i] =
                    row[static_cast<std::size_t>(L.i_first + i * L.x_stride)];
            }
        }
        tr.metadata["fdtd_dx"] = format_double(config.dx);
        tr.metadata["fdtd_dt"] = format_double(config.dt);
        tr.metadata["fdtd_T"] = format_double(config.T);
        tr.metadata["courant"] = format_double(result.courant);
        tr.metadata["support_margin"] = format_double(margin);
        if (!result.probes.empty()) {
            const auto& p0 = result.probes.front();
            tr.metadata["probe_x"] = format_double(p0.probe.x);
            tr.metadata["probe_y"] = format_double(p0.probe.y);
            tr.metadata["probe_t"] = format_double(0.0);
            tr.metadata["probe_u"] = format_double(p0.values.front());
        }
        result.traces.push_back(std::move(tr));
    }
    return result;
}

}  // namespace wavereg
