#include "wavereg/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "wavereg/error.hpp"
#include "wavereg/kernel.hpp"
#include "wavereg/parallel.hpp"
#include "wavereg/trace_io.hpp"

namespace wavereg {

namespace {

struct Panel {
    double a;
    double b;
};

using SliceFn = std::function<std::vector<Panel>(double t)>;

struct NodeSum {
    double value = 0.0;
    double magnitude = 0.0;
    double max_exponent = -std::numeric_limits<double>::infinity();
};

NodeSum reduce(const std::vector<NodeSum>& rows) {
    NodeSum total;
    for (const auto& r : rows) {
        total.value += r.value;
        total.magnitude += r.magnitude;
        total.max_exponent = std::max(total.max_exponent, r.max_exponent);
    }
    return total;
}

// Adds the Gauss rule on [a, b] of K(xs, ts) v(x0 + xs, t) to row, scaled by wt.
void inner_panel(const BoundaryTrace& trace, const KernelParams& params, const GaussRule& rule,
                 double a, double b, double x0, double ts, double t, double wt,
                 const QuadratureSpec& quad, NodeSum& row) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double xs = mid + half * rule.nodes[i];
        const double w = wt * half * rule.weights[i];
        const auto k = kernel_closed_form_detail(xs, ts, params, quad);
        const double f = k.value * trace(x0 + xs, t);
        row.value += w * f;
        row.magnitude += std::abs(w * f);
        row.max_exponent = std::max(row.max_exponent, k.max_exponent);
    }
}

// Analytic traces: outer theta in [-pi/2, pi/2] with t = t0 + y0 sin(theta),
// which absorbs the square-root behaviour of the slice width at |t - t0| = y0.
NodeSum integrate_smooth(const BoundaryTrace& trace, const KernelParams& params, double x0,
                         double t0, const SliceFn& slices, int nt, int nx,
                         const QuadratureSpec& quad) {
    const auto outer = gauss_legendre(nt);
    const auto inner = gauss_legendre(nx);
    const double half_pi = 0.5 * std::numbers::pi;
    std::vector<NodeSum> rows(outer->size());
    parallel::for_each_index(outer->size(), [&](std::size_t j) {
        const double th = half_pi * outer->nodes[j];
        const double ts = params.y0 * std::sin(th);
        const double wt = half_pi * outer->weights[j] * params.y0 * std::cos(th);
        NodeSum row;
        for (const Panel& p : slices(ts)) {
            inner_panel(trace, params, *inner, p.a, p.b, x0, ts, t0 + ts, wt, quad, row);
        }
        rows[j] = row;
    });
    return reduce(rows);
}

// Splits [a, b] at the lines origin + m * step.
std::vector<Panel> split_at_lines(double a, double b, double origin, double step) {
    std::vector<Panel> out;
    const double tiny = 1e-12 * step;
    double lo = a;
    double m = std::floor((a - origin) / step) + 1.0;
    while (true) {
        const double line = origin + m * step;
        if (line >= b - tiny) {
            break;
        }
        if (line > lo + tiny) {
            out.push_back({lo, line});
            lo = line;
        }
        m += 1.0;
    }
    out.push_back({lo, b});
    return out;
}

// Sampled traces: the interpolant is one polynomial per grid cell but only
// continuous across cell edges, so every panel is a grid cell (clipped to
// the region) with an order-p Gauss rule in each direction. The t panels are
// also split at t_breaks (times where a slice edge crosses an x grid line),
// and the two panels ending at |t - t0| = y0 use t = tip -+ len u^2 to absorb
// the square-root behaviour of the kernel there.
NodeSum integrate_cells(const BoundaryTrace& trace, const KernelParams& params, double x0,
                        double t0, const SliceFn& slices, const std::vector<double>& t_breaks,
                        int p, const QuadratureSpec& quad) {
    const auto& g = trace.grid();
    const auto rule = gauss_legendre(p);
    const double lo = t0 - params.y0;
    const double hi = t0 + params.y0;
    std::vector<double> cuts;
    for (const Panel& c : split_at_lines(lo, t0, g.t_min, g.dt())) cuts.push_back(c.a);
    for (const Panel& c : split_at_lines(t0, hi, g.t_min, g.dt())) cuts.push_back(c.a);
    const double tiny = 1e-12 * params.y0;
    for (double b : t_breaks) {
        if (b > lo + tiny && b < hi - tiny) cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(hi);
    std::vector<Panel> t_cells;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] > tiny) t_cells.push_back({cuts[i], cuts[i + 1]});
    }

    std::vector<NodeSum> rows(t_cells.size() * rule->size());
    parallel::for_each_index(rows.size(), [&](std::size_t r) {
        const std::size_t ci = r / rule->size();
        const Panel& cell = t_cells[ci];
        const double u = 0.5 * (1.0 + rule->nodes[r % rule->size()]);
        const double wu = 0.5 * rule->weights[r % rule->size()];
        const double len = cell.b - cell.a;
        double t;
        double wt;
        if (ci == 0) {
            t = cell.a + len * u * u;
            wt = wu * 2.0 * len * u;
        } else if (ci + 1 == t_cells.size()) {
            t = cell.b - len * u * u;
            wt = wu * 2.0 * len * u;
        } else {
            t = cell.a + len * u;
            wt = wu * len;
        }
        const double ts = std::clamp(t - t0, -params.y0, params.y0);
        NodeSum row;
        for (const Panel& s : slices(ts)) {
            for (const Panel& c : split_at_lines(x0 + s.a, x0 + s.b, g.x_min, g.dx())) {
                inner_panel(trace, params, *rule, c.a - x0, c.b - x0, x0, ts, t, wt, quad, row);
            }
        }
        rows[r] = row;
    });
    return reduce(rows);
}

// Times t at which the local slice edge x0 +- w(t) meets an x grid line.
// Inverts w = epsilon + D(z) with z = (d^2 + d sqrt(d^2 + c^2)) / c, d = w - epsilon.
std::vector<double> edge_crossings(const SampledTrace& g, const Aperture& ap) {
    std::vector<double> out;
    for (int i = 0; i < g.nx; ++i) {
        const double d = std::abs(g.x(i) - ap.x0) - ap.epsilon;
        if (!(d > 0.0)) continue;
        const double z = (d * d + d * std::sqrt(d * d + ap.c * ap.c)) / ap.c;
        if (z >= ap.y0) continue;
        const double s = std::sqrt(ap.y0 * ap.y0 - z * z);
        out.push_back(ap.t0 - s);
        out.push_back(ap.t0 + s);
    }
    return out;
}

Estimate integrate_adaptive(const BoundaryTrace& trace, const KernelParams& params, double x0,
                            double t0, const SliceFn& slices, const std::vector<double>& t_breaks,
                            const QuadratureSpec& quad) {
    Estimate est;
    NodeSum prev;
    for (int level = 0; level <= quad.refinement; ++level) {
        NodeSum cur;
        try {
            cur = trace.is_sampled()
                      ? integrate_cells(trace, params, x0, t0, slices, t_breaks,
                                        quad.cell_nodes << level, quad)
                      : integrate_smooth(trace, params, x0, t0, slices, quad.nodes_t << level,
                                         quad.nodes_x << level, quad);
        } catch (const OverflowError& e) {
            throw OverflowError(std::string(e.what()) + " (h = " + format_double(params.h) + ")",
                                e.exponent());
        }
        est.value = cur.value;
        est.magnitude = cur.magnitude;
        est.max_exponent = cur.max_exponent;
        est.levels = level;
        if (level > 0) {
            const double diff = std::abs(cur.value - prev.value);
            const double floor = 16.0 * std::numeric_limits<double>::epsilon() * cur.magnitude;
            if (diff <= quad.rel_tol * std::abs(cur.value) || diff <= floor) {
                est.converged = true;
                return est;
            }
        }
        prev = cur;
    }
    est.warnings.push_back("2D quadrature did not reach rel_tol after " +
                           std::to_string(quad.refinement) + " doublings");
    return est;
}

void check_resolution(const BoundaryTrace& trace, double h, double c, Estimate& est) {
    if (!trace.is_sampled()) {
        return;
    }
    const auto& g = trace.grid();
    const double scale = std::sqrt(h * c) / 4.0;
    if (g.dx() > scale || g.dt() > scale) {
        est.warnings.push_back("trace spacing exceeds sqrt(h c) / 4 = " + format_double(scale));
    }
}

}  // namespace

double Estimate::roundoff() const {
    if (value == 0.0) {
        return magnitude == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::numeric_limits<double>::epsilon() * magnitude / std::abs(value);
}

Estimate reconstruct_local_detail(const BoundaryTrace& trace, const Aperture& ap, double h,
                                  const QuadratureSpec& quad) {
    ap.validate();
    quad.validate();
    const KernelParams params{ap.y0, ap.c, h};
    params.validate();
    if (trace.is_sampled()) {
        const double w = bounding_halfwidth(ap);
        if (!trace.grid().covers(ap.x0 - w, ap.x0 + w, ap.t0 - ap.y0, ap.t0 + ap.y0)) {
            throw CoverageError("reconstruct_local: trace grid does not cover |x - x0| <= " +
                                format_double(w) + ", |t - t0| <= " + format_double(ap.y0));
        }
    }
    const SliceFn slices = [&](double ts) {
        const double w = aperture_d(cone_height(ap.y0, ts), ap.c) + ap.epsilon;
        return std::vector<Panel>{{-w, w}};
    };
    const std::vector<double> breaks =
        trace.is_sampled() ? edge_crossings(trace.grid(), ap) : std::vector<double>{};
    Estimate est = integrate_adaptive(trace, params, ap.x0, ap.t0, slices, breaks, quad);
    check_resolution(trace, h, ap.c, est);
    return est;
}

double reconstruct_local(const BoundaryTrace& trace, const Aperture& ap, double h,
                         const QuadratureSpec& quad) {
    return reconstruct_local_detail(trace, ap, h, quad).value;
}

Estimate reconstruct_extended_detail(const BoundaryTrace& trace, double y0, double c, double h,
                                     double x_halfwidth, const QuadratureSpec& quad) {
    quad.validate();
    const KernelParams params{y0, c, h};
    params.validate();
    if (!(x_halfwidth > 0.0) || !std::isfinite(x_halfwidth)) {
        throw DomainError("reconstruct_extended: x_halfwidth must be positive");
    }
    if (trace.is_sampled()) {
        const auto& g = trace.grid();
        if (!g.covers(-x_halfwidth, x_halfwidth, -y0, y0)) {
            throw CoverageError("reconstruct_extended: trace grid does not cover |x| <= " +
                                format_double(x_halfwidth) + ", |t| <= " + format_double(y0));
        }
        for (int j = 0; j < g.nt; ++j) {
            if (std::abs(g.t(j)) > y0) {
                continue;
            }
            for (int i = 0; i < g.nx; ++i) {
                if (std::abs(g.x(i)) > x_halfwidth && std::abs(g.at(i, j)) > 1e-12) {
                    throw SupportError("reconstruct_extended: |v| = " + format_double(g.at(i, j)) +
                                       " at x = " + format_double(g.x(i)) + ", t = " +
                                       format_double(g.t(j)) + " outside |x| <= " +
                                       format_double(x_halfwidth));
                }
            }
        }
    }
    // Split at the aperture core so the peaked part of the kernel gets its own panel.
    const SliceFn slices = [&](double ts) {
        const double w = std::min(aperture_d(cone_height(y0, ts), c) + 0.5, x_halfwidth);
        std::vector<Panel> p;
        if (w < x_halfwidth) {
            p.push_back({-x_halfwidth, -w});
        }
        p.push_back({-w, w});
        if (w < x_halfwidth) {
            p.push_back({w, x_halfwidth});
        }
        return p;
    };
    Estimate est = integrate_adaptive(trace, params, 0.0, 0.0, slices, {}, quad);
    check_resolution(trace, h, c, est);
    return est;
}

double reconstruct_extended(const BoundaryTrace& trace, double y0, double c, double h,
                            double x_halfwidth, const QuadratureSpec& quad) {
    return reconstruct_extended_detail(trace, y0, c, h, x_halfwidth, quad).value;
}

std::string to_string(EntryStatus s) {
    switch (s) {
        case EntryStatus::Ok: return "ok";
        case EntryStatus::NotConverged: return "not_converged";
        case EntryStatus::PrecisionLoss: return "precision_loss";
        case EntryStatus::Overflow: return "overflow";
        case EntryStatus::Failed: return "failed";
    }
    return "failed";
}

const SweepEntry* ConvergenceReport::last_ok() const {
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        if (it->status == EntryStatus::Ok) {
            return &*it;
        }
    }
    return nullptr;
}

ConvergenceReport h_sweep(const BoundaryTrace& trace, const Aperture& ap,
                          const std::vector<double>& h_list, const QuadratureSpec& quad,
                          std::optional<double> target) {
    ap.validate();
    quad.validate();
    for (std::size_t i = 0; i < h_list.size(); ++i) {
        if (!(h_list[i] > 0.0) || !std::isfinite(h_list[i]) ||
            (i > 0 && !(h_list[i] < h_list[i - 1]))) {
            throw std::invalid_argument("h_sweep: h values must be positive and strictly decreasing");
        }
    }
    ConvergenceReport report;
    report.target = target;
    report.aperture = ap;
    report.quadrature = quad;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double h : h_list) {
        SweepEntry e;
        e.h = h;
        e.abs_error = nan;
        e.max_exponent = nan;
        e.estimate = nan;
        try {
            const Estimate est = reconstruct_local_detail(trace, ap, h, quad);
            e.estimate = est.value;
            e.max_exponent = est.max_exponent;
            e.levels = est.levels;
            e.roundoff = est.roundoff();
            if (target) {
                e.abs_error = std::abs(est.value - *target);
            }
            if (e.roundoff > kPrecisionLossThreshold) {
                e.status = EntryStatus::PrecisionLoss;
                e.message = "cancellation leaves relative round-off " + format_double(e.roundoff);
            } else if (!est.converged) {
                e.status = EntryStatus::NotConverged;
            }
            for (const auto& w : est.warnings) {
                e.message += (e.message.empty() ? "" : "; ") + w;
            }
        } catch (const OverflowError& ex) {
            e.status = EntryStatus::Overflow;
            e.max_exponent = ex.exponent();
            e.message = ex.what();
            if (!report.guard_h) {
                report.guard_h = h;
            }
        } catch (const CoverageError&) {
            throw;
        } catch (const std::exception& ex) {
            e.status = EntryStatus::Failed;
            e.message = ex.what();
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

void write_report_csv(std::ostream& out, const ConvergenceReport& report) {
    const auto& ap = report.aperture;
    out << "# y0=" << format_double(ap.y0) << "\n";
    out << "# c=" << format_double(ap.c) << "\n";
    out << "# epsilon=" << format_double(ap.epsilon) << "\n";
    out << "# x0=" << format_double(ap.x0) << "\n";
    out << "# t0=" << format_double(ap.t0) << "\n";
    if (report.target) {
        out << "# target=" << format_double(*report.target) << "\n";
    }
    if (report.guard_h) {
        out << "# guard_h=" << format_double(*report.guard_h) << "\n";
    }
    out << "h,estimate,abs_error,max_exponent,levels\n";
    for (const auto& e : report.entries) {
        out << format_double(e.h) << ',' << format_double(e.estimate) << ','
            << format_double(e.abs_error) << ',' << format_double(e.max_exponent) << ','
            << e.levels << '\n';
    }
}

}  // namespace wavereg
