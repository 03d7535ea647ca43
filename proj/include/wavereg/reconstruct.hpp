#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wavereg/geometry.hpp"
#include "wavereg/quadrature.hpp"
#include "wavereg/synthetic.hpp"

namespace wavereg {

/// Full diagnostics of one regularized estimate.
struct Estimate {
    double value = 0.0;
    double magnitude = 0.0;     // integral of |K v|, the cancellation scale
    double max_exponent = 0.0;  // largest kernel exponent met at a node
    int levels = 0;             // node doublings used by the 2D rule
    bool converged = false;
    std::vector<std::string> warnings;

    /// magnitude / |value| times machine epsilon: relative error floor.
    double roundoff() const;
};

/// Integral over the aperture U of K_h(x - x0, y0, t - t0) v(x, t) dx dt.
/// For analytic traces the outer rule runs over t = t0 + y0 sin(theta) and
/// the inner one over the slice |x - x0| <= D + epsilon at that t. For sampled
/// traces both directions use Gauss panels aligned with the data grid cells,
/// so each panel sees a single polynomial piece of the interpolant. All node
/// counts double together until successive levels agree to quad.rel_tol.
/// Throws OverflowError (message carries h), CoverageError for a sampled trace
/// whose grid misses the bounding rectangle.
Estimate reconstruct_local_detail(const BoundaryTrace& trace, const Aperture& ap, double h,
                                  const QuadratureSpec& quad = {});

double reconstruct_local(const BoundaryTrace& trace, const Aperture& ap, double h,
                         const QuadratureSpec& quad = {});

/// Same integral at (0, y0, 0) over the whole strip |x| <= x_halfwidth,
/// |t| <= y0. A sampled trace must vanish (|v| <= 1e-12) at every grid node
/// with |t| <= y0 and |x| > x_halfwidth (SupportError) and its grid must cover
/// the strip (CoverageError).
Estimate reconstruct_extended_detail(const BoundaryTrace& trace, double y0, double c, double h,
                                     double x_halfwidth, const QuadratureSpec& quad = {});

double reconstruct_extended(const BoundaryTrace& trace, double y0, double c, double h,
                            double x_halfwidth, const QuadratureSpec& quad = {});

enum class EntryStatus { Ok, NotConverged, PrecisionLoss, Overflow, Failed };

std::string to_string(EntryStatus s);

struct SweepEntry {
    double h = 0.0;
    double estimate = 0.0;
    double abs_error = 0.0;  // NaN without a target
    double max_exponent = 0.0;
    int levels = 0;
    double roundoff = 0.0;
    EntryStatus status = EntryStatus::Ok;
    std::string message;
};

struct ConvergenceReport {
    std::vector<SweepEntry> entries;  // decreasing h
    std::optional<double> target;
    std::optional<double> guard_h;  // largest h at which the exponent guard fired
    Aperture aperture;
    QuadratureSpec quadrature;

    /// Last entry with status Ok, if any.
    const SweepEntry* last_ok() const;
};

/// Relative round-off above which an estimate is flagged PrecisionLoss.
inline constexpr double kPrecisionLossThreshold = 1e-4;

/// Runs reconstruct_local for each h. h_list must be strictly decreasing and
/// positive (std::invalid_argument); per-h failures become entries.
ConvergenceReport h_sweep(const BoundaryTrace& trace, const Aperture& ap,
                          const std::vector<double>& h_list, const QuadratureSpec& quad = {},
                          std::optional<double> target = std::nullopt);

/// Columns h, estimate, abs_error, max_exponent, levels; metadata as '#' lines.
void write_report_csv(std::ostream& out, const ConvergenceReport& report);

}  // namespace wavereg
