#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wavereg/synthetic.hpp"

namespace wavereg {

/// Leapfrog run of u_tt = u_xx + u_yy on [-X, X] x [0, Y] with u = 0 on y = 0
/// and on the artificial edges, u(., ., 0) = initial, u_t(., ., 0) = 0.
/// With full_plane the grid spans [-Y, Y] in y instead and y = 0 is an
/// ordinary interior row (used to check the odd-continuation argument).
struct FdtdConfig {
    double X = 26.5;
    double Y = 13.5;
    double dx = 0.02;  // dy = dx
    double dt = 0.01;
    double T = 24.0;
    std::function<double(double, double)> initial;
    bool full_plane = false;
    bool record_energy = false;

    /// Throws SolverConstraintError on CFL violation, std::invalid_argument on
    /// malformed grid parameters.
    void validate() const;
};

/// Desk-scale bump run: bump(r / 0.8) * y * exp(-y) centred at (0, 1.2).
FdtdConfig default_bump_config();

/// C-infinity profile exp(1 - 1 / (1 - s^2)) on |s| < 1, zero elsewhere; 1 at s = 0.
double bump_profile(double s);

/// bump(|(x, y) - (cx, cy)| / radius) * y * exp(-y).
std::function<double(double, double)> bump_initial_data(double cx, double cy, double radius);

/// Smooth plateau: 1 for |s| <= inner, 0 for |s| >= outer.
double plateau_window(double s, double inner, double outer);

/// Mode at t = 0 multiplied by plateau windows in x and y.
std::function<double(double, double)> windowed_mode_initial_data(const Mode& mode, double x_inner,
                                                                  double x_outer, double y_inner,
                                                                  double y_outer);

/// Interior point sampled at every step with t <= t_end (bilinear in space).
/// A negative t_end follows the probe for the whole run.
struct Probe {
    double x = 0.0;
    double y = 1.0;
    double t_end = 0.0;
};

/// Boundary-trace sub-grid to record. Times outside [0, T] are filled from
/// evenness in t (the solver starts at rest).
struct TraceRequest {
    double x_lo = -4.0;
    double x_hi = 4.0;
    double t_lo = -1.0;
    double t_hi = 1.0;
    int x_stride = 1;
    int t_stride = 1;
};

struct ProbeSeries {
    Probe probe;
    std::vector<double> times;
    std::vector<double> values;
};

struct FdtdResult {
    std::vector<SampledTrace> traces;  // one per request
    std::vector<ProbeSeries> probes;
    std::vector<double> energy;  // per step when record_energy
    double support_margin = 0.0;
    double courant = 0.0;
};

/// Margin between the earliest time an artificial edge can influence the
/// observation set (traces and probes) and the last observed time. Negative
/// means truncation would be visible.
double support_margin(const FdtdConfig& config, std::span<const Probe> probes,
                      std::span<const TraceRequest> traces);

/// Throws SolverConstraintError (CFL, support overflow) before any stepping.
FdtdResult fdtd_run(const FdtdConfig& config, std::span<const Probe> probes,
                    std::span<const TraceRequest> traces);

}  // namespace wavereg
