#include "wavereg/transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "wavereg/error.hpp"
#include "wavereg/kernel.hpp"

namespace wavereg {

namespace {

constexpr double kPi = std::numbers::pi;

// Planner calls are not thread-safe in FFTW.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

double phase_value(Phase p, double arg) { return p == Phase::Cos ? std::cos(arg) : std::sin(arg); }

}  // namespace

double transfer_factor(double k, double omega, double y0) {
    const double q = omega * omega - k * k;
    const double w = y0 * y0 * q;
    if (std::abs(w) < 1e-3) {
        // sin(y0 s)/s = y0 * sum_n (-w)^n / (2n+1)!
        double term = y0;
        double sum = y0;
        for (int n = 1; n < 8; ++n) {
            term *= -w / ((2.0 * n) * (2.0 * n + 1.0));
            sum += term;
        }
        return sum;
    }
    if (q > 0.0) {
        const double s = std::sqrt(q);
        return std::sin(y0 * s) / s;
    }
    const double s = std::sqrt(-q);
    return std::sinh(y0 * s) / s;
}

double bessel_i0_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m < 500; ++m) {
        term *= q / (static_cast<double>(m) * m);
        sum += term;
        if (term < 1e-18 * sum) {
            break;
        }
    }
    return sum;
}

std::pair<double, double> g_functions(double k, double omega, double y0,
                                      const QuadratureSpec& quad) {
    quad.validate();
    if (!(y0 > 0.0)) {
        throw DomainError("g_functions: y0 must be positive");
    }
    if (std::abs(k) * y0 > kMaxExponent) {
        throw OverflowError("g_functions: |k| y0 exceeds the exponent budget", std::abs(k) * y0);
    }
    // t = y0 sin(theta): z = y0 cos(theta), dt = y0 cos(theta) dtheta; even in theta.
    auto g = [&](double sign) {
        auto f = [&](double th) {
            const double z = y0 * std::cos(th);
            return std::cos(omega * y0 * std::sin(th)) * h_function(sign * k * z, quad) * z;
        };
        const auto r = integrate_doubling<double>(f, 0.0, 0.5 * kPi, quad.nodes_t,
                                                  quad.refinement, quad.kernel_rel_tol);
        return r.value / kPi;  // (1/2pi^2) * 2 * pi * integral
    };
    return {g(1.0), g(-1.0)};
}

double bessel_propagator_integral(double k, double omega, double y0, const QuadratureSpec& quad) {
    quad.validate();
    auto f = [&](double th) {
        const double z = y0 * std::cos(th);
        return std::cos(omega * y0 * std::sin(th)) * 0.5 * bessel_i0_series(k * z) * z;
    };
    const auto r = integrate_doubling<double>(f, 0.0, 0.5 * kPi, quad.nodes_t, quad.refinement,
                                              quad.kernel_rel_tol);
    return 2.0 * r.value / (2.0 * kPi);
}

double mode_spectral_value(const Mode& mode, double y0) {
    mode.validate();
    return mode.amplitude * std::sin(mode.l * y0) * phase_value(mode.x_phase, 0.0) *
           phase_value(mode.t_phase, 0.0);
}

namespace {

// Area of {(k, w) in [k1, k2] x [w1, w2] : w >= |k|}; the integrand in k is
// piecewise linear with kinks at 0, +-w1, +-w2, so the trapezoid sum is exact.
double upper_wedge_area(double k1, double k2, double w1, double w2) {
    auto len = [&](double k) { return std::max(0.0, w2 - std::max(w1, std::abs(k))); };
    double pts[7] = {k1, 0.0, w1, -w1, w2, -w2, k2};
    std::sort(pts, pts + 7);
    double area = 0.0;
    double prev = k1;
    for (double p : pts) {
        if (p <= prev || p > k2) continue;
        area += 0.5 * (p - prev) * (len(prev) + len(p));
        prev = p;
    }
    return area;
}

// Fraction of the spectral cell centred at (k, w) that lies in |w| >= |k|.
double cone_fraction(double k, double w, double dk, double dw) {
    const double k1 = k - 0.5 * dk, k2 = k + 0.5 * dk;
    const double w1 = w - 0.5 * dw, w2 = w + 0.5 * dw;
    const double kmax = std::max(std::abs(k1), std::abs(k2));
    const double wmin = (w1 <= 0.0 && w2 >= 0.0) ? 0.0 : std::min(std::abs(w1), std::abs(w2));
    if (wmin >= kmax) return 1.0;
    return (upper_wedge_area(k1, k2, w1, w2) + upper_wedge_area(k1, k2, -w2, -w1)) / (dk * dw);
}

}  // namespace

SpectralResult spectral_reconstruct(const SampledTrace& grid, double y0) {
    grid.validate();
    if (!(y0 > 0.0)) {
        throw DomainError("spectral_reconstruct: y0 must be positive");
    }
    const int nx = grid.nx;
    const int nt = grid.nt;
    const int nkx = nx / 2 + 1;
    const double dx = grid.dx();
    const double dt = grid.dt();

    SpectralResult out;
    double vmax = 0.0;
    double border = 0.0;
    for (int j = 0; j < nt; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double a = std::abs(grid.at(i, j));
            vmax = std::max(vmax, a);
            if (i == 0 || j == 0 || i == nx - 1 || j == nt - 1) {
                border = std::max(border, a);
            }
        }
    }
    if (vmax == 0.0) {
        return out;
    }
    out.boundary_fraction = border / vmax;

    const std::size_t n_in = static_cast<std::size_t>(nx) * nt;
    const std::size_t n_out = static_cast<std::size_t>(nkx) * nt;
    std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n_in)));
    std::unique_ptr<fftw_complex, FftwFree> spec(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_out)));
    if (!in || !spec) {
        throw std::bad_alloc();
    }
    fftw_plan plan = nullptr;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_r2c_2d(nt, nx, in.get(), spec.get(), FFTW_ESTIMATE);
    }
    if (!plan) {
        throw std::runtime_error("spectral_reconstruct: FFT planning failed");
    }
    std::copy(grid.values.begin(), grid.values.end(), in.get());
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }

    // v~(k, w) = dx dt exp(-i(k x_min + w t_min)) * DFT. Only k >= 0 is stored;
    // the k < 0 half is the complex conjugate and the transfer factor is even,
    // so interior columns count twice in the real part.
    const double dk = 2.0 * kPi / (nx * dx);
    const double dw = 2.0 * kPi / (nt * dt);
    const double k_nyq = kPi / dx;
    const double w_nyq = kPi / dt;
    double sum = 0.0;
    double energy = 0.0;
    double energy_high = 0.0;
    for (int j = 0; j < nt; ++j) {
        const int jj = j <= nt / 2 ? j : j - nt;
        const double w = jj * dw;
        for (int i = 0; i < nkx; ++i) {
            const double k = i * dk;
            const double weight = (i == 0 || (nx % 2 == 0 && i == nx / 2)) ? 1.0 : 2.0;
            const fftw_complex& f = spec.get()[static_cast<std::size_t>(j) * nkx + i];
            const double mag2 = (f[0] * f[0] + f[1] * f[1]) * weight;
            energy += mag2;
            if (k > 0.8 * k_nyq || std::abs(w) > 0.8 * w_nyq) {
                energy_high += mag2;
            }
            // Cells cut by the cone count with the fraction of their area
            // inside it; full weight on cone nodes would bias the sum by O(dk).
            const double frac = cone_fraction(k, w, dk, dw);
            if (frac == 0.0) {
                continue;
            }
            const double ph = -(k * grid.x_min + w * grid.t_min);
            const double re = f[0] * std::cos(ph) - f[1] * std::sin(ph);
            sum += weight * frac * transfer_factor(k, w, y0) * re;
        }
    }
    out.value = sum * dx * dt * dk * dw / (4.0 * kPi * kPi);
    out.nyquist_fraction = energy > 0.0 ? energy_high / energy : 0.0;
    if (out.boundary_fraction > 1e-3) {
        out.warnings.push_back("data does not vanish at the grid border (max border |v| / max |v| = " +
                               std::to_string(out.boundary_fraction) + ")");
    }
    if (out.nyquist_fraction > 1e-6) {
        out.warnings.push_back("significant spectral energy near the Nyquist frequencies (fraction " +
                               std::to_string(out.nyquist_fraction) + ")");
    }
    return out;
}

SpectralResult spectral_reconstruct(const BoundaryTrace& trace, double y0) {
    if (!trace.is_sampled()) {
        throw std::invalid_argument("spectral_reconstruct: trace must be sampled on a grid");
    }
    return spectral_reconstruct(trace.grid(), y0);
}

}  // namespace wavereg
