#include "wavereg/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

extern "C" {
#include <quadmath.h>
}

#include "wavereg/error.hpp"
#include "wavereg/geometry.hpp"
#include "wavereg/parallel.hpp"

namespace wavereg {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr int kPanelOrder = 16;
constexpr double kTailBound = 1e-14;

// (1/pi) int_0^{pi/2} exp(z (sin s - 1)) ds for z >= 0, or the unscaled
// integral for z < 0. The caller adds max(z, 0) back in log space.
double scaled_h(double z, const QuadratureSpec& quad) {
    const double shift = z > 0.0 ? z : 0.0;
    auto f = [z, shift](double s) { return std::exp(z * std::sin(s) - shift); };
    const auto r = integrate_doubling<double>(f, 0.0, 0.5 * kPi, quad.nodes_s, quad.refinement,
                                              quad.kernel_rel_tol);
    return r.value / kPi;
}

// sin(s_i) at the n Gauss nodes mapped to [0, pi/2]; per-thread cache.
const std::vector<double>& quarter_wave_sines(int n) {
    thread_local std::map<int, std::vector<double>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        const auto rule = gauss_legendre(n);
        std::vector<double> v(rule->size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = std::sin(0.25 * kPi * (1.0 + rule->nodes[i]));
        }
        it = cache.emplace(n, std::move(v)).first;
    }
    return it->second;
}

using quad_t = __float128;
const quad_t kPiQ = 4 * atanq(1);

struct QuadRule {
    std::vector<quad_t> nodes;
    std::vector<quad_t> weights;
};

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration in binary128.
std::shared_ptr<const QuadRule> gauss_legendre_q(int n) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const QuadRule>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) {
        return it->second;
    }
    auto rule = std::make_shared<QuadRule>();
    rule->nodes.resize(n);
    rule->weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        quad_t x = cosq(kPiQ * (i + quad_t(0.75)) / (n + quad_t(0.5)));
        quad_t dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            quad_t p0 = 1;
            quad_t p1 = x;
            for (int m = 2; m <= n; ++m) {
                const quad_t p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const quad_t dx = p1 / dp;
            x -= dx;
            if (fabsq(dx) < quad_t(1e-32)) {
                break;
            }
        }
        const quad_t w = 2 / ((1 - x * x) * dp * dp);
        rule->nodes[i] = -x;
        rule->nodes[n - 1 - i] = x;
        rule->weights[i] = w;
        rule->weights[n - 1 - i] = w;
    }
    cache.emplace(n, rule);
    return rule;
}

// H(z) to binary128 accuracy. For z >= 0 (and small |z|) the series
// H(z) = (1/2) sum_n (z/2)^n / Gamma(n/2 + 1)^2, i.e. (I0 + L0) / 2, whose
// terms are positive for z > 0. H(-z) for large z is O(1/z) and only ever
// multiplies O(1) weights, so 80-bit Gauss-Legendre suffices there; the rule
// stops where exp(-z sin s) drops below e^-48.
quad_t h_function_q(quad_t z) {
    if (z >= -20) {
        const quad_t half = z / 2;
        const quad_t q = half * half;
        quad_t even = 1;                            // n = 0
        quad_t odd = half * 4 / kPiQ;               // n = 1, Gamma(3/2)^2 = pi/4
        quad_t sum = even + odd;
        quad_t scale = fabsq(even) + fabsq(odd);
        for (int m = 1; m < 4000; ++m) {
            even *= q / (quad_t(m) * m);
            const quad_t r = m + quad_t(0.5);
            odd *= q / (r * r);
            sum += even + odd;
            scale += fabsq(even) + fabsq(odd);
            if (2 * m > fabsq(z) && fabsq(even) + fabsq(odd) < quad_t(1e-36) * scale) {
                break;
            }
        }
        return sum / 2;
    }
    const long double a = -static_cast<long double>(z);
    const long double upper = a > 48 ? asinl(48 / a) : 0.5L * std::numbers::pi_v<long double>;
    const auto rule = gauss_legendre_q(64);
    long double sum = 0;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
        const long double s = upper / 2 * (1 + static_cast<long double>(rule->nodes[i]));
        sum += static_cast<long double>(rule->weights[i]) * expl(-a * sinl(s));
    }
    return static_cast<quad_t>(sum * upper / 2 / std::numbers::pi_v<long double>);
}

}  // namespace

void KernelParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(y0) || !positive(c) || !positive(h)) {
        throw DomainError("KernelParams: y0, c and h must be positive (y0=" + std::to_string(y0) +
                          ", c=" + std::to_string(c) + ", h=" + std::to_string(h) + ")");
    }
}

double h_function(double z, const QuadratureSpec& quad) {
    if (std::abs(z) > kMaxExponent) {
        throw OverflowError("h_function: |z| = " + std::to_string(std::abs(z)) +
                                " exceeds the exponent budget",
                            z);
    }
    return std::exp(std::max(z, 0.0)) * scaled_h(z, quad);
}

double log_h_function(double z, const QuadratureSpec& quad) {
    return std::max(z, 0.0) + std::log(scaled_h(z, quad));
}

double re_f(double x, double z, double sigma, const KernelParams& params) {
    const double c = params.c;
    return (c * (-x * x + z * z * sigma * sigma) - 2.0 * x * x * z * sigma) /
           (4.0 * params.h * (c * c + x * x));
}

KernelEvaluation kernel_closed_form_detail(double x, double t, const KernelParams& params,
                                           const QuadratureSpec& quad) {
    params.validate();
    if (std::abs(t) > params.y0) {
        throw DomainError("kernel_closed_form: |t| = " + std::to_string(std::abs(t)) +
                          " exceeds y0 = " + std::to_string(params.y0));
    }
    const double z = cone_height(params.y0, t);
    // Re F is convex in sigma, so its maximum on [0, 1] sits at an endpoint.
    const double peak = std::max(re_f(x, z, 0.0, params), re_f(x, z, 1.0, params));
    if (peak > kMaxExponent) {
        throw OverflowError("kernel_closed_form: exponent " + std::to_string(peak) +
                                " exceeds the budget at h = " + std::to_string(params.h),
                            peak);
    }
    // Exponent -(x + i z sigma)^2 / (4h(c + ix)) = -(P + iQ) q with
    // P = x^2 - z^2 sigma^2, Q = 2 x z sigma, q = (c - ix) / (4h(c^2 + x^2)).
    const double scale = 1.0 / (4.0 * params.h * (params.c * params.c + x * x));
    const double qr = params.c * scale;
    const double qi = -x * scale;
    auto sweep = [&](int n, double& magnitude) {
        const auto rule = gauss_legendre(n);
        const auto& sines = quarter_wave_sines(n);
        double re = 0.0;
        double im = 0.0;
        magnitude = 0.0;
        for (std::size_t i = 0; i < sines.size(); ++i) {
            const double sigma = sines[i];
            const double P = x * x - z * z * sigma * sigma;
            const double Q = 2.0 * x * z * sigma;
            const double mod = rule->weights[i] * std::exp(Q * qi - P * qr - peak);
            const double arg = -(P * qi + Q * qr);
            re += mod * std::cos(arg);
            im += mod * std::sin(arg);
            magnitude += mod;
        }
        const double half = 0.25 * kPi;
        magnitude *= half;
        return cplx(re * half, im * half);
    };
    Integral<cplx> r;
    int n = quad.nodes_s;
    cplx prev = sweep(n, r.magnitude);
    r.value = prev;
    for (int level = 1; level <= quad.refinement; ++level) {
        n *= 2;
        r.value = sweep(n, r.magnitude);
        r.levels = level;
        if (std::abs(r.value - prev) <= quad.kernel_rel_tol * r.magnitude) {
            r.converged = true;
            break;
        }
        prev = r.value;
    }
    const cplx root = std::sqrt(cplx(params.c, x));  // principal branch: Re > 0
    const double prefactor = 1.0 / (2.0 * std::pow(kPi, 1.5) * std::sqrt(params.h));

    KernelEvaluation out;
    out.value = prefactor * (r.value / root).real() * std::exp(peak);
    out.max_exponent = peak;
    out.levels = r.levels;
    out.converged = r.converged;
    return out;
}

double kernel_closed_form(double x, double t, const KernelParams& params,
                          const QuadratureSpec& quad) {
    return kernel_closed_form_detail(x, t, params, quad).value;
}

double default_k_cutoff(const KernelParams& params) {
    const double hc = params.h * params.c;
    return std::sqrt(35.0 / hc) + params.y0 / hc;
}

std::vector<FourierEvaluation> kernel_fourier_oracle_row(std::span<const double> xs, double t,
                                                         const KernelParams& params,
                                                         double k_cutoff,
                                                         const QuadratureSpec& quad) {
    params.validate();
    if (std::abs(t) > params.y0) {
        throw DomainError("kernel_fourier_oracle: |t| = " + std::to_string(std::abs(t)) +
                          " exceeds y0 = " + std::to_string(params.y0));
    }
    if (!(k_cutoff > 0.0)) {
        throw DomainError("kernel_fourier_oracle: k_cutoff must be positive");
    }
    const double h = params.h;
    const double hc = h * params.c;
    const double tail = -hc * k_cutoff * k_cutoff + log_h_function(k_cutoff * params.y0, quad);
    if (tail >= std::log(kTailBound)) {
        throw TailTruncationError("kernel_fourier_oracle: tail factor exp(" +
                                  std::to_string(tail) + ") at k_cutoff = " +
                                  std::to_string(k_cutoff) + " is not below 1e-14");
    }

    double xmax = 0.0;
    for (double x : xs) {
        xmax = std::max(xmax, std::abs(x));
    }
    // The two branches fold into (1/2pi) int exp(-h c k^2) cos(k x (1 + h k)) H(k z) dk,
    // whose phase advances at |x| (1 + 2 h |k|).
    const double rate = xmax * (1.0 + 2.0 * h * k_cutoff) + 1.0;
    const double max_width = kPi / (2.0 * rate);
    const int panels = static_cast<int>(std::ceil(2.0 * k_cutoff / max_width));
    const quad_t width = quad_t(2.0 * k_cutoff) / panels;

    // Terms reach exp(z^2 / (4 h c)) while K itself can be many orders
    // smaller, so the sum is carried in binary128.
    const auto rule = gauss_legendre_q(kPanelOrder);
    const double z = cone_height(params.y0, t);
    const std::size_t n = static_cast<std::size_t>(panels) * kPanelOrder;
    std::vector<quad_t> k(n), amp(n);
    for (int p = 0; p < panels; ++p) {
        const quad_t mid = -quad_t(k_cutoff) + (p + quad_t(0.5)) * width;
        for (int i = 0; i < kPanelOrder; ++i) {
            const std::size_t j = static_cast<std::size_t>(p) * kPanelOrder + i;
            k[j] = mid + width / 2 * rule->nodes[i];
        }
    }
    const quad_t hq = h;
    const quad_t hcq = quad_t(h) * quad_t(params.c);
    const quad_t zq = z;
    parallel::for_each_index(n, [&](std::size_t j) {
        const int i = static_cast<int>(j % kPanelOrder);
        amp[j] = width / 2 * rule->weights[i] * expq(-hcq * k[j] * k[j]) * h_function_q(k[j] * zq);
    });

    std::vector<FourierEvaluation> out(xs.size());
    parallel::for_each_index(xs.size(), [&](std::size_t ix) {
        const quad_t x = xs[ix];
        quad_t total = 0;
        for (int p = 0; p < panels; ++p) {
            quad_t partial = 0;
            for (int i = 0; i < kPanelOrder; ++i) {
                const std::size_t j = static_cast<std::size_t>(p) * kPanelOrder + i;
                partial += amp[j] * cosq(k[j] * x * (1 + hq * k[j]));
            }
            total += partial;
        }
        out[ix].value = static_cast<double>(total / (2 * kPiQ));
        out[ix].panels = panels;
    });
    return out;
}

FourierEvaluation kernel_fourier_oracle_detail(double x, double t, const KernelParams& params,
                                               double k_cutoff, const QuadratureSpec& quad) {
    const double xs[1] = {x};
    return kernel_fourier_oracle_row(xs, t, params, k_cutoff, quad).front();
}

double kernel_fourier_oracle(double x, double t, const KernelParams& params, double k_cutoff,
                             const QuadratureSpec& quad) {
    return kernel_fourier_oracle_detail(x, t, params, k_cutoff, quad).value;
}

double decay_constant_a(double c, double d) { return c / (4.0 * (c * c + d * d)); }

ExponentDiagnostics decay_diagnostics(double x, double t, const KernelParams& params,
                                      double epsilon, double d) {
    params.validate();
    if (std::abs(t) > params.y0) {
        throw PreconditionError("decay_diagnostics: |t| exceeds y0");
    }
    const double z = cone_height(params.y0, t);
    const double inner = aperture_d(z, params.c) + epsilon;
    if (std::abs(x) < inner || std::abs(x) > d) {
        throw PreconditionError("decay_diagnostics: |x| = " + std::to_string(std::abs(x)) +
                                " outside the band [" + std::to_string(inner) + ", " +
                                std::to_string(d) + "]");
    }
    ExponentDiagnostics out;
    out.re_f_at_sigma0 = re_f(x, z, 0.0, params);
    out.re_f_at_sigma1 = re_f(x, z, 1.0, params);
    out.re_f_max_over_sigma = std::max(out.re_f_at_sigma0, out.re_f_at_sigma1);
    out.bound_rhs = -decay_constant_a(params.c, d) * epsilon * epsilon / params.h;
    return out;
}

std::vector<BandSample> sample_decay_band(const KernelParams& params, double epsilon, double d,
                                          int nt, int nx, const QuadratureSpec& quad) {
    params.validate();
    if (nt < 1 || nx < 1) {
        throw DomainError("sample_decay_band: nt and nx must be >= 1");
    }
    if (!(epsilon > 0.0) || !(d > 0.0)) {
        throw DomainError("sample_decay_band: epsilon and d must be positive");
    }
    std::vector<BandSample> points;
    if (epsilon > d) {
        return points;
    }
    const double a = decay_constant_a(params.c, d);
    const double rhs = -a * epsilon * epsilon / params.h - 0.5 * std::log(params.h);
    for (int j = 0; j < nt; ++j) {
        const double t =
            nt == 1 ? 0.0 : -params.y0 + 2.0 * params.y0 * static_cast<double>(j) / (nt - 1);
        const double inner = aperture_d(cone_height(params.y0, t), params.c) + epsilon;
        if (inner > d) {
            continue;
        }
        for (int side : {-1, 1}) {
            for (int i = 0; i < nx; ++i) {
                const double mag =
                    nx == 1 ? inner : inner + (d - inner) * static_cast<double>(i) / (nx - 1);
                points.push_back({side * mag, t, 0.0, rhs});
            }
        }
    }
    parallel::for_each_index(points.size(), [&](std::size_t i) {
        const double k = kernel_closed_form(points[i].x, points[i].t, params, quad);
        points[i].log_abs_k =
            k == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(k));
    });
    return points;
}

double decay_envelope(std::span<const BandSample> samples) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        best = std::max(best, s.log_abs_k - s.bound_rhs);
    }
    return samples.empty() ? 0.0 : std::exp(best);
}

}  // namespace wavereg
