#pragma once

#include <span>
#include <vector>

#include "wavereg/quadrature.hpp"

namespace wavereg {

/// Parameters of the regularization kernel K_h(x, y0, t).
struct KernelParams {
    double y0 = 1.0;
    double c = 1.0;
    double h = 0.1;

    void validate() const;
};

/// Largest exponent the kernel evaluators accept before failing fast.
inline constexpr double kMaxExponent = 700.0;

/// H(z) = (1/pi) * integral_0^{pi/2} exp(z sin s) ds.
/// Throws OverflowError for |z| > kMaxExponent.
double h_function(double z, const QuadratureSpec& quad = {});

/// log H(z); valid for any finite z (no overflow).
double log_h_function(double z, const QuadratureSpec& quad = {});

/// Real part of the exponent of the kernel's s-integrand, written in terms of
/// z = sqrt(y0^2 - t^2) and sigma = sin s. Convex in sigma.
double re_f(double x, double z, double sigma, const KernelParams& params);

/// Closed-form kernel with quadrature diagnostics.
struct KernelEvaluation {
    double value = 0.0;
    double max_exponent = 0.0;  // max over sigma in [0, 1] of Re F
    int levels = 0;             // s-rule doublings used
    bool converged = false;
};

/// Evaluates K_h(x, y0, t) from its closed form: an s-integral over [0, pi/2]
/// of a complex Gaussian, times (c + i x)^{-1/2}, real part taken last.
/// The integrand is scaled by exp(-max Re F) so only the final product can
/// overflow; that case is rejected up front with OverflowError.
KernelEvaluation kernel_closed_form_detail(double x, double t, const KernelParams& params,
                                           const QuadratureSpec& quad = {});

double kernel_closed_form(double x, double t, const KernelParams& params,
                          const QuadratureSpec& quad = {});

/// Frequency cutoff sqrt(35 / (h c)) + y0 / (h c) for the Fourier oracle.
double default_k_cutoff(const KernelParams& params);

struct FourierEvaluation {
    double value = 0.0;
    int panels = 0;
};

/// Evaluates K_h from its Fourier representation
///   (1/4pi) sum_{+-} int_{-kc}^{kc} exp(-ikx - h k^2 (c +- ix)) H(+-k z) dk
/// with composite 16-point Gauss panels narrow enough to follow the chirped
/// phase. The sum runs in binary128: its terms grow like exp(y0^2 / (4 h c))
/// while K_h can be tiny, and double precision would leave only absolute
/// accuracy on that scale. Throws TailTruncationError when exp(-h c kc^2) H(kc y0) >= 1e-14.
FourierEvaluation kernel_fourier_oracle_detail(double x, double t, const KernelParams& params,
                                               double k_cutoff, const QuadratureSpec& quad = {});

double kernel_fourier_oracle(double x, double t, const KernelParams& params, double k_cutoff,
                             const QuadratureSpec& quad = {});

/// Same as kernel_fourier_oracle for every x in xs at a common t; the H factors
/// are computed once for the row.
std::vector<FourierEvaluation> kernel_fourier_oracle_row(std::span<const double> xs, double t,
                                                         const KernelParams& params,
                                                         double k_cutoff,
                                                         const QuadratureSpec& quad = {});

/// a = c / (4 (c^2 + d^2)).
double decay_constant_a(double c, double d);

struct ExponentDiagnostics {
    double re_f_at_sigma0 = 0.0;
    double re_f_at_sigma1 = 0.0;
    double re_f_max_over_sigma = 0.0;
    double bound_rhs = 0.0;  // -a epsilon^2 / h
};

/// Exponent bounds at a point of the band D(sqrt(y0^2 - t^2)) + epsilon <= |x| <= d.
/// Throws PreconditionError outside the band.
ExponentDiagnostics decay_diagnostics(double x, double t, const KernelParams& params,
                                      double epsilon, double d);

struct BandSample {
    double x = 0.0;
    double t = 0.0;
    double log_abs_k = 0.0;
    double bound_rhs = 0.0;  // -a epsilon^2 / h - log(h) / 2
};

/// Samples log|K_h| on the band with nt uniform times in [-y0, y0] and nx
/// uniform abscissae on each side (x > 0 and x < 0). Empty when epsilon > d.
std::vector<BandSample> sample_decay_band(const KernelParams& params, double epsilon, double d,
                                          int nt, int nx, const QuadratureSpec& quad = {});

/// max over samples of |K_h| h^{1/2} exp(a epsilon^2 / h); 0 for an empty band.
double decay_envelope(std::span<const BandSample> samples);

}  // namespace wavereg
