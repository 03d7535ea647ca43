#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "wavereg/quadrature.hpp"
#include "wavereg/synthetic.hpp"

namespace wavereg {

/// One sample of the boundary data's Fourier transform.
struct SpectralPoint {
    double k = 0.0;
    double omega = 0.0;
    std::complex<double> value{};
};

/// sin(y0 s) / s with s^2 = omega^2 - k^2. Equals y0 on the cone and continues
/// as sinh(y0 s') / s' (s'^2 = k^2 - omega^2) inside it.
double transfer_factor(double k, double omega, double y0);

/// I0(z) by its power series; an oracle independent of the H-function code.
double bessel_i0_series(double z);

/// (G+, G-) with G+- = (1/2pi^2) int_{-y0}^{y0} e^{i omega t} int_0^{pi/2}
/// exp(+-k sqrt(y0^2 - t^2) sin s) ds dt. Throws OverflowError for |k| y0 > 700.
std::pair<double, double> g_functions(double k, double omega, double y0,
                                      const QuadratureSpec& quad = {});

/// (1/2pi) int_{-y0}^{y0} e^{i omega t} I0(k sqrt(y0^2 - t^2)) / 2 dt, with I0
/// from the series. Should equal transfer_factor / (2pi).
double bessel_propagator_integral(double k, double omega, double y0,
                                  const QuadratureSpec& quad = {});

/// Interior value u(0, y0, 0) for a single mode.
double mode_spectral_value(const Mode& mode, double y0);

struct SpectralResult {
    double value = 0.0;
    double boundary_fraction = 0.0;  // max |v| on the grid border / max |v|
    double nyquist_fraction = 0.0;   // spectral energy in the outer 20% band
    std::vector<std::string> warnings;
};

/// u(0, y0, 0) = (1/4pi^2) sum over modes with |omega| >= |k| of
/// transfer_factor(k, omega, y0) * v~(k, omega) dk domega, where
/// v~(k, omega) = int v(x, t) exp(-i(kx + omega t)) dx dt is approximated by a
/// DFT of the grid (phase-corrected for the grid origin). The result refers to
/// x = t = 0 in the trace's own coordinates.
SpectralResult spectral_reconstruct(const SampledTrace& grid, double y0);

/// Same for a sampled BoundaryTrace; throws std::invalid_argument otherwise.
SpectralResult spectral_reconstruct(const BoundaryTrace& trace, double y0);

}  // namespace wavereg
