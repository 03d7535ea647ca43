#pragma once

namespace wavereg {

/// Boundary patch on which the normal derivative is required to recover
/// u(x0, y0, t0): |t - t0| <= y0, |x - x0| <= D(sqrt(y0^2 - (t - t0)^2)) + epsilon.
/// Points on the boundary of the set count as inside.
struct Aperture {
    double y0 = 1.0;
    double c = 1.0;
    double epsilon = 0.5;
    double x0 = 0.0;
    double t0 = 0.0;

    /// Throws DomainError unless y0, c, epsilon are positive and finite.
    void validate() const;
};

/// D(z) = z * sqrt(c / (c + 2z)). Increasing in z, D(0) = 0, D(z) < z for z > 0.
double aperture_d(double z, double c);

/// Half-width of the aperture slice at time t.
double slice_halfwidth(const Aperture& ap, double t);

bool contains(const Aperture& ap, double x, double t);

/// Half-width of the bounding rectangle in x: D(y0) + epsilon.
double bounding_halfwidth(const Aperture& ap);

/// sqrt(y0^2 - t^2) with the radicand clamped at zero.
double cone_height(double y0, double t);

}  // namespace wavereg
