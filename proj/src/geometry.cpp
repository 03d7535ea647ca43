#include "wavereg/geometry.hpp"

#include <cmath>
#include <string>

#include "wavereg/error.hpp"

namespace wavereg {

void Aperture::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(y0) || !positive(c) || !positive(epsilon)) {
        throw DomainError("Aperture: y0, c and epsilon must be positive (y0=" +
                          std::to_string(y0) + ", c=" + std::to_string(c) +
                          ", epsilon=" + std::to_string(epsilon) + ")");
    }
    if (!std::isfinite(x0) || !std::isfinite(t0)) {
        throw DomainError("Aperture: x0 and t0 must be finite");
    }
}

double aperture_d(double z, double c) {
    if (!(z >= 0.0)) {
        throw DomainError("aperture_d: z must be >= 0, got " + std::to_string(z));
    }
    if (!(c > 0.0)) {
        throw DomainError("aperture_d: c must be > 0, got " + std::to_string(c));
    }
    return z * std::sqrt(c / (c + 2.0 * z));
}

double cone_height(double y0, double t) {
    const double r = y0 * y0 - t * t;
    return r > 0.0 ? std::sqrt(r) : 0.0;
}

double slice_halfwidth(const Aperture& ap, double t) {
    const double dt = t - ap.t0;
    if (std::abs(dt) > ap.y0) {
        throw DomainError("slice_halfwidth: |t - t0| = " + std::to_string(std::abs(dt)) +
                          " exceeds y0 = " + std::to_string(ap.y0));
    }
    return aperture_d(cone_height(ap.y0, dt), ap.c) + ap.epsilon;
}

bool contains(const Aperture& ap, double x, double t) {
    if (std::abs(t - ap.t0) > ap.y0) {
        return false;
    }
    return std::abs(x - ap.x0) <= slice_halfwidth(ap, t);
}

double bounding_halfwidth(const Aperture& ap) { return aperture_d(ap.y0, ap.c) + ap.epsilon; }

}  // namespace wavereg
