#pragma once

#include <cmath>

namespace scatterlab::numerics {

// C-infinity step: 0 for t <= 0, 1 for t >= 1, all derivatives vanish at both ends.
inline double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

// Radial window: 1 inside (1 - width_fraction) * radius, 0 beyond radius.
inline double window_taper(double r, double radius, double width_fraction) {
    const double inner = (1.0 - width_fraction) * radius;
    return 1.0 - smooth_step((r - inner) / (radius - inner));
}

// Angular cutoff around a bad direction: 0 inside half_angle, 1 beyond 2 * half_angle.
inline double cone_cutoff(double angle, double half_angle) {
    return smooth_step((angle - half_angle) / half_angle);
}

}  // namespace scatterlab::numerics
