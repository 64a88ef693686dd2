#pragma once

#include <span>

namespace scatterlab::numerics {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares y = slope * x + intercept. Needs at least two distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Least-squares slope of log|y| against log x (x > 0, y != 0).
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace scatterlab::numerics
