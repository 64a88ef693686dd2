#pragma once

#include <vector>

namespace scatterlab::numerics {

struct SphericalBessel {
    double j = 0.0;
    double y = 0.0;
};

// j_l(x) and y_l(x). y_l requires x > 0 (DomainError otherwise); l must be >= 0.
// j_l uses upward recurrence for l <= x and normalized downward (Miller)
// recurrence below the turning point; y_l always recurs upward.
SphericalBessel spherical_bessel(int l, double x);

// j_l(x) alone; defined at x = 0.
double spherical_bessel_j(int l, double x);

// j_0 ... j_lmax at a single argument.
std::vector<double> spherical_bessel_j_all(int lmax, double x);

// y_0 ... y_lmax at a single argument (x > 0).
std::vector<double> spherical_bessel_y_all(int lmax, double x);

// Legendre polynomial P_l(t) for |t| <= 1 (DomainError otherwise).
double legendre_p(int l, double t);

// P_0(t) ... P_lmax(t).
std::vector<double> legendre_p_all(int lmax, double t);

}  // namespace scatterlab::numerics
