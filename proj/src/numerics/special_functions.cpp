#include "scatterlab/numerics/special_functions.hpp"

#include <cmath>
#include <string>

#include "scatterlab/error.hpp"

namespace scatterlab::numerics {

namespace {

constexpr double kRescale = 1e150;

void check_order(int l) {
    if (l < 0) throw ParameterError("spherical Bessel order must be non-negative, got " + std::to_string(l));
}

// Small-argument series j_l(x) = x^l / (2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1)).
double j_series(int l, double x) {
    double prefactor = 1.0;
    for (int i = 1; i <= l; ++i) prefactor *= x / (2.0 * i + 1.0);
    double term = 1.0;
    double sum = 1.0;
    const double z = -0.5 * x * x;
    for (int k = 1; k < 40; ++k) {
        term *= z / (k * (2.0 * l + 2.0 * k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return prefactor * sum;
}

}  // namespace

std::vector<double> spherical_bessel_j_all(int lmax, double x) {
    check_order(lmax);
    std::vector<double> j(lmax + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    const double ax = std::abs(x);
    if (ax < 1e-3) {
        for (int l = 0; l <= lmax; ++l) j[l] = j_series(l, x);
        return j;
    }
    const double s = std::sin(x);
    const double c = std::cos(x);
    const double j0 = s / x;
    const double j1 = (ax < 0.5) ? j_series(1, x) : s / (x * x) - c / x;
    j[0] = j0;
    if (lmax == 0) return j;
    j[1] = j1;

    // Upward recurrence is stable while l < |x|.
    const int upward_limit = std::min(lmax, static_cast<int>(ax));
    for (int l = 1; l < upward_limit; ++l) j[l + 1] = (2.0 * l + 1.0) / x * j[l] - j[l - 1];
    if (upward_limit >= lmax) return j;

    // Miller downward recurrence from well above the requested order.
    const int top = std::max(lmax, static_cast<int>(ax)) + 20 + static_cast<int>(std::sqrt(40.0 * (lmax + ax)));
    std::vector<double> down(lmax + 1, 0.0);
    double jp = 0.0;   // j_{n+1}
    double jn = 1e-300; // j_n
    double scale_log = 0.0;
    (void)scale_log;
    for (int n = top; n > 0; --n) {
        const double jm = (2.0 * n + 1.0) / x * jn - jp;  // j_{n-1}
        jp = jn;
        jn = jm;
        if (n - 1 <= lmax) down[n - 1] = jn;
        if (n <= lmax) down[n] = jp;
        if (std::abs(jn) > kRescale) {
            jn /= kRescale;
            jp /= kRescale;
            for (int m = n - 1; m <= lmax; ++m) down[m] /= kRescale;
        }
    }
    // Normalize against whichever closed form is larger in magnitude.
    const double norm = std::abs(j0) >= std::abs(j1) ? j0 / down[0] : j1 / down[1];
    for (int l = upward_limit + 1; l <= lmax; ++l) j[l] = down[l] * norm;
    return j;
}

std::vector<double> spherical_bessel_y_all(int lmax, double x) {
    check_order(lmax);
    if (!(x > 0.0)) throw DomainError("spherical_bessel y_l requires x > 0");
    std::vector<double> y(lmax + 1, 0.0);
    const double s = std::sin(x);
    const double c = std::cos(x);
    y[0] = -c / x;
    if (lmax == 0) return y;
    y[1] = -c / (x * x) - s / x;
    for (int l = 1; l < lmax; ++l) y[l + 1] = (2.0 * l + 1.0) / x * y[l] - y[l - 1];
    return y;
}

double spherical_bessel_j(int l, double x) {
    check_order(l);
    return spherical_bessel_j_all(l, x)[l];
}

SphericalBessel spherical_bessel(int l, double x) {
    check_order(l);
    if (!(x > 0.0)) throw DomainError("spherical_bessel: y_l is undefined at x <= 0");
    return {spherical_bessel_j_all(l, x)[l], spherical_bessel_y_all(l, x)[l]};
}

std::vector<double> legendre_p_all(int lmax, double t) {
    if (lmax < 0) throw ParameterError("legendre_p: order must be non-negative");
    if (!(std::abs(t) <= 1.0)) throw DomainError("legendre_p: |t| must not exceed 1");
    std::vector<double> p(lmax + 1, 0.0);
    p[0] = 1.0;
    if (lmax == 0) return p;
    p[1] = t;
    for (int n = 1; n < lmax; ++n) p[n + 1] = ((2.0 * n + 1.0) * t * p[n] - n * p[n - 1]) / (n + 1.0);
    return p;
}

double legendre_p(int l, double t) { return legendre_p_all(l, t)[l]; }

}  // namespace scatterlab::numerics
