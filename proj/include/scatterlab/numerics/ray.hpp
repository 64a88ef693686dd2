#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "scatterlab/error.hpp"
#include "scatterlab/numerics/quadrature.hpp"

namespace scatterlab::numerics {

inline double magnitude(double x) { return std::abs(x); }
template <std::size_t N>
double magnitude(const std::array<double, N>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

template <class T>
struct RayResult {
    T value{};
    double tail = 0.0;  // sum of the final sub-tolerance panels
};

// int_0^inf f(s) ds for integrands with structure on two scales: near s = 0 (reference
// rays through the origin) and near the closest approach s_star of an offset ray with the
// given impact parameter. Panel widths are a fixed fraction of the local scale, so the
// panel count grows only logarithmically with distance. The sweep stops beyond s_star once
// three consecutive panels fall below `tolerance`.
template <class T, class F>
RayResult<T> ray_integral(F&& f, double s_star, double impact, double tolerance, int max_panels = 4000) {
    static const QuadratureRule ref = gauss_legendre(16, -1.0, 1.0);
    auto scale = [&](double s) {
        const double near_origin = std::max(1.0, s);
        const double near_star = std::max({1.0, impact, std::abs(s - s_star)});
        return 0.35 * std::min(near_origin, near_star);
    };
    RayResult<T> out;
    double lo = 0.0;
    int quiet = 0;
    double quiet_sum = 0.0;
    for (int n = 0; n < max_panels; ++n) {
        double hi = lo + scale(lo);
        if (lo < s_star && hi > s_star) hi = s_star;  // panel edge at the closest approach
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        T c{};
        for (std::size_t i = 0; i < ref.size(); ++i) c = c + (half * ref.weights[i]) * f(mid + half * ref.nodes[i]);
        out.value = out.value + c;
        lo = hi;
        if (lo <= s_star) continue;
        if (magnitude(c) < tolerance) {
            ++quiet;
            quiet_sum += magnitude(c);
            if (quiet >= 3) {
                out.tail = quiet_sum;
                return out;
            }
        } else {
            quiet = 0;
            quiet_sum = 0.0;
        }
    }
    throw DomainError("ray integral does not converge within the panel budget");
}

}  // namespace scatterlab::numerics
