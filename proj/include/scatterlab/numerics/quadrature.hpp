#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace scatterlab::numerics {

// Fixed rule sum_i w_i f(x_i) approximating the integral over (a, b).
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double a = 0.0;
    double b = 0.0;

    std::size_t size() const { return nodes.size(); }

    template <class F>
    auto integrate(F&& f) const {
        using R = decltype(f(0.0));
        R sum{};
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

// n-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree <= 2n - 1.
// Throws ParameterError for n < 1 or a >= b.
QuadratureRule gauss_legendre(int n, double a, double b);

// `panels` equal panels, each carrying an `order`-point Gauss-Legendre rule.
QuadratureRule composite_gauss_legendre(int panels, int order, double a, double b);

// Gauss-Legendre panels whose breakpoints are given explicitly (strictly increasing).
QuadratureRule panel_gauss_legendre(const std::vector<double>& breakpoints, int order);

struct SemiInfiniteResult {
    double value = 0.0;
    // Magnitude of the last accepted panel contributions; bounds the neglected tail
    // when the integrand decays monotonically.
    double tail_estimate = 0.0;
    bool converged = false;
    int panels = 0;
};

// Integrates f over [start, infinity) with unit-width panels up to `dense_until`
// followed by panels of doubling width, stopping once three consecutive panel
// contributions fall below `tolerance`.
SemiInfiniteResult integrate_to_infinity(const std::function<double(double)>& f, double start, double dense_until,
                                         double tolerance, int max_panels = 400, int order = 16);

}  // namespace scatterlab::numerics
