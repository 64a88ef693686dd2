#include "scatterlab/numerics/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "scatterlab/error.hpp"

namespace scatterlab::numerics {

namespace {

// Nodes and weights of the n-point rule on [-1, 1], ascending.
void legendre_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess for the i-th largest root.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = z;
                p0 = 1.0;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Recompute the derivative at the converged root.
        double p0 = 1.0;
        double p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n == 1 ? 1.0 : n * (z * p1 - p0) / (z * z - 1.0);
        const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[n - 1 - i] = z;
        x[i] = -z;
        w[n - 1 - i] = weight;
        w[i] = weight;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw ParameterError("gauss_legendre: n must be positive, got " + std::to_string(n));
    if (!(a < b)) throw ParameterError("gauss_legendre: degenerate interval");
    std::vector<double> x;
    std::vector<double> w;
    if (n == 1) {
        x = {0.0};
        w = {2.0};
    } else {
        legendre_nodes(n, x, w);
    }
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    QuadratureRule rule;
    rule.a = a;
    rule.b = b;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * x[i];
        rule.weights[i] = half * w[i];
    }
    return rule;
}

QuadratureRule composite_gauss_legendre(int panels, int order, double a, double b) {
    if (panels < 1) throw ParameterError("composite_gauss_legendre: panels must be positive");
    std::vector<double> breaks(panels + 1);
    for (int p = 0; p <= panels; ++p) breaks[p] = a + (b - a) * p / panels;
    breaks.back() = b;
    return panel_gauss_legendre(breaks, order);
}

QuadratureRule panel_gauss_legendre(const std::vector<double>& breakpoints, int order) {
    if (breakpoints.size() < 2) throw ParameterError("panel_gauss_legendre: need at least two breakpoints");
    const QuadratureRule ref = gauss_legendre(order, -1.0, 1.0);
    QuadratureRule rule;
    rule.a = breakpoints.front();
    rule.b = breakpoints.back();
    rule.nodes.reserve((breakpoints.size() - 1) * order);
    rule.weights.reserve((breakpoints.size() - 1) * order);
    for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
        const double lo = breakpoints[p];
        const double hi = breakpoints[p + 1];
        if (!(lo < hi)) throw ParameterError("panel_gauss_legendre: breakpoints must increase strictly");
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (int i = 0; i < order; ++i) {
            rule.nodes.push_back(mid + half * ref.nodes[i]);
            rule.weights.push_back(half * ref.weights[i]);
        }
    }
    return rule;
}

SemiInfiniteResult integrate_to_infinity(const std::function<double(double)>& f, double start, double dense_until,
                                         double tolerance, int max_panels, int order) {
    const QuadratureRule ref = gauss_legendre(order, -1.0, 1.0);
    auto panel = [&](double lo, double hi) {
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        double s = 0.0;
        for (int i = 0; i < order; ++i) s += ref.weights[i] * f(mid + half * ref.nodes[i]);
        return half * s;
    };

    SemiInfiniteResult out;
    double lo = start;
    while (lo + 1.0 <= dense_until && out.panels < max_panels) {
        out.value += panel(lo, lo + 1.0);
        lo += 1.0;
        ++out.panels;
    }
    double width = std::max(1.0, std::abs(lo) * 0.5);
    int quiet = 0;
    double recent = 0.0;
    while (out.panels < max_panels) {
        const double contribution = panel(lo, lo + width);
        out.value += contribution;
        lo += width;
        width *= 2.0;
        ++out.panels;
        recent = std::max(recent * 0.5, std::abs(contribution));
        if (std::abs(contribution) < tolerance) {
            if (++quiet >= 3) {
                out.converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    out.tail_estimate = recent;
    return out;
}

}  // namespace scatterlab::numerics
