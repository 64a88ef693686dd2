#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "scatterlab/error.hpp"
#include "scatterlab/numerics/axial_field.hpp"
#include "scatterlab/numerics/fft.hpp"
#include "scatterlab/numerics/fitting.hpp"
#include "scatterlab/numerics/grid.hpp"
#include "scatterlab/numerics/quadrature.hpp"
#include "scatterlab/numerics/special_functions.hpp"
#include "scatterlab/numerics/taper.hpp"

using namespace scatterlab;
using namespace scatterlab::numerics;

namespace {

// Composite Simpson oracle, independent of the Gauss machinery.
template <class F>
double simpson(F f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// Power series for j_l, summed in long double.
double j_series_oracle(int l, double x) {
    long double dfact = 1.0L;
    for (int i = 1; i <= 2 * l + 1; i += 2) dfact *= i;
    long double term = std::pow(static_cast<long double>(x), l) / dfact;
    long double sum = term;
    for (int k = 1; k < 60; ++k) {
        term *= -static_cast<long double>(x) * x / (2.0L * k * (2.0L * l + 2.0L * k + 1.0L));
        sum += term;
    }
    return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("gauss_legendre: midpoint rule and degree-3 exactness") {
    const auto r1 = gauss_legendre(1, 0.0, 2.0);
    REQUIRE(r1.size() == 1);
    CHECK(r1.nodes[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r1.weights[0] == doctest::Approx(2.0).epsilon(1e-15));
    const auto r2 = gauss_legendre(2, 0.0, 1.0);
    CHECK(std::abs(r2.integrate([](double x) { return x * x; }) - 1.0 / 3.0) < 1e-15);
}

TEST_CASE("gauss_legendre: half Gaussian on [0, 10] against a fine Simpson oracle") {
    const auto rule = gauss_legendre(40, 0.0, 10.0);
    const double gl = rule.integrate([](double t) { return std::exp(-t * t); });
    const double oracle = simpson([](double t) { return std::exp(-t * t); }, 0.0, 10.0, 20000);
    CHECK(std::abs(gl - oracle) < 1e-10);
    CHECK(std::abs(gl - std::sqrt(std::numbers::pi) / 2.0) < 1e-10);
}

TEST_CASE("gauss_legendre: polynomial exactness, weight sum and node ordering") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int n : {1, 2, 3, 5, 8, 13, 24, 40, 64}) {
        const double a = -0.7;
        const double b = 2.3;
        const auto rule = gauss_legendre(n, a, b);
        double wsum = 0.0;
        for (double w : rule.weights) {
            CHECK(w > 0.0);
            wsum += w;
        }
        CHECK(std::abs(wsum - (b - a)) <= 1e-12 * (b - a));
        for (std::size_t i = 0; i < rule.size(); ++i) {
            CHECK(rule.nodes[i] > a);
            CHECK(rule.nodes[i] < b);
            if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
        }
        const int degree = 2 * n - 1;
        std::vector<double> c(degree + 1);
        for (auto& x : c) x = coeff(rng);
        auto poly = [&](double x) {
            double s = 0.0;
            for (int d = degree; d >= 0; --d) s = s * x + c[d];
            return s;
        };
        double exact = 0.0;
        double scale = 0.0;
        for (int d = 0; d <= degree; ++d) {
            const double term = c[d] * (std::pow(b, d + 1) - std::pow(a, d + 1)) / (d + 1);
            exact += term;
            scale += std::abs(term);
        }
        CHECK(std::abs(rule.integrate(poly) - exact) <= 1e-13 * scale);
    }
}

TEST_CASE("gauss_legendre: parameter errors") {
    CHECK_THROWS_AS(gauss_legendre(0, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(gauss_legendre(-3, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(gauss_legendre(4, 1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(gauss_legendre(4, 2.0, 1.0), ParameterError);
}

TEST_CASE("composite and semi-infinite rules") {
    const auto rule = composite_gauss_legendre(7, 6, 0.0, 3.0);
    CHECK(rule.size() == 42);
    CHECK(rule.integrate([](double x) { return std::cos(x); }) == doctest::Approx(std::sin(3.0)).epsilon(1e-14));
    const auto tail = integrate_to_infinity([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 4.0, 1e-12, 400, 20);
    CHECK(tail.converged);
    CHECK(std::abs(tail.value - std::numbers::pi / 2.0) < 1e-10);
    const auto divergent = integrate_to_infinity([](double x) { return 1.0 / (1.0 + x); }, 0.0, 4.0, 1e-12, 60, 8);
    CHECK_FALSE(divergent.converged);
}

TEST_CASE("spherical_bessel: closed forms and series oracle") {
    CHECK(std::abs(spherical_bessel(0, std::numbers::pi).j) < 1e-15);
    CHECK(spherical_bessel(1, 1.0).j == doctest::Approx(std::sin(1.0) - std::cos(1.0)).epsilon(1e-14));
    CHECK(std::abs(spherical_bessel(1, 1.0).j - 0.3011687) < 1e-7);
    const double ref = j_series_oracle(10, 1.0);
    CHECK(std::abs(spherical_bessel_j(10, 1.0) - ref) <= 1e-10 * std::abs(ref));
    CHECK(spherical_bessel_j(3, 0.0) == 0.0);
    CHECK(spherical_bessel_j(0, 0.0) == 1.0);
    CHECK_THROWS_AS(spherical_bessel(2, 0.0), DomainError);
    CHECK_THROWS_AS(spherical_bessel(-1, 1.0), ParameterError);
}

TEST_CASE("spherical_bessel: agreement with the standard library over l <= 60, x in [1e-3, 1e3]") {
    int checked = 0;
    for (int l = 0; l <= 60; l += 3) {
        for (double x = 1e-3; x <= 1e3; x *= 1.37) {
            const double ref_j = std::sph_bessel(l, x);
            if (std::abs(ref_j) < 1e-280) continue;
            const auto ours = spherical_bessel_j_all(l, x);
            // Near zeros of j_l the envelope, not the value, sets the scale.
            const double scale_j = x > l ? std::max(std::abs(ref_j), 1.0 / x) : std::abs(ref_j);
            CHECK(std::abs(ours[l] - ref_j) <= 1e-10 * scale_j);
            const double ref_y = std::sph_neumann(l, x);
            if (std::isfinite(ref_y) && std::abs(ref_y) < 1e280) {
                const double scale_y = x > l ? std::max(std::abs(ref_y), 1.0 / x) : std::abs(ref_y);
                CHECK(std::abs(spherical_bessel(l, x).y - ref_y) <= 1e-10 * scale_y);
            }
            ++checked;
        }
    }
    CHECK(checked > 300);
}

TEST_CASE("spherical_bessel: Wronskian j y' - j' y = 1/x^2") {
    for (int l = 1; l <= 20; ++l) {
        for (double x : {0.1, 0.5, 1.0, 3.0, 7.5, 20.0, 55.0, 100.0}) {
            const auto j = spherical_bessel_j_all(l, x);
            const auto y = spherical_bessel_y_all(l, x);
            // f_l' = f_{l-1} - (l + 1) f_l / x
            const double jp = j[l - 1] - (l + 1) / x * j[l];
            const double yp = y[l - 1] - (l + 1) / x * y[l];
            const double w = j[l] * yp - jp * y[l];
            CHECK(std::abs(w * x * x - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("legendre_p: closed forms, bound and orthogonality") {
    CHECK(legendre_p(0, 0.77) == 1.0);
    CHECK(legendre_p(1, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(legendre_p(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
    CHECK_THROWS_AS(legendre_p(2, 1.0001), DomainError);
    for (double t = -1.0; t <= 1.0; t += 0.01)
        for (double p : legendre_p_all(30, t)) CHECK(std::abs(p) <= 1.0 + 1e-14);
    const auto rule = gauss_legendre(12, -1.0, 1.0);
    for (int l = 0; l <= 10; ++l) {
        for (int m = 0; m <= 10; ++m) {
            const double s = rule.integrate([&](double t) { return legendre_p(l, t) * legendre_p(m, t); });
            const double expected = l == m ? 2.0 / (2 * l + 1) : 0.0;
            CHECK(std::abs(s - expected) < 1e-10);
        }
    }
}

TEST_CASE("dft: constant, round trip, single frequency and Parseval") {
    std::vector<cplx> ones(8, cplx{1.0, 0.0});
    const auto spike = dft(ones, Direction::forward);
    CHECK(std::abs(spike[0] - std::sqrt(8.0)) < 1e-14);
    for (int i = 1; i < 8; ++i) CHECK(std::abs(spike[i]) < 1e-14);

    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    for (std::size_t n : {1u, 2u, 16u, 256u, 4096u}) {
        std::vector<cplx> v(n);
        for (auto& z : v) z = {g(rng), g(rng)};
        const auto fwd = dft(v, Direction::forward);
        const auto back = dft(fwd, Direction::inverse);
        double n_in = 0.0;
        double n_out = 0.0;
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            n_in += std::norm(v[i]);
            n_out += std::norm(fwd[i]);
            err = std::max(err, std::abs(back[i] - v[i]));
        }
        CHECK(err < 1e-12);
        CHECK(std::abs(std::sqrt(n_in) - std::sqrt(n_out)) < 1e-12 * std::sqrt(n_in));
    }

    const std::size_t n = 64;
    const int m = 5;
    std::vector<cplx> wave(n);
    for (std::size_t j = 0; j < n; ++j) wave[j] = std::polar(1.0, 2.0 * std::numbers::pi * m * j / n);
    const auto fw = dft(wave, Direction::forward);
    for (std::size_t k = 0; k < n; ++k) {
        // Direct O(n^2) oracle.
        cplx direct{};
        for (std::size_t j = 0; j < n; ++j) direct += wave[j] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / n);
        direct /= std::sqrt(static_cast<double>(n));
        CHECK(std::abs(fw[k] - direct) < 1e-12);
        if (k != static_cast<std::size_t>(m)) CHECK(std::abs(fw[k]) < 1e-12);
    }
    CHECK(std::abs(fw[m]) == doctest::Approx(std::sqrt(64.0)).epsilon(1e-13));
}

TEST_CASE("dft: non power of two is rejected") {
    std::vector<cplx> v(12);
    CHECK_THROWS_AS(dft(v, Direction::forward), ParameterError);
    CHECK_THROWS_AS(FftPlan(0), ParameterError);
}

TEST_CASE("fft_frequencies ordering") {
    const auto p = fft_frequencies(8, 0.5);
    const double base = 2.0 * std::numbers::pi / 4.0;
    CHECK(p[0] == 0.0);
    CHECK(p[1] == doctest::Approx(base));
    CHECK(p[4] == doctest::Approx(-4.0 * base));
    CHECK(p[7] == doctest::Approx(-base));
}

TEST_CASE("UniformGrid invariants") {
    UniformGrid g(1, 16, 0.5);
    CHECK(g.coordinate(8) == 0.0);
    CHECK(g.coordinate(0) == -4.0);
    CHECK(g.half_extent() == 4.0);
    CHECK(UniformGrid(3, 8, 1.0).total_points() == 512);
    CHECK_THROWS_AS(UniformGrid(2, 16, 0.5), ParameterError);
    CHECK_THROWS_AS(UniformGrid(1, 6, 0.5), ParameterError);
    CHECK_THROWS_AS(UniformGrid(1, 15, 0.5), ParameterError);
    CHECK_THROWS_AS(UniformGrid(1, 16, 0.0), ParameterError);
}

TEST_CASE("fit_line and fit_loglog") {
    std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    std::vector<double> y{3.0, 5.0, 7.0, 9.0};
    const auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    std::vector<double> p{1.0, 10.0, 100.0};
    std::vector<double> q{5.0, 5.0 / std::sqrt(10.0), 0.5};
    CHECK(fit_loglog(p, q).slope == doctest::Approx(-0.5));
    std::vector<double> same{2.0, 2.0};
    CHECK_THROWS_AS(fit_line(same, same), NumericalError);
}

TEST_CASE("smooth_step is C-infinity flat at the ends and monotone") {
    CHECK(smooth_step(-0.1) == 0.0);
    CHECK(smooth_step(1.1) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
    CHECK(smooth_step(1e-3) < 1e-200);
    double prev = 0.0;
    for (double t = 0.0; t <= 1.0; t += 0.01) {
        CHECK(smooth_step(t) >= prev);
        prev = smooth_step(t);
    }
    CHECK(window_taper(0.5, 10.0, 0.2) == 1.0);
    CHECK(window_taper(10.0, 10.0, 0.2) == 0.0);
}

namespace {
struct AxialErrors {
    double lap = 0.0;
    double dr = 0.0;
    double dz = 0.0;
};

AxialErrors gaussian_derivative_errors(double h) {
    const auto grid = AxialGrid::covering(6.0, 6.0, h);
    AxialField f(grid);
    for (int i = 0; i < grid.n_rho; ++i)
        for (int j = 0; j < grid.n_z; ++j) f.at(i, j) = std::exp(-grid.rho(i) * grid.rho(i) - grid.z(j) * grid.z(j));
    const auto lap = laplacian(f);
    const auto dr = d_rho(f);
    const auto dz = d_z(f);
    AxialErrors e;
    for (int i = 0; i < grid.n_rho - 2; ++i)
        for (int j = 2; j < grid.n_z - 2; ++j) {
            const double rho = grid.rho(i);
            const double z = grid.z(j);
            const double r2 = rho * rho + z * z;
            e.lap = std::max(e.lap, std::abs(lap.at(i, j) - (4.0 * r2 - 6.0) * std::exp(-r2)));
            e.dr = std::max(e.dr, std::abs(dr.at(i, j) + 2.0 * rho * std::exp(-r2)));
            e.dz = std::max(e.dz, std::abs(dz.at(i, j) + 2.0 * z * std::exp(-r2)));
        }
    return e;
}
}  // namespace

TEST_CASE("axial field: difference operators are fourth order") {
    const auto coarse = gaussian_derivative_errors(0.05);
    const auto fine = gaussian_derivative_errors(0.025);
    CHECK(coarse.lap < 1e-4);
    CHECK(coarse.dr < 1e-5);
    CHECK(coarse.lap / fine.lap > 12.0);
    CHECK(coarse.dr / fine.dr > 12.0);
    CHECK(coarse.dz / fine.dz > 12.0);
}

TEST_CASE("axial field: serial and parallel paths agree, integrals and interpolation") {
    const auto grid = AxialGrid::covering(6.0, 6.0, 0.05);
    AxialField f(grid);
    for (int i = 0; i < grid.n_rho; ++i)
        for (int j = 0; j < grid.n_z; ++j) {
            const double r2 = grid.rho(i) * grid.rho(i) + grid.z(j) * grid.z(j);
            f.at(i, j) = std::exp(-r2);
        }
    const auto lap = laplacian(f);
    const auto lap_serial = laplacian(f, Execution::serial);
    CHECK(lap.values() == lap_serial.values());
    const auto dr = d_rho(f);
    CHECK(dr.parity() == Parity::odd);

    const auto lower = cumulative_z(f, Anchor::lower);
    const auto upper = cumulative_z(f, Anchor::upper);
    const double half_line = std::sqrt(std::numbers::pi) / 2.0;
    for (int j = 0; j < grid.n_z; j += 17) {
        const double z = grid.z(j);
        const double expected = half_line * (1.0 + std::erf(z));
        CHECK(std::abs(lower.at(0, j).real() - expected) < 1e-6);
        CHECK(std::abs(upper.at(0, j).real() - (2.0 * half_line - expected)) < 1e-6);
    }

    for (double rho : {0.0, 0.013, 0.4, 1.234, 2.9}) {
        for (double z : {-2.17, -0.01, 0.333, 1.9}) {
            const double expected = std::exp(-rho * rho - z * z);
            CHECK(std::abs(f.sample(rho, z).real() - expected) < 5e-6);
            CHECK(std::abs(dr.sample(rho, z).real() + 2.0 * rho * expected) < 2e-5);
        }
    }
    // Odd parity reflects with a sign.
    CHECK(dr.sample(-0.3, 0.2).real() == doctest::Approx(-dr.sample(0.3, 0.2).real()));
}
