#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "scatterlab/error.hpp"
#include "scatterlab/partialwave.hpp"
#include "scatterlab/propagator.hpp"

using namespace scatterlab;
using namespace scatterlab::propagator;
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

namespace {

GridSpec line_grid(int n, double dx) {
    GridSpec g;
    g.n = n;
    g.dx = dx;
    return g;
}

// Closed-form free evolution of the normalized Gaussian under H0 = -d^2/dx^2.
cplx free_gaussian(double x, double t, double x0, double sigma, double k0) {
    const double s2 = sigma * sigma;
    const cplx a = s2 + I * t;
    const double y = x - x0 - 2.0 * k0 * t;
    return std::pow(2.0 * pi * s2, -0.25) * std::sqrt(s2 / a) *
           std::exp(-y * y / (4.0 * a) + I * k0 * (x - x0) - I * k0 * k0 * t);
}

double l2_diff(const WavePacket& a, const WavePacket& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a.values[j] - b.values[j]);
    return std::sqrt(s * a.dx);
}

WavePacket exact_free(const GridSpec& g, double t, double x0, double sigma, double k0) {
    WavePacket p = gaussian_packet(g, x0, sigma, k0);
    for (std::size_t j = 0; j < p.size(); ++j) p.values[j] = free_gaussian(p.coordinate(j), t, x0, sigma, k0);
    p.t = t;
    return p;
}

// Midpoint rule with Richardson extrapolation for int_0^1 f(s) ds.
template <class F>
double midpoint_richardson(F f) {
    auto mid = [&](int m) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += f((i + 0.5) / m);
        return s / m;
    };
    const double a = mid(4000);
    const double b = mid(8000);
    return b + (b - a) / 3.0;
}

// s-wave phase shift of an attractive square well from continuity of u'/u at r = R.
double square_well_delta0(double depth, double radius, double k) {
    const double K = std::sqrt(k * k + depth);
    return std::atan(k / K * std::tan(K * radius)) - k * radius;
}

}  // namespace

TEST_CASE("split_step_evolve: v = 0 reproduces the closed-form free Gaussian") {
    const GridSpec g = line_grid(2048, 0.1);
    const WavePacket f = gaussian_packet(g, -20.0, 1.0, 2.0);
    EvolutionConfig c;
    const WavePacket out = split_step_evolve(f, c, 5.0);
    CHECK(out.valid);
    CHECK(l2_diff(out, exact_free(g, 5.0, -20.0, 1.0, 2.0)) < 1e-8);
    CHECK(l2_diff(free_evolve(f, 5.0), exact_free(g, 5.0, -20.0, 1.0, 2.0)) < 1e-8);
}

TEST_CASE("split_step_evolve: t_target equal to the packet time is the identity") {
    const GridSpec g = line_grid(256, 0.1);
    const WavePacket f = gaussian_packet(g, 0.0, 1.0, 1.0);
    EvolutionConfig c;
    c.model = PotentialModel::gaussian_well(-1.0, 1.0);
    const WavePacket out = split_step_evolve(f, c, 0.0);
    CHECK(l2_diff(out, f) == 0.0);
}

TEST_CASE("split_step_evolve: second order in dt") {
    const GridSpec g = line_grid(1024, 0.2);
    const WavePacket f = gaussian_packet(g, -6.0, 1.0, 2.0);
    EvolutionConfig c;
    c.model = PotentialModel::gaussian_well(-5.0, 1.0);
    std::vector<WavePacket> runs;
    for (double dt : {1.6e-3, 0.8e-3, 0.4e-3}) {
        c.dt = dt;
        runs.push_back(split_step_evolve(f, c, 3.0));
    }
    const double e1 = l2_diff(runs[0], runs[1]);
    const double e2 = l2_diff(runs[1], runs[2]);
    const double slope = std::log2(e1 / e2);
    CHECK(e2 > 1e-11);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("split_step_evolve: norm conservation and time reversibility") {
    const GridSpec g = line_grid(1024, 0.1);
    const WavePacket f = gaussian_packet(g, -10.0, 1.0, 2.0);
    EvolutionConfig c;
    c.model = PotentialModel::gaussian_well(-1.0, 1.0);
    c.dt = 4e-4;  // 10^4 steps to t = 4
    const WavePacket fwd = split_step_evolve(f, c, 4.0);
    CHECK(std::abs(fwd.norm() - f.norm()) < 1e-10);
    const WavePacket back = split_step_evolve(fwd, c, 0.0);
    CHECK(l2_diff(back, f) < 1e-8);
}

TEST_CASE("split_step_evolve: serial and parallel agree") {
    const GridSpec g = line_grid(1024, 0.1);
    const WavePacket f = gaussian_packet(g, -10.0, 1.0, 2.0);
    EvolutionConfig c;
    c.model = PotentialModel::yukawa(0.5, 1.0);
    const WavePacket a = split_step_evolve(f, c, 1.0, Execution::serial);
    const WavePacket b = split_step_evolve(f, c, 1.0, Execution::parallel);
    CHECK(l2_diff(a, b) < 1e-12);
}

TEST_CASE("split_step_evolve: stability guard and edge monitor") {
    const GridSpec g = line_grid(256, 0.1);
    const WavePacket f = gaussian_packet(g, 0.0, 1.0, 2.0);
    EvolutionConfig c;
    c.dt = 0.6 / max_kinetic_eigenvalue(g.dx);
    CHECK_THROWS_AS(split_step_evolve(f, c, 1.0), ParameterError);
    c.dt = 0.0;
    const WavePacket inside = split_step_evolve(f, c, 0.5);
    CHECK(inside.valid);
    const WavePacket hits = split_step_evolve(f, c, 3.0);  // center reaches 12 of 12.8
    CHECK_FALSE(hits.valid);
    CHECK(hits.max_edge_fraction > 1e-6);
}

TEST_CASE("radial channel: Dirichlet at the origin and free reflection of an incoming packet") {
    GridSpec g;
    g.geometry = Geometry::radial;
    g.n = 2048;
    g.dx = 0.2;
    const WavePacket f = gaussian_packet(g, 40.0, 2.0, -1.0);
    CHECK(f.values[0] == cplx(0.0));
    CHECK(f.norm() == doctest::Approx(1.0).epsilon(1e-12));
    EvolutionConfig c;
    const WavePacket out = split_step_evolve(f, c, 40.0);
    CHECK(out.values[0] == cplx(0.0));
    CHECK(std::abs(out.norm() - 1.0) < 1e-10);
    // Odd extension: u(r, t) = psi_line(r, t) - psi_line(-r, t) for the free line evolution.
    WavePacket oracle = out;
    for (std::size_t j = 1; j < out.size(); ++j) {
        const double r = out.coordinate(j);
        oracle.values[j] = (free_gaussian(r, 40.0, 40.0, 2.0, -1.0) - free_gaussian(-r, 40.0, 40.0, 2.0, -1.0)) *
                           (1.0 / f.norm());
    }
    CHECK(l2_diff(out, oracle) < 1e-8);
}

TEST_CASE("free_asymptotics: unitary and accurate for large t") {
    const auto fhat = gaussian_profile(0.0, 1.0, 2.0);
    const GridSpec g = default_line_grid();
    CHECK(std::abs(free_asymptotics(fhat, 100.0, g).norm() - 1.0) < 1e-10);
    CHECK_THROWS_AS(free_asymptotics(fhat, 0.0, g), ParameterError);
    const WavePacket f = gaussian_packet(g, 0.0, 1.0, 2.0);
    const double e100 = l2_diff(free_evolve(f, 100.0), free_asymptotics(fhat, 100.0, g));
    const double e200 = l2_diff(free_evolve(f, 200.0), free_asymptotics(fhat, 200.0, g));
    CHECK(e100 <= 0.01);
    CHECK(e200 <= 0.005);
    CHECK(e200 < e100);
}

TEST_CASE("free_asymptotics: the packet lives near |x| = 2 t k") {
    const double t = 100.0;
    const double k = 2.0;
    const GridSpec g = default_line_grid();
    const WavePacket p = free_evolve(gaussian_packet(g, 0.0, 1.5, k), t);
    double inside = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double m = std::norm(p.values[j]);
        const double x = std::abs(p.coordinate(j));
        total += m;
        if (x >= 0.5 * 2.0 * t * k && x <= 1.5 * 2.0 * t * k) inside += m;
    }
    CHECK(inside / total >= 0.99);
}

TEST_CASE("line_average: closed forms") {
    const auto coulomb = PotentialModel::power_tail(0.5, 1.0);
    const auto inverse_square = PotentialModel::power_tail(0.5, 2.0);
    for (double x : {0.0, 0.3, 2.0, 17.0, -40.0}) {
        const double r = std::abs(x);
        const double asinh_form = r == 0.0 ? 0.5 : 0.5 * std::asinh(r) / r;
        CHECK(std::abs(line_average(coulomb, x) - asinh_form) < 1e-12);
        const double atan_form = r == 0.0 ? 0.5 : 0.5 * std::atan(r) / r;
        CHECK(std::abs(line_average(inverse_square, x) - atan_form) < 1e-10);
        const auto g = PotentialModel::gaussian_well(-0.7, 1.3);
        const double quad = midpoint_richardson([&](double s) { return -0.7 * std::exp(-s * s * r * r / 1.69); });
        CHECK(std::abs(line_average(g, x) - quad) < 1e-10);
    }
    CHECK(line_average(PotentialModel::zero(), 3.0) == 0.0);
}

TEST_CASE("modified_free_evolution: reduces to the free form and is unitary") {
    const auto fhat = gaussian_profile(0.0, 1.0, 2.0);
    const GridSpec g = line_grid(4096, 0.25);
    const WavePacket free_form = free_asymptotics(fhat, 50.0, g);
    const WavePacket zero_mod = modified_free_evolution(PotentialModel::zero(), fhat, 50.0, g);
    CHECK(l2_diff(free_form, zero_mod) == 0.0);
    const auto coulomb = PotentialModel::power_tail(0.5, 1.0);
    const WavePacket mod = modified_free_evolution(coulomb, fhat, 50.0, g);
    CHECK(std::abs(mod.norm() - free_form.norm()) < 1e-10);
    for (std::size_t j : {std::size_t{100}, std::size_t{2500}, std::size_t{3000}}) {
        const double x = mod.coordinate(j);
        const cplx expected = free_form.values[j] * std::exp(-I * 50.0 * 0.5 * std::asinh(std::abs(x)) / std::abs(x));
        CHECK(std::abs(mod.values[j] - expected) < 1e-12);
    }
    CHECK_THROWS_AS(modified_free_evolution(PotentialModel::power_tail(0.5, 0.4), fhat, 50.0, g), DomainError);
    const WavePacket f = gaussian_packet(g, 0.0, 1.0, 2.0);
    CHECK(std::abs(modified_free_propagate(coulomb, f, 30.0).norm() - f.norm()) < 1e-10);
}

TEST_CASE("moller probes: zero potential gives zero increments") {
    const GridSpec g = line_grid(1024, 0.2);
    const WavePacket f = gaussian_packet(g, 0.0, 1.0, 1.0);
    const std::vector<double> times{2.0, 4.0, 8.0};
    const CauchyReport plain = moller_probe(PotentialModel::zero(), f, times);
    const CauchyReport mod = modified_moller_probe(PotentialModel::zero(), f, times);
    for (double d : plain.increments) CHECK(d < 1e-10);
    for (double d : mod.increments) CHECK(d < 1e-10);
    CHECK(plain.valid);
    CHECK(plain.converging);
    CHECK_FALSE(plain.plateau);
    CHECK(mod.converging);
    CHECK_THROWS_AS(moller_probe(PotentialModel::zero(), f, {2.0}), ParameterError);
    CHECK_THROWS_AS(moller_probe(PotentialModel::zero(), f, {4.0, 2.0}), ParameterError);
}

TEST_CASE("moller probe: intertwining of the wave operator with the free flow") {
    // W e^{-i H0 tau} f = e^{-i H tau} W f, with W approximated by g(T) at the last time.
    const GridSpec g = line_grid(4096, 0.2);
    const auto model = PotentialModel::gaussian_well(-0.3, 1.0);
    const WavePacket f = gaussian_packet(g, 0.0, 2.0, 2.0);
    const double tau = 3.0;
    ProbeSettings s;
    s.compute_limit = true;
    const CauchyReport a = moller_probe(model, f, {20.0, 40.0}, s);
    const CauchyReport b = moller_probe(model, free_evolve(f, tau), {20.0, 40.0}, s);
    REQUIRE(a.valid);
    REQUIRE(b.valid);
    EvolutionConfig c;
    c.model = model;
    WavePacket moved = a.limit;
    moved.t = 0.0;
    moved = split_step_evolve(moved, c, tau);
    WavePacket limit_b = b.limit;
    CHECK(l2_diff(moved, limit_b) < 1e-3);
    CHECK(a.converging == b.converging);
}

TEST_CASE("time-domain S-matrix matches stationary phase shifts") {
    const auto zero = scattering_phase_from_time_domain(PotentialModel::zero(), 1.0, 5.0);
    CHECK(std::abs(zero.value - cplx(1.0)) < 1e-6);
    const auto gw = PotentialModel::gaussian_well(-0.3, 1.0);
    const auto td = scattering_phase_from_time_domain(gw, 1.0, 5.0);
    CHECK(td.valid);
    const double d0 = partialwave::radial_phase_shift(gw, 0, 1.0);
    CHECK(std::abs(td.value - std::exp(2.0 * I * d0)) < 1e-2);
    const auto sw = PotentialModel::square_well(1.0, 1.0);
    const auto tds = scattering_phase_from_time_domain(sw, 1.0, 5.0);
    CHECK(std::abs(tds.value - std::exp(2.0 * I * square_well_delta0(1.0, 1.0, 1.0))) < 1e-2);
    CHECK_THROWS_AS(scattering_phase_from_time_domain(gw, 1.0, 2.0), ParameterError);
}
