#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <complex>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "scatterlab/diagnostics.hpp"
#include "scatterlab/error.hpp"

using namespace scatterlab;
using namespace scatterlab::diagnostics;
constexpr double pi = std::numbers::pi;
using cplx = std::complex<double>;

TEST_CASE("DiscretizedOperator: symmetric with a positive semidefinite kinetic part") {
    const auto op = DiscretizedOperator::build(PotentialModel::gaussian_well(-1.0, 1.0), 200, 0.1);
    const Eigen::MatrixXd h = op.matrix();
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(op.kinetic(), Eigen::EigenvaluesOnly).eigenvalues();
    CHECK(ev.minCoeff() > -1e-12);
    CHECK(ev.maxCoeff() < op.max_kinetic_eigenvalue());
    CHECK(op.x[0] == doctest::Approx(-9.95));
    CHECK(op.potential[100] == doctest::Approx(-std::exp(-0.0025)));
}

TEST_CASE("DilationGenerator: Hermitian") {
    const auto op = DiscretizedOperator::build(PotentialModel::zero(), 128, 0.3);
    const auto a = DilationGenerator::build(op);
    CHECK(hermitian_defect(a.matrix) < 1e-10);
    CHECK(a.matrix.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("hs_norm_resolvent_weight: closed form, scaling and divergence") {
    const auto g = PotentialModel::gaussian_well(1.0, 1.0);
    const double value = hs_norm_resolvent_weight(g, 1.0);
    CHECK(std::abs(value - std::sqrt(pi) / 8.0) / (std::sqrt(pi) / 8.0) < 1e-2);
    CHECK(std::abs(value - std::sqrt(pi) / 8.0) < 1e-9);
    CHECK(std::abs(hs_norm_resolvent_weight(g, 16.0) / value - 0.25) < 1e-12);
    // Yukawa: ||v||_1 = 4 pi g / mu^2, so the value is g / (2 mu^2 sqrt(c)).
    const double y = hs_norm_resolvent_weight(PotentialModel::yukawa(0.7, 1.5), 2.0);
    CHECK(y == doctest::Approx(0.7 / (2.0 * 2.25 * std::sqrt(2.0))).epsilon(1e-6));
    CHECK_THROWS_AS(hs_norm_resolvent_weight(PotentialModel::power_tail(0.5, 2.0), 1.0), DomainError);
    CHECK_THROWS_AS(hs_norm_resolvent_weight(g, 0.0), ParameterError);
}

TEST_CASE("kato_smoothness_integral: saturation flips between r = 1 and r = 1/4") {
    const auto grid = propagator::default_line_grid();
    const auto f = propagator::gaussian_packet(grid, -40.0, 4.0, 2.0);
    const std::vector<double> times{20.0, 40.0, 80.0, 160.0, 320.0};
    const KatoReport one = kato_smoothness_integral(1.0, f, times);
    const KatoReport quarter = kato_smoothness_integral(0.25, f, times);
    CHECK(one.valid);
    CHECK(quarter.valid);
    CHECK(one.saturating);
    CHECK(one.last_growth < 0.01);
    CHECK_FALSE(quarter.saturating);
    CHECK(quarter.last_growth > 0.10);
    for (std::size_t i = 1; i < times.size(); ++i) CHECK(one.integrals[i] >= one.integrals[i - 1]);
    const KatoReport serial = kato_smoothness_integral(1.0, f, times, Execution::serial);
    CHECK(std::abs(serial.integrals.back() - one.integrals.back()) < 1e-14);

    propagator::WavePacket zero = f;
    for (auto& v : zero.values) v = 0.0;
    const KatoReport z = kato_smoothness_integral(1.0, zero, times);
    for (double v : z.integrals) CHECK(v == 0.0);
    CHECK_THROWS_AS(kato_smoothness_integral(1.0, f, {20.0, 10.0}), ParameterError);
}

TEST_CASE("kato_smoothness_integral: short-time value against a direct sum") {
    // For t -> 0 the integrand tends to ||<x>^{-r} f||^2, so I(T) / T does as well.
    propagator::GridSpec grid;
    grid.n = 2048;
    grid.dx = 0.1;
    const auto f = propagator::gaussian_packet(grid, 0.0, 2.0, 0.0);
    double direct = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = f.coordinate(j);
        direct += std::norm(f.values[j]) / (1.0 + x * x) * grid.dx;
    }
    const KatoReport rep = kato_smoothness_integral(1.0, f, {1e-3});
    CHECK(rep.integrals[0] / 1e-3 == doctest::Approx(direct).epsilon(1e-5));
}

TEST_CASE("mourre_check: free commutator 4 H0 on spectral windows") {
    const auto zero = PotentialModel::zero();
    const MourreReport a = mourre_check(zero, {1.0, 2.0}, 1024);
    CHECK(a.window_count > 10);
    CHECK(std::abs(a.min_eigenvalue - 4.0) <= 0.1);
    const MourreReport b = mourre_check(zero, {2.0, 3.0}, 1024);
    CHECK(std::abs(b.min_eigenvalue - 8.0) <= 0.2);
    // The exact matrix commutator has a vanishing diagonal on eigenvectors.
    CHECK(a.matrix_commutator_min < 0.5);
    const MourreReport refined = mourre_check(zero, {1.0, 2.0}, 2048);
    CHECK(std::abs(refined.min_eigenvalue - 4.0) / 4.0 < 0.05);
    const MourreReport weak = mourre_check(PotentialModel::gaussian_well(-0.1, 1.0), {1.0, 2.0}, 1024);
    CHECK(weak.min_eigenvalue >= 3.0);
}

TEST_CASE("mourre_check: window errors") {
    CHECK_THROWS_AS(mourre_check(PotentialModel::zero(), {1.0, 1.0 + 1e-9}, 64, 10.0), WindowError);
    CHECK_THROWS_AS(mourre_check(PotentialModel::zero(), {1.0, 2.0}, 64, 300.0), ParameterError);
    CHECK_THROWS_AS(mourre_check(PotentialModel::zero(), {2.0, 1.0}, 256), ParameterError);
}

TEST_CASE("lap_probe: weighted resolvent stability above the r = 1/2 threshold") {
    const auto zero = PotentialModel::zero();
    const LapReport one = lap_probe(zero, 1.0, 1.0, {1e-1, 3e-2, 1e-2, 3e-3});
    CHECK(one.stable);
    CHECK(one.monotone);
    const LapReport pair_one = lap_probe(zero, 1.0, 1.0, {3e-3, 1e-3});
    CHECK(pair_one.relative_change < 0.05);
    const LapReport pair_quarter = lap_probe(zero, 1.0, 0.25, {3e-3, 1e-3});
    CHECK(pair_quarter.relative_change > 0.20);
    CHECK(pair_quarter.monotone);
}

TEST_CASE("lap_probe: below the spectrum and near bound states") {
    const auto zero = PotentialModel::zero();
    const LapReport below = lap_probe(zero, -1.0, 0.25, {1e-1, 1e-2});
    CHECK(below.stable);
    for (double v : below.norms) CHECK(v <= 1.0 + 1e-12);

    const auto well = PotentialModel::gaussian_well(-3.0, 2.0);
    LapSettings s;
    s.n = 256;
    const auto op = DiscretizedOperator::build(well, s.n, s.h);
    const double ground =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(op.matrix(), Eigen::EigenvaluesOnly).eigenvalues()[0];
    REQUIRE(ground < 0.0);
    CHECK_THROWS_AS(lap_probe(well, ground + 1e-3, 1.0, {1e-2}, s), DomainError);
    CHECK_NOTHROW(lap_probe(well, 1.0, 1.0, {1e-2}, s));
    CHECK_THROWS_AS(lap_probe(zero, 1.0, 1.0, {1e-3, 1e-2}), ParameterError);
}

TEST_CASE("lap_probe: largest singular value matches a dense SVD of the explicit resolvent") {
    const auto model = PotentialModel::gaussian_well(-0.5, 1.5);
    LapSettings s;
    s.n = 96;
    s.h = 0.5;
    const double lambda = 0.7;
    const double eps = 5e-3;
    const double r = 0.6;
    const auto op = DiscretizedOperator::build(model, s.n, s.h);
    // Outgoing exterior closure: theta^j with 2 - theta - 1/theta = z h^2, |theta| < 1.
    const cplx z(lambda, eps);
    const cplx a = 2.0 - z * s.h * s.h;
    cplx theta = 0.5 * (a - std::sqrt(a * a - 4.0));
    if (std::abs(theta) > 1.0) theta = 1.0 / theta;
    Eigen::MatrixXcd hz = op.matrix().cast<cplx>();
    hz.diagonal().array() -= z;
    hz(0, 0) -= theta / (s.h * s.h);
    hz(s.n - 1, s.n - 1) -= theta / (s.h * s.h);
    Eigen::VectorXd w(s.n);
    for (int j = 0; j < s.n; ++j) w[j] = std::pow(1.0 + op.x[j] * op.x[j], -0.5 * r);
    const Eigen::MatrixXcd m = w.asDiagonal() * hz.inverse() * w.asDiagonal();
    const double expected = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()[0];
    const LapReport rep = lap_probe(model, lambda, r, {eps}, s);
    CHECK(rep.norms[0] == doctest::Approx(expected).epsilon(1e-9));
}
