#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "scatterlab/error.hpp"
#include "scatterlab/potentials.hpp"

using namespace scatterlab;

namespace {

// Rotation from a random unit quaternion.
Vec3 rotate(const Vec3& x, std::mt19937& rng) {
    std::normal_distribution<double> g;
    double q[4] = {g(rng), g(rng), g(rng), g(rng)};
    const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    for (double& c : q) c /= n;
    const double a = q[0], b = q[1], c = q[2], d = q[3];
    const double R[3][3] = {{a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)},
                            {2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)},
                            {2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d}};
    Vec3 y{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) y[i] += R[i][j] * x[j];
    return y;
}

std::vector<PotentialModel> builtins() {
    return {PotentialModel::zero(),
            PotentialModel::gaussian_well(-1.0, 1.0),
            PotentialModel::yukawa(0.1, 1.0),
            PotentialModel::square_well(1.0, 1.0),
            PotentialModel::power_tail(0.5, 1.0),
            PotentialModel::power_tail(1.0, 2.0),
            PotentialModel::compact_bump(0.7, 2.0)};
}

}  // namespace

TEST_CASE("evaluate: documented examples") {
    CHECK(PotentialModel::zero().evaluate({1.0, 2.0, 3.0}) == 0.0);
    CHECK(PotentialModel::power_tail(1.0, 1.0).evaluate({0.0, 0.0, 0.0}) == 1.0);
    CHECK(PotentialModel::gaussian_well(-1.0, 1.0).evaluate({0.0, 1.0, 0.0}) ==
          doctest::Approx(-std::exp(-1.0)).epsilon(1e-15));
    CHECK(std::abs(PotentialModel::gaussian_well(-1.0, 1.0).evaluate({1.0, 0.0, 0.0}) + 0.3678794) < 1e-7);
}

TEST_CASE("evaluate: closed forms of each profile") {
    const auto y = PotentialModel::yukawa(2.0, 0.5);
    CHECK(y.radial(3.0) == doctest::Approx(2.0 * std::exp(-1.5) / 3.0));
    CHECK(std::isfinite(y.radial(0.0)));
    CHECK(y.r_times(0.0) == doctest::Approx(2.0));
    const auto sq = PotentialModel::square_well(1.5, 2.0);
    CHECK(sq.radial(1.999) == -1.5);
    CHECK(sq.radial(2.0) == 0.0);
    const auto pt = PotentialModel::power_tail(0.5, 0.75);
    CHECK(pt.radial(3.0) == doctest::Approx(0.5 * std::pow(10.0, -0.375)));
    const auto bump = PotentialModel::compact_bump(0.7, 2.0);
    CHECK(bump.radial(0.0) == doctest::Approx(0.7));
    CHECK(bump.radial(2.0) == 0.0);
    CHECK(bump.radial(1.99) > 0.0);
}

TEST_CASE("radial symmetry under random rotations") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (const auto& m : builtins()) {
        for (int trial = 0; trial < 200; ++trial) {
            const Vec3 x{u(rng), u(rng), u(rng)};
            const Vec3 y = rotate(x, rng);
            const double a = m.evaluate(x);
            const double b = m.evaluate(y);
            // The square well edge is a measure-zero discontinuity; skip samples straddling it.
            if (m.kind() == PotentialKind::square_well && std::abs(norm(x) - 1.0) < 1e-12) continue;
            CHECK(std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("radial derivatives match central differences") {
    for (const auto& m : builtins()) {
        if (m.kind() == PotentialKind::square_well) continue;
        for (double r : {0.3, 0.9, 1.7, 3.1}) {
            const double h = 1e-5;
            const double fd = (m.radial(r + h) - m.radial(r - h)) / (2.0 * h);
            CHECK(std::abs(m.radial_derivative(r) - fd) < 1e-7 * std::max(1.0, std::abs(fd)));
        }
    }
    const auto g = PotentialModel::gaussian_well(-1.0, 1.0);
    const Vec3 x{0.3, -0.4, 1.2};
    const Vec3 grad = g.gradient(x);
    for (int d = 0; d < 3; ++d) CHECK(grad[d] == doctest::Approx(-2.0 * x[d] * g.evaluate(x)));
}

TEST_CASE("Laplacian closed forms match a finite-difference stencil") {
    for (const auto& m : builtins()) {
        if (m.kind() == PotentialKind::square_well) continue;
        for (const Vec3 x : {Vec3{0.3, 0.1, -0.2}, Vec3{1.1, -0.4, 0.7}, Vec3{0.0, 1.5, 0.2}}) {
            double fd = 0.0;
            const double h = 1e-4;
            for (int d = 0; d < 3; ++d) {
                Vec3 a = x;
                Vec3 b = x;
                a[d] += h;
                b[d] -= h;
                fd += (m.evaluate(a) - 2.0 * m.evaluate(x) + m.evaluate(b)) / (h * h);
            }
            CHECK(std::abs(m.laplacian(x) - fd) < 1e-5 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("verify_decay: documented examples") {
    const std::vector<double> radii{10.0, 100.0, 1000.0};
    CHECK(verify_decay(PotentialModel::power_tail(1.0, 1.0), 2, radii, 1.0).pass);
    CHECK(verify_decay(PotentialModel::gaussian_well(-1.0, 1.0), 2, radii, 3.0).pass);
    const auto fail = verify_decay(PotentialModel::power_tail(1.0, 0.5), 0, radii, 1.0);
    CHECK_FALSE(fail.pass);
    // Growth of the weighted ratio like <x>^{1/2}.
    CHECK(fail.orders[0].weighted[2] / fail.orders[0].weighted[1] == doctest::Approx(std::sqrt(10.0)).epsilon(1e-3));
}

TEST_CASE("verify_decay: classification consistency for the built-ins") {
    std::vector<double> radii;
    for (double r = 2.0; r <= 2000.0; r *= 2.0) radii.push_back(r);
    for (const auto& m : builtins()) {
        CHECK(verify_decay(m, 2, radii).pass);
        if (m.kind() == PotentialKind::power_tail) CHECK_FALSE(verify_decay(m, 2, radii, m.rho() + 0.5).pass);
    }
    CHECK_THROWS_AS(verify_decay(PotentialModel::zero(), 3, radii), ParameterError);
    CHECK_THROWS_AS(verify_decay(PotentialModel::zero(), 1, {2.0, 1.0}), ParameterError);
}

TEST_CASE("l1 norm and support") {
    CHECK(PotentialModel::gaussian_well(1.0, 1.0).l1_norm() ==
          doctest::Approx(std::pow(std::numbers::pi, 1.5)).epsilon(1e-12));
    // 4 pi g / mu^2 for the Yukawa profile.
    CHECK(PotentialModel::yukawa(0.3, 2.0).l1_norm() == doctest::Approx(4.0 * std::numbers::pi * 0.3 / 4.0).epsilon(1e-10));
    CHECK(std::isinf(PotentialModel::power_tail(1.0, 2.0).l1_norm()));
    CHECK(PotentialModel::power_tail(1.0, 4.0).l1_norm() ==
          doctest::Approx(std::pow(std::numbers::pi, 2)).epsilon(1e-8));  // 4 pi int r^2 (1+r^2)^{-2} = pi^2
    const auto g = PotentialModel::gaussian_well(-1.0, 1.0);
    CHECK(std::abs(g.radial(g.support_radius(1e-12))) <= 1.0001e-12);
    CHECK(std::isinf(PotentialModel::power_tail(1.0, 2.0).support_radius()));
    CHECK(PotentialModel::square_well(1.0, 1.5).support_radius() == 1.5);
}

TEST_CASE("scaling and custom models") {
    const auto g = PotentialModel::gaussian_well(-1.0, 1.0);
    CHECK(g.scaled(2.0).evaluate({0.5, 0.0, 0.0}) == 2.0 * g.evaluate({0.5, 0.0, 0.0}));
    const auto c = PotentialModel::custom([](const Vec3& x) { return std::exp(-norm_sq(x)) * (1.0 + 0.1 * x[0]); }, 3.0, 7.0);
    CHECK_FALSE(c.radial());
    CHECK(c.evaluate({1.0, 0.0, 0.0}) == doctest::Approx(1.1 * std::exp(-1.0)));
    CHECK_THROWS_AS(c.radial(1.0), ParameterError);
    CHECK_THROWS_AS(PotentialModel::gaussian_well(1.0, 0.0), ParameterError);
    CHECK_THROWS_AS(potential_kind_from_string("potentail"), ParameterError);
    CHECK(potential_kind_from_string("yukawa") == PotentialKind::yukawa);
}
