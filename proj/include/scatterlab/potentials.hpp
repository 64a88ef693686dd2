#pragma once

#include <functional>
#include <string>
#include <vector>

#include "scatterlab/vec3.hpp"

namespace scatterlab {

enum class PotentialKind { gaussian_well, yukawa, square_well, power_tail, compact_bump, zero, custom };

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

// Immutable scalar potential v with decay metadata.
//
//   gaussian_well  v0 exp(-r^2 / width^2)
//   yukawa         v0 exp(-mu r) / max(r, r_min)          (v0 is the coupling g)
//   square_well    -depth for r < radius, 0 for r >= radius
//   power_tail     v0 <x>^{-rho},  <x> = (1 + |x|^2)^{1/2}
//   compact_bump   v0 exp(1 - 1 / (1 - r^2/radius^2)) for r < radius, 0 beyond
//   zero           0
//   custom         user callable on R^3, not assumed radial
class PotentialModel {
public:
    static constexpr double yukawa_r_min = 1e-8;

    static PotentialModel zero();
    static PotentialModel gaussian_well(double v0, double width, double declared_rho = 3.0);
    static PotentialModel yukawa(double g, double mu, double declared_rho = 3.0);
    static PotentialModel square_well(double depth, double radius, double declared_rho = 3.0);
    static PotentialModel power_tail(double v0, double rho);
    static PotentialModel compact_bump(double v0, double radius, double declared_rho = 3.0);
    // support_radius <= 0 means unbounded support.
    static PotentialModel custom(std::function<double(const Vec3&)> fn, double declared_rho, double support_radius);

    PotentialKind kind() const { return kind_; }
    bool radial() const { return kind_ != PotentialKind::custom; }
    double rho() const { return rho_; }
    bool short_range() const { return rho_ > 1.0; }
    double strength() const { return v0_; }
    double range_parameter() const { return range_; }

    double evaluate(const Vec3& x) const;
    // Radial profile v(r); only for radial models.
    double radial(double r) const;
    // r v(r), finite at r = 0 for every radial model (removes the Yukawa singularity).
    double r_times(double r) const;
    // dv/dr for radial models (0 a.e. for the square well).
    double radial_derivative(double r) const;
    // Gradient of v at x (central differences for custom models).
    Vec3 gradient(const Vec3& x) const;
    // Laplacian of v: closed form v'' + 2v'/r for radial models, central differences otherwise.
    double laplacian(const Vec3& x) const;

    // Radius beyond which |v| < tol (infinite for power tails and unbounded custom models).
    double support_radius(double tol = 1e-14) const;
    bool compact_or_fast_decaying() const;

    // Multiplies the strength by s (used for linearity checks).
    PotentialModel scaled(double s) const;

    // Integral of |v| over R^3 for radial models; +inf when it diverges.
    double l1_norm() const;

private:
    PotentialModel() = default;

    PotentialKind kind_ = PotentialKind::zero;
    double v0_ = 0.0;
    double range_ = 1.0;  // width, 1/mu, or radius depending on kind
    double rho_ = 3.0;
    double support_ = 0.0;
    std::function<double(const Vec3&)> custom_;
};

struct DecayOrderReport {
    int order = 0;
    double declared_rho = 0.0;
    std::vector<double> radii;
    std::vector<double> weighted;  // |d^k v| <r>^{rho + k}
    double empirical_constant = 0.0;
    bool pass = false;
};

struct DecayReport {
    std::vector<DecayOrderReport> orders;
    bool pass = false;
};

// Checks |d^k v| <= C <x>^{-rho-k} along a ray for k <= derivative_orders, with derivatives
// by central differences. Passes when the weighted magnitude shows no growth beyond 5%
// across the upper half of the sampled radii.
DecayReport verify_decay(const PotentialModel& model, int derivative_orders, const std::vector<double>& radii,
                         double claimed_rho);
DecayReport verify_decay(const PotentialModel& model, int derivative_orders, const std::vector<double>& radii);

}  // namespace scatterlab
