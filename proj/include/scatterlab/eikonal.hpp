#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "scatterlab/execution.hpp"
#include "scatterlab/numerics/axial_field.hpp"
#include "scatterlab/potentials.hpp"
#include "scatterlab/transport.hpp"
#include "scatterlab/vec3.hpp"

namespace scatterlab::eikonal {

using cplx = std::complex<double>;
using transport::Sign;

constexpr double default_cone_half_angle_deg = 15.0;

// N0 = ceil(1.5 / rho), so that N0 rho > 1 with margin.
int default_N0(double rho);

// Phi_{+-}(x, xi) = +-(1/2) int_0^inf (v(x +- t xi) - v(+-t xi)) dt.
// The bad direction is x_hat = -+xi_hat; points within the cone half-angle of it (|x| > 1)
// raise DomainError. Requires rho > 1/2.
struct PhaseIntegral {
    double value = 0.0;
    double tail = 0.0;
};
PhaseIntegral eikonal_phase_integral(const PotentialModel& model, const Vec3& x, const Vec3& xi, Sign sign,
                                     double cone_half_angle_deg = default_cone_half_angle_deg);

// Successive approximations for the eikonal equation with a = 0:
//   Phi = sum_{n <= N0} (2|xi|)^{-n} phi_n,
//   phi_0 = 0, xi_hat.grad phi_1 + v = 0, xi_hat.grad phi_{n+1} + sum_m grad phi_m . grad phi_{n-m} = 0,
// each solved along rays by phi(x) = +-int_0^inf (f(x +- t xi_hat) - f(+-t xi_hat)) dt.
// With a = 0 every even phi_n vanishes and phi_3 is driven by |grad phi_1|^2. Orders up to
// N0 = 4 are supported (phi_1 and phi_3 carry all the content).
class EikonalPhase {
public:
    EikonalPhase(const PotentialModel& model, const Vec3& xi, Sign sign, int N0,
                 double cone_half_angle_deg = default_cone_half_angle_deg);

    Sign sign() const { return sign_; }
    int N0() const { return N0_; }
    const Vec3& xi_hat() const { return xi_hat_; }
    double xi_norm() const { return xi_norm_; }
    double cone_half_angle() const { return cone_; }
    const PotentialModel& model() const { return *model_; }

    // True when x lies in the excluded cone around the bad direction (|x| > 1).
    bool in_bad_cone(const Vec3& x) const;

    double phi(int n, const Vec3& x) const;
    Vec3 grad_phi(int n, const Vec3& x) const;
    double lap_phi(int n, const Vec3& x) const;

    double Phi(const Vec3& x) const;
    Vec3 grad_Phi(const Vec3& x) const;
    double lap_Phi(const Vec3& x) const;
    // Eikonal residual q = 2 xi.grad Phi + |grad Phi|^2 + v.
    double residual(const Vec3& x) const;

private:
    std::shared_ptr<const PotentialModel> model_;
    Vec3 xi_hat_;
    double xi_norm_;
    Sign sign_;
    int N0_;
    double cone_;
    double s_;  // +1 for Sign::plus, -1 for Sign::minus
};

struct EikonalData {
    Sign sign = Sign::minus;
    Vec3 xi{0.0, 0.0, 1.0};
    int N0 = 1;
    double cone_half_angle = 0.0;  // radians
    bool phase_dropped = false;    // rho > 1: Phi = 0 is used downstream
    std::vector<Vec3> points;
    std::vector<std::vector<double>> phi;  // phi[n][p], n = 0..N0
    std::vector<double> Phi;
    std::vector<double> residual;          // q(points[p])
    double residual_decay_exponent = 0.0;  // fitted -d log|q| / d log|x| (NaN if not fittable)
    double theoretical_exponent = 0.0;     // N0 rho
};

// Evaluates phi_n, Phi and q at the given points. Points inside the bad cone raise DomainError.
EikonalData eikonal_iterate(const PotentialModel& model, const Vec3& xi_hat, double xi_norm, int N0,
                            const std::vector<Vec3>& points, Sign sign = Sign::minus,
                            double cone_half_angle_deg = default_cone_half_angle_deg,
                            Execution exec = Execution::parallel);

struct TransportSolveSettings {
    double h = 0.025;             // lattice spacing
    double extent = 0.0;          // lattice half-size; 0 = support radius + 2 (short range) or 12 (long range)
    bool drop_phase_short_range = true;  // Phi = 0 for rho > 1
};

// psi_{+-} = e^{i(x.xi + Phi)} sum_{n <= N} (2i|xi|)^{-n} b_n on an axisymmetric lattice in the
// frame of xi_hat (z along xi_hat). Radial models only.
struct ApproximateEigenfunction {
    Sign sign = Sign::minus;
    int order = 0;
    double lambda = 0.0;
    Vec3 direction{0.0, 0.0, 1.0};
    bool phase_used = false;
    numerics::AxialGrid grid;
    std::vector<numerics::AxialField> b;  // b_n^{(+-)}
    numerics::AxialField phase;            // Phi on the lattice
    numerics::AxialField psi;
    numerics::AxialField residual;         // (-Lap + v - lambda) psi
    double residual_norm = 0.0;            // L2 over the off-cone interior
    double residual_norm_incoming = 0.0;   // same, restricted to the incoming half-space (upstream of v)
    double psi_max_off_cone = 0.0;

    // psi at a world point (bicubic in the lattice frame).
    cplx value(const Vec3& x) const;
};

ApproximateEigenfunction transport_solve(const PotentialModel& model, const EikonalData& eikonal, int N,
                                         const TransportSolveSettings& settings = {},
                                         Execution exec = Execution::parallel);

struct S0Settings {
    double window = 0.0;                // half-width of the square window on the plane; 0 = auto
    double taper_fraction = 0.2;        // width of the smooth roll-off, as a fraction of the window
    double points_per_wavelength = 12.0;
    double enlargement = 1.25;          // window factor for the sensitivity rerun
    double lattice_h = 0.025;
    double sensitivity_limit = 0.1;
    bool phase_representation = false;  // psi = e^{i(k x.w + Phi)} even for short-range models (N = 0)
};

struct S0Result {
    cplx value;
    cplx enlarged_value;
    double window = 0.0;
    double window_sensitivity = 0.0;  // |enlarged - value| / |value|
    bool converged = false;
    long nodes = 0;
};

// Plane integral over Pi_{omega0} of conj(psi_+) d_z psi_- - conj(d_z psi_+) psi_- with
// prefactor -i pi k (2pi)^{-3}, for omega, omega' with omega.omega0 > 1/2. The plane-wave part
// (whose integral is the identity's delta term) is subtracted before integrating.
// Short-range models use the lattice b_n (any N); long-range models use psi = e^{i phi}
// with pointwise Phi (N = 0).
S0Result s0_kernel(const PotentialModel& model, double lambda, const Vec3& omega, const Vec3& omega_prime,
                   const Vec3& omega0, int N, const S0Settings& settings = {},
                   Execution exec = Execution::parallel);

struct DiagonalProbe {
    std::vector<double> angles;      // |omega - omega'| angle, radians
    std::vector<double> separations; // |omega - omega'|
    std::vector<double> magnitudes;  // |s0|
    std::vector<double> sensitivities;
    double fitted_exponent = 0.0;
    double theoretical_exponent = 0.0;  // -(1 + 1/rho)
    bool reliable = true;
};

// |s0| against |omega - omega'| for pairs placed symmetrically about omega0.
DiagonalProbe diagonal_exponent_probe(const PotentialModel& model, double lambda, const Vec3& omega0,
                                      const std::vector<double>& angles, const S0Settings& settings = {},
                                      Execution exec = Execution::parallel);

}  // namespace scatterlab::eikonal
