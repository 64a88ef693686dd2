#pragma once

#include <complex>
#include <string>
#include <vector>

#include "scatterlab/execution.hpp"
#include "scatterlab/numerics/axial_field.hpp"
#include "scatterlab/potentials.hpp"
#include "scatterlab/vec3.hpp"

namespace scatterlab::born {

using cplx = std::complex<double>;

// First Born amplitude f1 = -(1/4pi) int e^{-i q.x} v(x) dx with q = k(omega - omega').
// Radial models: -(1/q) int_0^inf r v(r) sin(qr) dr, q = 2k sin(theta/2); theta = 0 uses
// -(1/4pi) int v. Slowly decaying tails are summed period by period with Wynn's epsilon
// acceleration; ConvergenceError when the tail does not settle.
cplx born_first_amplitude(const PotentialModel& model, double k, double theta);
cplx born_first_amplitude(const PotentialModel& model, double k, const Vec3& omega, const Vec3& omega_prime);

// delta_l^1 = -k int_0^inf v(r) j_l(kr)^2 r^2 dr.
double born_first_phase_shift(const PotentialModel& model, double k, int l);

struct TransportSettings {
    double h = 0.025;                    // axial lattice spacing
    double cone_half_angle_deg = 15.0;   // forward-cone exclusion around x_hat = omega'
    double support_tol = 1e-14;          // |v| level defining the integration support
};

// b_n(x, omega') of the high-energy ansatz psi = e^{i k x.omega'} sum_n (2ik)^{-n} b_n:
// b_0 = 1, b_{n+1}(x) = int_{-inf}^0 (-Lap b_n + v b_n)(x + t omega') dt.
struct HighEnergyExpansion {
    int order = 0;
    Vec3 omega_prime{0.0, 0.0, 1.0};
    double cone_half_angle = 0.0;  // radians
    std::string route;             // "axial-lattice" or "pointwise-rays"
    std::vector<Vec3> points;
    std::vector<std::vector<cplx>> values;     // values[n][p] = b_n(points[p])
    std::vector<cplx> remainder;                // f_N(points[p]) = (-Lap b_N + v b_N)
    double tail_bound = 0.0;                    // largest neglected ray-tail estimate

    // Lattice fields in the omega' frame (radial models with fast decay only).
    std::vector<numerics::AxialField> fields;
    bool has_fields() const { return !fields.empty(); }
};

// Radial compact or fast-decaying models use the axial lattice (any N). Other short-range
// models (power tails with rho > 1, custom models) use nested ray quadrature with N <= 2.
// Long-range models make the ray integrals diverge: DomainError. Points inside the forward
// cone (|x| > 1 and angle(x, omega') below the half-angle) are rejected with DomainError.
HighEnergyExpansion transport_coefficients(const PotentialModel& model, const Vec3& omega_prime,
                                           const std::vector<Vec3>& points, int N,
                                           const TransportSettings& settings = {},
                                           Execution exec = Execution::parallel);

// b_n(x) by nested ray quadrature (n <= 2), with Lap b_1 = int Lap v along the ray.
cplx transport_coefficient_pointwise(const PotentialModel& model, const Vec3& omega_prime, const Vec3& x, int n,
                                     double* tail_bound = nullptr);

struct BornKernelSample {
    double lambda = 0.0;
    Vec3 omega{};
    Vec3 omega_prime{};
    int order = 0;
    cplx value;
    std::vector<cplx> partial;  // k_0 .. k_N
};

// k_N = -i pi (2pi)^{-3} k sum_{n<=N} (2ik)^{-n} int e^{ik x.(omega'-omega)} v b_n dx (d = 3).
BornKernelSample high_energy_kernel(const PotentialModel& model, double lambda, const Vec3& omega,
                                    const Vec3& omega_prime, int N, const TransportSettings& settings = {},
                                    Execution exec = Execution::parallel);

// Same, reusing precomputed lattice fields (b_n does not depend on lambda).
BornKernelSample high_energy_kernel(const PotentialModel& model, const HighEnergyExpansion& expansion, double lambda,
                                    const Vec3& omega, int N, Execution exec = Execution::parallel);

// Exact off-diagonal S-matrix kernel (ik/2pi) f(theta) from partial waves.
cplx exact_kernel(const PotentialModel& model, double lambda, double theta);

struct ErrorOrderReport {
    int order = 0;
    std::vector<double> lambdas;
    std::vector<double> errors;  // |k_exact - k_N|
    std::vector<double> exact_magnitudes;
    double slope = 0.0;
    double theoretical_slope = 0.0;  // -N/2
    bool floor_warning = false;      // some error below 1e-10; slope unreliable
};

// Slope of log|k_exact - k_N| against log lambda at fixed directions.
ErrorOrderReport measure_error_order(const PotentialModel& model, const std::vector<double>& lambdas,
                                     const Vec3& omega, const Vec3& omega_prime, int N,
                                     const TransportSettings& settings = {}, Execution exec = Execution::parallel);

// Variant at fixed momentum transfer |q| = k |omega - omega'|: the scattering angle is
// re-chosen for each lambda.
ErrorOrderReport measure_error_order_fixed_transfer(const PotentialModel& model, const std::vector<double>& lambdas,
                                                    double momentum_transfer, int N,
                                                    const TransportSettings& settings = {},
                                                    Execution exec = Execution::parallel);

}  // namespace scatterlab::born
