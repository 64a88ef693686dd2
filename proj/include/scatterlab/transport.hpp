#pragma once

#include <vector>

#include "scatterlab/execution.hpp"
#include "scatterlab/numerics/axial_field.hpp"
#include "scatterlab/potentials.hpp"

namespace scatterlab::transport {

using numerics::AxialField;
using numerics::AxialGrid;

// Which ray the recursion integrates along, in the frame where the momentum points along +z.
//   minus: b_{n+1}(x) = int_{-inf}^{0} f_n(x + t e_z) dt   (psi_-, the usual high-energy ansatz)
//   plus:  b_{n+1}(x) = -int_{0}^{inf} f_n(x + t e_z) dt    (psi_+)
enum class Sign { minus, plus };

struct AxialTransportInput {
    AxialGrid grid;
    AxialField potential;             // v on the grid
    const AxialField* phase = nullptr;      // Phi; null means Phi = 0
    const AxialField* residual = nullptr;   // q = 2 xi.grad Phi + |grad Phi|^2 + v; null means q = v
    Sign sign = Sign::minus;
    int order = 0;                    // highest n
};

// Solves xi_hat . grad b_{n+1} = f_n with
//   f_n = -Lap b_n - 2i grad Phi . grad b_n + (q - i Lap Phi) b_n,   b_0 = 1,
// on an axisymmetric lattice. Returns b_0 .. b_order.
std::vector<AxialField> solve(const AxialTransportInput& input, Execution exec = Execution::parallel);

// f_n for a given b_n (the source of the next order and, scaled by (2i|xi|)^{-n}, the
// residual of the truncated ansatz).
AxialField source(const AxialTransportInput& input, const AxialField& b, Execution exec = Execution::parallel);

// v sampled on the lattice (radial models only).
AxialField sample_potential(const PotentialModel& model, const AxialGrid& grid, Execution exec = Execution::parallel);

}  // namespace scatterlab::transport
