#include "scatterlab/transport.hpp"

#include <cmath>

#include "scatterlab/error.hpp"

namespace scatterlab::transport {

using numerics::cplx;

AxialField sample_potential(const PotentialModel& model, const AxialGrid& grid, Execution exec) {
    if (!model.radial()) throw ParameterError("axial lattice requires a radial model");
    AxialField v(grid);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (int i = 0; i < grid.n_rho; ++i)
        for (int j = 0; j < grid.n_z; ++j) v.at(i, j) = model.radial(std::hypot(grid.rho(i), grid.z(j)));
    return v;
}

AxialField source(const AxialTransportInput& input, const AxialField& b, Execution exec) {
    const AxialGrid& g = input.grid;
    AxialField f = numerics::laplacian(b, exec);
    const AxialField& q = input.residual ? *input.residual : input.potential;
    if (!input.phase) {
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
        for (std::size_t idx = 0; idx < g.size(); ++idx) f.values()[idx] = -f.values()[idx] + q.values()[idx] * b.values()[idx];
        return f;
    }
    const AxialField& phi = *input.phase;
    const AxialField lap_phi = numerics::laplacian(phi, exec);
    const AxialField dphi_r = numerics::d_rho(phi, exec);
    const AxialField dphi_z = numerics::d_z(phi, exec);
    const AxialField db_r = numerics::d_rho(b, exec);
    const AxialField db_z = numerics::d_z(b, exec);
    const cplx I(0.0, 1.0);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const cplx grad_dot = dphi_r.values()[idx] * db_r.values()[idx] + dphi_z.values()[idx] * db_z.values()[idx];
        f.values()[idx] = -f.values()[idx] - 2.0 * I * grad_dot +
                          (q.values()[idx] - I * lap_phi.values()[idx]) * b.values()[idx];
    }
    return f;
}

std::vector<AxialField> solve(const AxialTransportInput& input, Execution exec) {
    if (input.order < 0) throw ParameterError("transport order must be non-negative");
    std::vector<AxialField> b;
    AxialField one(input.grid);
    for (auto& value : one.values()) value = 1.0;
    b.push_back(std::move(one));
    for (int n = 0; n < input.order; ++n) {
        const AxialField f = source(input, b.back(), exec);
        if (input.sign == Sign::minus) {
            b.push_back(numerics::cumulative_z(f, numerics::Anchor::lower, exec));
        } else {
            AxialField next = numerics::cumulative_z(f, numerics::Anchor::upper, exec);
            for (auto& value : next.values()) value = -value;
            b.push_back(std::move(next));
        }
    }
    return b;
}

}  // namespace scatterlab::transport
