#pragma once

#include <complex>
#include <vector>

#include "scatterlab/execution.hpp"

namespace scatterlab::numerics {

using cplx = std::complex<double>;

// Cylindrical (rho, z) lattice for axisymmetric fields: rho_i = i h, z_j = z_min + j h.
struct AxialGrid {
    double h = 0.025;
    int n_rho = 0;
    int n_z = 0;
    double z_min = 0.0;

    // Grid covering rho in [0, rho_max] and z in [-z_extent, z_extent].
    static AxialGrid covering(double rho_max, double z_extent, double h);

    double rho(int i) const { return i * h; }
    double z(int j) const { return z_min + j * h; }
    double rho_max() const { return (n_rho - 1) * h; }
    double z_max() const { return z_min + (n_z - 1) * h; }
    std::size_t size() const { return static_cast<std::size_t>(n_rho) * n_z; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_z + j; }
};

// Parity of a field under rho -> -rho, used when interpolating across the axis.
enum class Parity { even, odd };

class AxialField {
public:
    AxialField() = default;
    explicit AxialField(const AxialGrid& grid, Parity parity = Parity::even);

    const AxialGrid& grid() const { return grid_; }
    Parity parity() const { return parity_; }

    cplx& at(int i, int j) { return values_[grid_.index(i, j)]; }
    const cplx& at(int i, int j) const { return values_[grid_.index(i, j)]; }
    std::vector<cplx>& values() { return values_; }
    const std::vector<cplx>& values() const { return values_; }

    // Bicubic (4x4 Lagrange) interpolation. Reflects across the axis according to
    // the parity and clamps to the nearest edge outside the lattice.
    cplx sample(double rho, double z) const;

private:
    AxialGrid grid_;
    Parity parity_ = Parity::even;
    std::vector<cplx> values_;
};

// Fourth-order central differences; second order at the outer edges.
AxialField d_rho(const AxialField& f, Execution exec = Execution::parallel);
AxialField d_z(const AxialField& f, Execution exec = Execution::parallel);

// Axisymmetric Laplacian d2/drho2 + (1/rho) d/drho + d2/dz2 (2 d2/drho2 + d2/dz2 on the axis).
AxialField laplacian(const AxialField& f, Execution exec = Execution::parallel);

enum class Anchor { lower, upper };

// lower: F(rho, z) = int_{z_min}^{z} f dz'.  upper: F(rho, z) = int_{z}^{z_max} f dz'.
// Cubic-interpolant panel rule, fourth order.
AxialField cumulative_z(const AxialField& f, Anchor anchor, Execution exec = Execution::parallel);

}  // namespace scatterlab::numerics
