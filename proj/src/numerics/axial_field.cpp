#include "scatterlab/numerics/axial_field.hpp"

#include <algorithm>
#include <cmath>

#include "scatterlab/error.hpp"

namespace scatterlab::numerics {

AxialGrid AxialGrid::covering(double rho_max, double z_extent, double h) {
    if (!(h > 0.0) || !(rho_max > 4.0 * h) || !(z_extent > 4.0 * h))
        throw ParameterError("AxialGrid: extents must exceed four grid spacings");
    AxialGrid g;
    g.h = h;
    g.n_rho = static_cast<int>(std::ceil(rho_max / h)) + 1;
    const int half = static_cast<int>(std::ceil(z_extent / h));
    g.n_z = 2 * half + 1;
    g.z_min = -half * h;
    return g;
}

AxialField::AxialField(const AxialGrid& grid, Parity parity)
    : grid_(grid), parity_(parity), values_(grid.size(), cplx{}) {}

namespace {

// Lagrange weights for nodes at -1, 0, 1, 2 relative offset t in [0, 1).
void lagrange4(double t, double w[4]) {
    w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
    w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
}

}  // namespace

cplx AxialField::sample(double rho, double z) const {
    const AxialGrid& g = grid_;
    const double outer_sign = (rho < 0.0 && parity_ == Parity::odd) ? -1.0 : 1.0;
    rho = std::abs(rho);
    const double rho_clamped = std::min(rho, g.rho_max());
    const double z_clamped = std::clamp(z, g.z_min, g.z_max());

    const double u = rho_clamped / g.h;
    int i1 = static_cast<int>(std::floor(u));
    i1 = std::min(i1, g.n_rho - 3);
    const double tu = u - i1;

    const double s = (z_clamped - g.z_min) / g.h;
    int j1 = static_cast<int>(std::floor(s));
    j1 = std::clamp(j1, 1, g.n_z - 3);
    const double ts = s - j1;

    double wr[4];
    double wz[4];
    lagrange4(tu, wr);
    lagrange4(ts, wz);

    cplx total{};
    for (int a = 0; a < 4; ++a) {
        int i = i1 - 1 + a;
        double sign = 1.0;
        if (i < 0) {
            i = -i;
            if (parity_ == Parity::odd) sign = -1.0;
        }
        cplx row{};
        for (int b = 0; b < 4; ++b) row += wz[b] * values_[g.index(i, j1 - 1 + b)];
        total += (sign * wr[a]) * row;
    }
    return outer_sign * total;
}

namespace {

// Value at rho index i, reflecting negative indices by parity.
inline cplx rho_value(const AxialField& f, int i, int j) {
    if (i >= 0) return f.at(i, j);
    return f.parity() == Parity::even ? f.at(-i, j) : -f.at(-i, j);
}

Parity flip(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }

}  // namespace

AxialField d_rho(const AxialField& f, Execution exec) {
    const AxialGrid& g = f.grid();
    AxialField out(g, flip(f.parity()));
    const double inv12h = 1.0 / (12.0 * g.h);
    const double inv2h = 1.0 / (2.0 * g.h);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (int i = 0; i < g.n_rho; ++i) {
        for (int j = 0; j < g.n_z; ++j) {
            cplx d;
            if (i + 2 < g.n_rho) {
                d = (-f.at(i + 2, j) + 8.0 * f.at(i + 1, j) - 8.0 * rho_value(f, i - 1, j) + rho_value(f, i - 2, j)) *
                    inv12h;
            } else if (i + 1 < g.n_rho) {
                d = (f.at(i + 1, j) - f.at(i - 1, j)) * inv2h;
            } else {
                d = (3.0 * f.at(i, j) - 4.0 * f.at(i - 1, j) + f.at(i - 2, j)) * inv2h;
            }
            out.at(i, j) = d;
        }
    }
    return out;
}

AxialField d_z(const AxialField& f, Execution exec) {
    const AxialGrid& g = f.grid();
    AxialField out(g, f.parity());
    const double inv12h = 1.0 / (12.0 * g.h);
    const double inv2h = 1.0 / (2.0 * g.h);
    const int nz = g.n_z;
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (int i = 0; i < g.n_rho; ++i) {
        for (int j = 0; j < nz; ++j) {
            cplx d;
            if (j >= 2 && j + 2 < nz) {
                d = (-f.at(i, j + 2) + 8.0 * f.at(i, j + 1) - 8.0 * f.at(i, j - 1) + f.at(i, j - 2)) * inv12h;
            } else if (j == 0) {
                d = (-3.0 * f.at(i, 0) + 4.0 * f.at(i, 1) - f.at(i, 2)) * inv2h;
            } else if (j == nz - 1) {
                d = (3.0 * f.at(i, j) - 4.0 * f.at(i, j - 1) + f.at(i, j - 2)) * inv2h;
            } else {
                d = (f.at(i, j + 1) - f.at(i, j - 1)) * inv2h;
            }
            out.at(i, j) = d;
        }
    }
    return out;
}

AxialField laplacian(const AxialField& f, Execution exec) {
    const AxialGrid& g = f.grid();
    if (f.parity() != Parity::even) throw ParameterError("laplacian: axisymmetric fields must be even in rho");
    AxialField out(g, Parity::even);
    const double h2 = g.h * g.h;
    const double inv12h2 = 1.0 / (12.0 * h2);
    const double inv12h = 1.0 / (12.0 * g.h);
    const int nz = g.n_z;
    const int nr = g.n_rho;
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nz; ++j) {
            cplx dzz;
            if (j >= 2 && j + 2 < nz) {
                dzz = (-f.at(i, j + 2) + 16.0 * f.at(i, j + 1) - 30.0 * f.at(i, j) + 16.0 * f.at(i, j - 1) -
                       f.at(i, j - 2)) *
                      inv12h2;
            } else if (j == 0) {
                dzz = (2.0 * f.at(i, 0) - 5.0 * f.at(i, 1) + 4.0 * f.at(i, 2) - f.at(i, 3)) / h2;
            } else if (j == nz - 1) {
                dzz = (2.0 * f.at(i, j) - 5.0 * f.at(i, j - 1) + 4.0 * f.at(i, j - 2) - f.at(i, j - 3)) / h2;
            } else {
                dzz = (f.at(i, j + 1) - 2.0 * f.at(i, j) + f.at(i, j - 1)) / h2;
            }

            cplx perp;
            if (i + 2 < nr) {
                const cplx fp2 = f.at(i + 2, j);
                const cplx fp1 = f.at(i + 1, j);
                const cplx fm1 = rho_value(f, i - 1, j);
                const cplx fm2 = rho_value(f, i - 2, j);
                const cplx drr = (-fp2 + 16.0 * fp1 - 30.0 * f.at(i, j) + 16.0 * fm1 - fm2) * inv12h2;
                if (i == 0) {
                    perp = 2.0 * drr;
                } else {
                    const cplx dr = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) * inv12h;
                    perp = drr + dr / g.rho(i);
                }
            } else {
                const cplx drr = (2.0 * f.at(i, j) - 5.0 * f.at(i - 1, j) + 4.0 * f.at(i - 2, j) - f.at(i - 3, j)) / h2;
                const cplx dr = (3.0 * f.at(i, j) - 4.0 * f.at(i - 1, j) + f.at(i - 2, j)) / (2.0 * g.h);
                perp = drr + dr / g.rho(i);
            }
            out.at(i, j) = perp + dzz;
        }
    }
    return out;
}

AxialField cumulative_z(const AxialField& f, Anchor anchor, Execution exec) {
    const AxialGrid& g = f.grid();
    if (g.n_z < 4) throw ParameterError("cumulative_z: need at least four z nodes");
    AxialField out(g, f.parity());
    const double c = g.h / 24.0;
    const int nz = g.n_z;
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (int i = 0; i < g.n_rho; ++i) {
        // Integral over [z_j, z_{j+1}] from the cubic through four neighbouring nodes.
        auto panel = [&](int j) -> cplx {
            if (j == 0) return c * (9.0 * f.at(i, 0) + 19.0 * f.at(i, 1) - 5.0 * f.at(i, 2) + f.at(i, 3));
            if (j == nz - 2)
                return c * (9.0 * f.at(i, nz - 1) + 19.0 * f.at(i, nz - 2) - 5.0 * f.at(i, nz - 3) + f.at(i, nz - 4));
            return c * (-f.at(i, j - 1) + 13.0 * f.at(i, j) + 13.0 * f.at(i, j + 1) - f.at(i, j + 2));
        };
        if (anchor == Anchor::lower) {
            cplx acc{};
            out.at(i, 0) = acc;
            for (int j = 0; j + 1 < nz; ++j) {
                acc += panel(j);
                out.at(i, j + 1) = acc;
            }
        } else {
            cplx acc{};
            out.at(i, nz - 1) = acc;
            for (int j = nz - 2; j >= 0; --j) {
                acc += panel(j);
                out.at(i, j) = acc;
            }
        }
    }
    return out;
}

}  // namespace scatterlab::numerics
