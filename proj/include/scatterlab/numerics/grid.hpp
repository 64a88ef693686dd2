#pragma once

#include <vector>

namespace scatterlab::numerics {

// Origin-centered uniform grid, n points per axis, spacing dx.
// Axis coordinates are (i - n/2) dx for i = 0 .. n-1.
class UniformGrid {
public:
    UniformGrid(int dimension, int n, double dx);

    int dimension() const { return dimension_; }
    int n() const { return n_; }
    double dx() const { return dx_; }
    double half_extent() const { return 0.5 * n_ * dx_; }
    long long total_points() const;

    double coordinate(int i) const { return (i - n_ / 2) * dx_; }
    std::vector<double> axis() const;

private:
    int dimension_;
    int n_;
    double dx_;
};

}  // namespace scatterlab::numerics
