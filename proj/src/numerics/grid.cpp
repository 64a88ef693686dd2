#include "scatterlab/numerics/grid.hpp"

#include <string>

#include "scatterlab/error.hpp"

namespace scatterlab::numerics {

UniformGrid::UniformGrid(int dimension, int n, double dx) : dimension_(dimension), n_(n), dx_(dx) {
    if (dimension != 1 && dimension != 3) throw ParameterError("UniformGrid: dimension must be 1 or 3");
    if (n < 8 || n % 2 != 0) throw ParameterError("UniformGrid: n must be even and >= 8, got " + std::to_string(n));
    if (!(dx > 0.0)) throw ParameterError("UniformGrid: dx must be positive");
}

long long UniformGrid::total_points() const {
    long long total = 1;
    for (int d = 0; d < dimension_; ++d) total *= n_;
    return total;
}

std::vector<double> UniformGrid::axis() const {
    std::vector<double> x(n_);
    for (int i = 0; i < n_; ++i) x[i] = coordinate(i);
    return x;
}

}  // namespace scatterlab::numerics
