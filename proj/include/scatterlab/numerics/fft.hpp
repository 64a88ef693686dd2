#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace scatterlab::numerics {

using cplx = std::complex<double>;

enum class Direction { forward, inverse };

bool is_power_of_two(std::size_t n);

// Radix-2 transform with unitary normalization:
//   forward: X_k = n^{-1/2} sum_j x_j exp(-2 pi i jk / n)
//   inverse: x_j = n^{-1/2} sum_k X_k exp(+2 pi i jk / n)
// Twiddles and the bit-reversal permutation are computed once per plan.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const { return n_; }

    void transform(std::span<cplx> data, Direction dir) const;

private:
    std::size_t n_;
    std::vector<std::size_t> bitrev_;
    std::vector<cplx> twiddle_;  // exp(-2 pi i k / n), k < n/2
};

// Out-of-place convenience wrapper. Throws ParameterError unless the length is a power of two.
std::vector<cplx> dft(std::span<const cplx> values, Direction dir);

// Angular frequencies matching the DFT bin ordering for spacing dx:
// 2 pi m / (n dx) with m = 0, 1, ..., n/2 - 1, -n/2, ..., -1.
std::vector<double> fft_frequencies(std::size_t n, double dx);

}  // namespace scatterlab::numerics
