#include "scatterlab/numerics/fft.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "scatterlab/error.hpp"

namespace scatterlab::numerics {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) throw ParameterError("FFT length must be a power of two, got " + std::to_string(n));
    bitrev_.resize(n);
    int bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        bitrev_[i] = r;
    }
    twiddle_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        twiddle_[k] = {std::cos(angle), std::sin(angle)};
    }
}

void FftPlan::transform(std::span<cplx> data, Direction dir) const {
    if (data.size() != n_) throw ParameterError("FftPlan::transform: length mismatch");
    for (std::size_t i = 0; i < n_; ++i)
        if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
    // Plain real arithmetic avoids the NaN-recovery path of std::complex multiplication.
    double* d = reinterpret_cast<double*>(data.data());
    const double* tw = reinterpret_cast<const double*>(twiddle_.data());
    const double sgn = dir == Direction::inverse ? -1.0 : 1.0;
    for (std::size_t i = 0; i + 1 < n_; i += 2) {
        const double ar = d[2 * i], ai = d[2 * i + 1], br = d[2 * i + 2], bi = d[2 * i + 3];
        d[2 * i] = ar + br;
        d[2 * i + 1] = ai + bi;
        d[2 * i + 2] = ar - br;
        d[2 * i + 3] = ai - bi;
    }
    std::vector<double> stage(n_);
    for (std::size_t len = 4; len <= n_; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n_ / len;
        for (std::size_t j = 0; j < half; ++j) {
            stage[2 * j] = tw[2 * j * stride];
            stage[2 * j + 1] = sgn * tw[2 * j * stride + 1];
        }
        for (std::size_t start = 0; start < n_; start += len) {
            double* lo = d + 2 * start;
            double* hi = lo + 2 * half;
            for (std::size_t j = 0; j < half; ++j) {
                const double wr = stage[2 * j], wi = stage[2 * j + 1];
                const double xr = hi[2 * j], xi = hi[2 * j + 1];
                const double br = wr * xr - wi * xi;
                const double bi = wr * xi + wi * xr;
                const double ar = lo[2 * j], ai = lo[2 * j + 1];
                lo[2 * j] = ar + br;
                lo[2 * j + 1] = ai + bi;
                hi[2 * j] = ar - br;
                hi[2 * j + 1] = ai - bi;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (std::size_t i = 0; i < 2 * n_; ++i) d[i] *= scale;
}

std::vector<cplx> dft(std::span<const cplx> values, Direction dir) {
    FftPlan plan(values.size());
    std::vector<cplx> out(values.begin(), values.end());
    plan.transform(out, dir);
    return out;
}

std::vector<double> fft_frequencies(std::size_t n, double dx) {
    std::vector<double> p(n);
    const double base = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
    const auto half = static_cast<long long>(n / 2);
    for (std::size_t m = 0; m < n; ++m) {
        const long long idx = static_cast<long long>(m) < half ? static_cast<long long>(m)
                                                               : static_cast<long long>(m) - static_cast<long long>(n);
        p[m] = base * static_cast<double>(idx);
    }
    return p;
}

}  // namespace scatterlab::numerics
