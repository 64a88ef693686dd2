#pragma once

#include <complex>
#include <string>
#include <vector>

#include "scatterlab/execution.hpp"
#include "scatterlab/potentials.hpp"

namespace scatterlab::partialwave {

using cplx = std::complex<double>;

struct RadialSettings {
    double r_max = 0.0;  // 0 selects default_r_max(model, k)
    double dr = 1e-3;
};

// Support radius at the 1e-12 level plus one wavelength of matching room.
double default_r_max(const PotentialModel& model, double k);

// Phase shift of channel l at momentum k by Numerov integration and two-radius
// matching against j_l, y_l. Reduced to (-pi/2, pi/2].
double radial_phase_shift(const PotentialModel& model, int l, double k, double r_max, double dr);
double radial_phase_shift(const PotentialModel& model, int l, double k, const RadialSettings& settings = {});

struct PhaseShiftTable {
    double k = 0.0;
    int l_max = 0;
    std::vector<double> delta;
    std::string model_kind;
    double r_max = 0.0;
    double dr = 0.0;
    // |delta_l| non-increasing over the last five channels.
    bool tail_monotone = true;

    double lambda() const { return k * k; }
};

// Requires l_max >= ceil(k * range) + 8 with range the model's range parameter.
PhaseShiftTable phase_shift_table(const PotentialModel& model, double k, int l_max, const RadialSettings& settings = {},
                                  Execution exec = Execution::parallel);

struct SMatrixSpectrum {
    std::vector<cplx> eigenvalues;  // e^{2 i delta_l}
    std::vector<int> multiplicity;  // 2l + 1
};

SMatrixSpectrum smatrix_eigenvalues(const PhaseShiftTable& table);

// f(theta) = (2ik)^{-1} sum_l (2l+1)(e^{2 i delta_l} - 1) P_l(cos theta), for 0 <= theta <= pi.
cplx amplitude(const PhaseShiftTable& table, double theta);

struct AmplitudeKernel {
    double lambda = 0.0;
    std::vector<double> theta;
    std::vector<cplx> values;
    // The amplitude is the textbook f(theta); the kernel of S(lambda) - Id is (ik/2pi) f.
    std::string normalization = "f(theta); kernel of S - Id = (ik/2pi) f";
    std::vector<std::string> flags;
};

AmplitudeKernel amplitude_kernel(const PhaseShiftTable& table, const std::vector<double>& thetas);

// Off-diagonal kernel of S(lambda): (ik/2pi) f(theta).
cplx smatrix_kernel(const PhaseShiftTable& table, double theta);

// Singular values of the truncated S-matrix assembled on the sphere from its kernel
// delta + (ik/2pi) f, discretized by Gauss-Legendre in cos(theta) and a trapezoid rule in
// phi (exact for l <= l_max), block by block in the azimuthal number m.
std::vector<double> assembled_smatrix_singular_values(const PhaseShiftTable& table);

struct InOutDecomposition {
    cplx b_minus;
    cplx b_plus;
    double condition = 0.0;
    double residual = 0.0;  // relative least-squares residual
};

// Fits the channel solution u_l(r) to c_- h^-(kr) + c_+ h^+(kr) with Riccati-Hankel
// functions h^{+-} ~ e^{+-i(kr - l pi/2)}. Reports b_+ = c_+ and b_- = -c_-, so that
// b_+ = e^{2 i delta_l} b_-.
InOutDecomposition radial_in_out_decomposition(const PotentialModel& model, int l, double k,
                                               const std::vector<double>& r_samples, double dr = 1e-3);

}  // namespace scatterlab::partialwave
