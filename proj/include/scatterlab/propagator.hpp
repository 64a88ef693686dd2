#pragma once

// Time-dependent scattering on a line and in the l = 0 radial channel: split-step evolution,
// free asymptotics, Moller-limit probes (plain and modified) and a time-domain S-matrix.

#include <complex>
#include <functional>
#include <vector>

#include "scatterlab/execution.hpp"
#include "scatterlab/potentials.hpp"

namespace scatterlab::propagator {

using cplx = std::complex<double>;

// line:   x_j = (j - n/2) dx, values are psi(x).
// radial: r_j = j dx, values are u(r) = r psi(r) with u(0) = 0; the kinetic step acts on the
//         odd extension of u, which is the Dirichlet (sine) transform.
enum class Geometry { line, radial };

struct WavePacket {
    Geometry geometry = Geometry::line;
    double dx = 0.0;
    double t = 0.0;
    std::vector<cplx> values;
    bool valid = true;             // false once edge mass exceeded the monitor threshold
    double max_edge_fraction = 0.0;  // largest edge mass fraction seen during evolution

    std::size_t size() const { return values.size(); }
    double coordinate(std::size_t j) const;
    double norm() const;  // L2 norm on the grid (half-line for radial)
};

struct GridSpec {
    Geometry geometry = Geometry::line;
    int n = 1 << 14;  // power of two
    double dx = 0.0;
};

// 2^14 points with the k = 2 packet at T = 320 at 60% of the half-extent.
GridSpec default_line_grid();

// Normalized Gaussian (2 pi sigma^2)^{-1/4} exp(-(x - x0)^2 / (4 sigma^2) + i k0 (x - x0)).
// On the radial grid the profile is u(r) with u(0) forced to zero; use x0 >> sigma.
WavePacket gaussian_packet(const GridSpec& grid, double x0, double sigma, double k0);

// Unitary Fourier profile fhat(xi) = (2 pi)^{-1/2} int e^{-i x xi} f(x) dx of that Gaussian.
std::function<cplx(double)> gaussian_profile(double x0, double sigma, double k0);

struct EvolutionConfig {
    double dt = 0.0;  // 0 = 0.45 / lambda_max
    PotentialModel model = PotentialModel::zero();
    double edge_fraction = 0.1;     // outer fraction of the grid that is monitored
    double edge_threshold = 1e-6;   // mass in the monitored band, relative to the total
    int monitor_every = 64;         // steps between edge checks
};

double max_kinetic_eigenvalue(double dx);  // (pi / dx)^2

// Strang splitting e^{-iV h/2} e^{-iH0 h} e^{-iV h/2} from packet.t to t_target (either direction),
// kinetic factor exact in Fourier space. Throws ParameterError when dt lambda_max >= 0.5.
WavePacket split_step_evolve(const WavePacket& packet, const EvolutionConfig& config, double t_target,
                             Execution exec = Execution::parallel);

// e^{-iH0 tau} applied exactly in one Fourier step.
WavePacket free_evolve(const WavePacket& packet, double tau, Execution exec = Execution::parallel);

// e^{i|x|^2/4t} (2it)^{-1/2} fhat(x / 2t) on the grid; the radial channel uses the same
// one-dimensional form for the odd extension of u.
WavePacket free_asymptotics(const std::function<cplx(double)>& fhat, double t, const GridSpec& grid);

// w(x) = int_0^1 v(s x) ds: closed form for power tails with rho = 1, Gauss-Legendre otherwise.
double line_average(const PotentialModel& model, double x);

// Asymptotic modified free evolution exp(i Xi) (2it)^{-1/2} fhat(x / 2t) with
// Xi(x, t) = |x|^2 / 4t - t w(x).
WavePacket modified_free_evolution(const PotentialModel& model, const std::function<cplx(double)>& fhat, double t,
                                   const GridSpec& grid);

// Finite-time form used by the modified probe: e^{-i t w(x)} e^{-i t H0} f. It differs from the
// asymptotic form by the O(1/t) dispersion remainder of the free flow only.
WavePacket modified_free_propagate(const PotentialModel& model, const WavePacket& f, double t,
                                   Execution exec = Execution::parallel);

struct CauchyReport {
    // Increments at or below this are round-off: they neither break monotonicity nor bound the ratio.
    static constexpr double noise_floor = 1e-9;

    std::vector<double> times;
    std::vector<double> increments;  // ||g(T_{j+1}) - g(T_j)||
    double decay_ratio = 0.0;        // increments.front() / max(increments.back(), noise_floor)
    bool monotone = false;           // non-increasing above the noise floor
    bool converging = false;  // monotone and decay_ratio >= 10, or every increment at the floor
    bool plateau = false;     // decay_ratio < 2 above the floor
    bool valid = true;        // false if any evolution touched the edge monitor
    bool modified = false;
    WavePacket limit;         // g(T_last), only when requested
};

struct ProbeSettings {
    EvolutionConfig evolution;  // model is taken from the probe argument
    bool compute_limit = false;
};

// g(T) = e^{iHT} e^{-iH0 T} f0. Increments use the unitary identity
// ||g(T') - g(T)|| = ||e^{-iH0 T'} f0 - e^{-iH (T' - T)} e^{-iH0 T} f0||.
CauchyReport moller_probe(const PotentialModel& model, const WavePacket& f0, const std::vector<double>& times,
                          const ProbeSettings& settings = {}, Execution exec = Execution::parallel);

// Same with U0(T) = e^{-iT w} e^{-iH0 T} in place of e^{-iH0 T}.
CauchyReport modified_moller_probe(const PotentialModel& model, const WavePacket& f0,
                                   const std::vector<double>& times, const ProbeSettings& settings = {},
                                   Execution exec = Execution::parallel);

struct TimeDomainPhase {
    cplx value;            // e^{2 i delta_0}
    double bandwidth = 0;  // relative momentum spread 1 / (2 sigma k)
    double start_radius = 0;
    double duration = 0;
    bool valid = true;
};

// An incoming l = 0 packet of spatial width sigma at momentum k is evolved through v and, separately,
// freely; the ratio of their outgoing Fourier components at k is e^{2 i delta_0}.
TimeDomainPhase scattering_phase_from_time_domain(const PotentialModel& model, double k, double sigma,
                                                  Execution exec = Execution::parallel);

}  // namespace scatterlab::propagator
