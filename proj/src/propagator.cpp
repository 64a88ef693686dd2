#include "scatterlab/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "scatterlab/error.hpp"
#include "scatterlab/numerics/fft.hpp"
#include "scatterlab/numerics/quadrature.hpp"

namespace scatterlab::propagator {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

void check_grid(const GridSpec& g) {
    if (g.n < 8 || !numerics::is_power_of_two(static_cast<std::size_t>(g.n)))
        throw ParameterError("propagator: grid size must be a power of two >= 8");
    if (!(g.dx > 0.0)) throw ParameterError("propagator: grid spacing must be positive");
}

double grid_coordinate(Geometry geometry, std::size_t n, double dx, std::size_t j) {
    return geometry == Geometry::line ? (static_cast<double>(j) - static_cast<double>(n / 2)) * dx
                                      : static_cast<double>(j) * dx;
}

// Cell averages over [x_j - dx/2, x_j + dx/2]: second order for smooth v, and a jump inside a cell
// contributes its exact position instead of an O(dx) offset.
std::vector<double> sample_potential(const PotentialModel& model, const WavePacket& p) {
    constexpr int sub = 16;
    std::vector<double> v(p.size());
    if (model.kind() == PotentialKind::zero) return v;
    for (std::size_t j = 0; j < p.size(); ++j) {
        double s = 0.0;
        for (int i = 0; i < sub; ++i) {
            const double x = p.coordinate(j) + p.dx * ((i + 0.5) / sub - 0.5);
            s += model.evaluate({std::abs(x), 0.0, 0.0});
        }
        v[j] = s / sub;
    }
    return v;
}

// Kinetic propagator e^{-i p^2 h} on the working buffer: the packet itself on a line, the odd
// extension of u (length 2n) in the radial channel.
class KineticStep {
public:
    KineticStep(const WavePacket& p, double h)
        : radial_(p.geometry == Geometry::radial),
          n_(p.size()),
          plan_(radial_ ? 2 * n_ : n_),
          buffer_(plan_.size()),
          phase_(plan_.size()) {
        const auto freq = numerics::fft_frequencies(plan_.size(), p.dx);
        for (std::size_t m = 0; m < phase_.size(); ++m) phase_[m] = std::exp(-I * freq[m] * freq[m] * h);
    }

    void apply(std::vector<cplx>& values, Execution exec) {
        const long N = static_cast<long>(buffer_.size());
        if (radial_) {
            const long n = static_cast<long>(n_);
            buffer_[0] = 0.0;
            buffer_[n] = 0.0;
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
            for (long j = 1; j < n; ++j) {
                buffer_[j] = values[j];
                buffer_[2 * n - j] = -values[j];
            }
        } else {
            std::copy(values.begin(), values.end(), buffer_.begin());
        }
        plan_.transform(buffer_, numerics::Direction::forward);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
        for (long m = 0; m < N; ++m) buffer_[m] *= phase_[m];
        plan_.transform(buffer_, numerics::Direction::inverse);
        if (radial_) {
            values[0] = 0.0;
            std::copy(buffer_.begin() + 1, buffer_.begin() + static_cast<long>(n_), values.begin() + 1);
        } else {
            std::copy(buffer_.begin(), buffer_.end(), values.begin());
        }
    }

private:
    bool radial_;
    std::size_t n_;
    numerics::FftPlan plan_;
    std::vector<cplx> buffer_;
    std::vector<cplx> phase_;
};

double edge_mass_fraction(const WavePacket& p, double band) {
    const std::size_t n = p.size();
    const auto cut = static_cast<std::size_t>(std::ceil(band * static_cast<double>(n)));
    double edge = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double m = std::norm(p.values[j]);
        total += m;
        const bool outer = p.geometry == Geometry::line ? (j < cut || j >= n - cut) : j >= n - cut;
        if (outer) edge += m;
    }
    return total > 0.0 ? edge / total : 0.0;
}

void monitor(WavePacket& p, const EvolutionConfig& c) {
    const double f = edge_mass_fraction(p, c.edge_fraction);
    p.max_edge_fraction = std::max(p.max_edge_fraction, f);
    if (f > c.edge_threshold) p.valid = false;
}

double distance(const WavePacket& a, const WavePacket& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a.values[j] - b.values[j]);
    return std::sqrt(s * a.dx);
}

WavePacket empty_like(const GridSpec& g, double t) {
    WavePacket p;
    p.geometry = g.geometry;
    p.dx = g.dx;
    p.t = t;
    p.values.assign(static_cast<std::size_t>(g.n), 0.0);
    return p;
}

}  // namespace

double WavePacket::coordinate(std::size_t j) const { return grid_coordinate(geometry, values.size(), dx, j); }

double WavePacket::norm() const {
    double s = 0.0;
    for (const cplx& v : values) s += std::norm(v);
    return std::sqrt(s * dx);
}

GridSpec default_line_grid() {
    GridSpec g;
    g.n = 1 << 14;
    g.dx = 2.0 * (1280.0 / 0.6) / g.n;
    return g;
}

double max_kinetic_eigenvalue(double dx) { return (pi / dx) * (pi / dx); }

WavePacket gaussian_packet(const GridSpec& grid, double x0, double sigma, double k0) {
    check_grid(grid);
    if (!(sigma > 0.0)) throw ParameterError("gaussian_packet: sigma must be positive");
    WavePacket p = empty_like(grid, 0.0);
    const double amp = std::pow(2.0 * pi * sigma * sigma, -0.25);
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double y = p.coordinate(j) - x0;
        p.values[j] = amp * std::exp(-y * y / (4.0 * sigma * sigma) + I * k0 * y);
    }
    if (grid.geometry == Geometry::radial) {
        p.values[0] = 0.0;
        const double nrm = p.norm();
        for (cplx& v : p.values) v /= nrm;
    }
    return p;
}

std::function<cplx(double)> gaussian_profile(double x0, double sigma, double k0) {
    if (!(sigma > 0.0)) throw ParameterError("gaussian_profile: sigma must be positive");
    const double amp = std::pow(2.0 * sigma * sigma / pi, 0.25);
    return [=](double xi) { return amp * std::exp(-sigma * sigma * (xi - k0) * (xi - k0) - I * xi * x0); };
}

WavePacket split_step_evolve(const WavePacket& packet, const EvolutionConfig& config, double t_target,
                             Execution exec) {
    if (packet.size() < 8 || !numerics::is_power_of_two(packet.size()))
        throw ParameterError("split_step_evolve: grid size must be a power of two >= 8");
    const double lambda_max = max_kinetic_eigenvalue(packet.dx);
    const double dt = config.dt > 0.0 ? config.dt : 0.45 / lambda_max;
    if (!(dt * lambda_max < 0.5))
        throw ParameterError("split_step_evolve: dt lambda_max = " + std::to_string(dt * lambda_max) +
                             " violates the stability guard (< 0.5)");
    if (!(config.edge_fraction > 0.0 && config.edge_fraction < 0.5))
        throw ParameterError("split_step_evolve: edge fraction must lie in (0, 1/2)");
    WavePacket out = packet;
    const double span = t_target - packet.t;
    if (span == 0.0) return out;
    const long steps = std::max(1L, static_cast<long>(std::ceil(std::abs(span) / dt - 1e-9)));
    const double h = span / static_cast<double>(steps);

    const std::vector<double> v = sample_potential(config.model, packet);
    const long n = static_cast<long>(packet.size());
    std::vector<cplx> half(n);
    std::vector<cplx> full(n);
    for (long j = 0; j < n; ++j) {
        half[j] = std::exp(-I * v[j] * (0.5 * h));
        full[j] = half[j] * half[j];
    }
    KineticStep kinetic(packet, h);
    auto multiply = [&](const std::vector<cplx>& f) {
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
        for (long j = 0; j < n; ++j) out.values[j] *= f[j];
    };

    multiply(half);
    for (long s = 0; s < steps; ++s) {
        kinetic.apply(out.values, exec);
        multiply(s + 1 < steps ? full : half);
        if ((s + 1) % std::max(1, config.monitor_every) == 0) monitor(out, config);
    }
    monitor(out, config);
    out.t = t_target;
    return out;
}

WavePacket free_evolve(const WavePacket& packet, double tau, Execution exec) {
    if (packet.size() < 8 || !numerics::is_power_of_two(packet.size()))
        throw ParameterError("free_evolve: grid size must be a power of two >= 8");
    WavePacket out = packet;
    if (tau == 0.0) return out;
    KineticStep kinetic(packet, tau);
    kinetic.apply(out.values, exec);
    out.t = packet.t + tau;
    return out;
}

WavePacket free_asymptotics(const std::function<cplx(double)>& fhat, double t, const GridSpec& grid) {
    check_grid(grid);
    if (t == 0.0) throw ParameterError("free_asymptotics: t must be nonzero");
    WavePacket p = empty_like(grid, t);
    const cplx pref = 1.0 / std::sqrt(2.0 * I * t);
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double x = p.coordinate(j);
        p.values[j] = std::exp(I * x * x / (4.0 * t)) * pref * fhat(x / (2.0 * t));
    }
    if (grid.geometry == Geometry::radial) p.values[0] = 0.0;
    return p;
}

double line_average(const PotentialModel& model, double x) {
    const double r = std::abs(x);
    if (model.kind() == PotentialKind::zero) return 0.0;
    if (model.kind() == PotentialKind::power_tail && model.rho() == 1.0)
        return r < 1e-8 ? model.strength() : model.strength() * std::asinh(r) / r;
    // Panels scale with |x| so the profile of v is resolved on [0, |x|].
    static const numerics::QuadratureRule rule = numerics::composite_gauss_legendre(8, 16, 0.0, 1.0);
    const double breaks = std::max(1.0, r / 2.0);
    const int panels = static_cast<int>(std::ceil(breaks));
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = static_cast<double>(p) / panels;
        const double b = static_cast<double>(p + 1) / panels;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double s = a + (b - a) * rule.nodes[i];
            total += (b - a) * rule.weights[i] * model.evaluate({s * r, 0.0, 0.0});
        }
    }
    return total;
}

WavePacket modified_free_evolution(const PotentialModel& model, const std::function<cplx(double)>& fhat, double t,
                                   const GridSpec& grid) {
    if (model.kind() != PotentialKind::zero && !(model.rho() > 0.5))
        throw DomainError("modified_free_evolution: requires rho > 1/2");
    WavePacket p = free_asymptotics(fhat, t, grid);
    if (model.kind() == PotentialKind::zero) return p;
    for (std::size_t j = 0; j < p.size(); ++j) p.values[j] *= std::exp(-I * t * line_average(model, p.coordinate(j)));
    return p;
}

WavePacket modified_free_propagate(const PotentialModel& model, const WavePacket& f, double t, Execution exec) {
    if (model.kind() != PotentialKind::zero && !(model.rho() > 0.5))
        throw DomainError("modified_free_propagate: requires rho > 1/2");
    WavePacket p = free_evolve(f, t, exec);
    if (model.kind() == PotentialKind::zero) return p;
    const long n = static_cast<long>(p.size());
    ExceptionSlot failure;
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (long j = 0; j < n; ++j)
        failure.capture([&] { p.values[j] *= std::exp(-I * t * line_average(model, p.coordinate(j))); });
    failure.rethrow_if_set();
    return p;
}

namespace {

CauchyReport cauchy_probe(const PotentialModel& model, const WavePacket& f0, const std::vector<double>& times,
                          const ProbeSettings& settings, bool modified, Execution exec) {
    if (times.size() < 2) throw ParameterError("moller_probe: need at least two times");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw ParameterError("moller_probe: times must increase");
    if (!(times.front() > 0.0)) throw ParameterError("moller_probe: times must be positive");
    EvolutionConfig config = settings.evolution;
    config.model = model;

    CauchyReport report;
    report.times = times;
    report.modified = modified;
    auto reference = [&](double T) {
        WavePacket start = f0;
        start.t = 0.0;
        WavePacket p = modified ? modified_free_propagate(model, start, T, exec) : free_evolve(start, T, exec);
        monitor(p, config);
        return p;
    };
    WavePacket current = reference(times.front());
    report.valid = current.valid;
    for (std::size_t i = 1; i < times.size(); ++i) {
        WavePacket next = reference(times[i]);
        const WavePacket evolved = split_step_evolve(current, config, times[i], exec);
        report.increments.push_back(distance(next, evolved));
        report.valid = report.valid && next.valid && evolved.valid;
        current = std::move(next);
    }
    // Increments below the round-off floor of a long split-step run count as zero.
    const double floor = CauchyReport::noise_floor;
    report.decay_ratio = report.increments.front() / std::max(report.increments.back(), floor);
    report.monotone = true;
    for (std::size_t i = 1; i < report.increments.size(); ++i)
        if (report.increments[i] > std::max(report.increments[i - 1], floor)) report.monotone = false;
    const bool at_floor = report.increments.front() <= floor;
    report.converging = at_floor || (report.monotone && report.decay_ratio >= 10.0);
    report.plateau = !at_floor && report.decay_ratio < 2.0;
    if (settings.compute_limit) {
        report.limit = split_step_evolve(current, config, 0.0, exec);
        report.valid = report.valid && report.limit.valid;
    }
    return report;
}

}  // namespace

CauchyReport moller_probe(const PotentialModel& model, const WavePacket& f0, const std::vector<double>& times,
                          const ProbeSettings& settings, Execution exec) {
    return cauchy_probe(model, f0, times, settings, false, exec);
}

CauchyReport modified_moller_probe(const PotentialModel& model, const WavePacket& f0,
                                   const std::vector<double>& times, const ProbeSettings& settings, Execution exec) {
    if (model.kind() != PotentialKind::zero && !(model.rho() > 0.5))
        throw DomainError("modified_moller_probe: requires rho > 1/2");
    return cauchy_probe(model, f0, times, settings, true, exec);
}

TimeDomainPhase scattering_phase_from_time_domain(const PotentialModel& model, double k, double sigma,
                                                  Execution exec) {
    if (!model.radial()) throw ParameterError("scattering_phase_from_time_domain: radial model required");
    if (!(k > 0.0) || !(sigma > 0.0)) throw ParameterError("scattering_phase_from_time_domain: k, sigma must be > 0");
    TimeDomainPhase out;
    out.bandwidth = 1.0 / (2.0 * sigma * k);
    if (out.bandwidth > 0.2)
        throw ParameterError("scattering_phase_from_time_domain: relative bandwidth " + std::to_string(out.bandwidth) +
                             " exceeds 20%");
    const double reach = model.compact_or_fast_decaying() ? model.support_radius(1e-12) : 60.0;
    out.start_radius = reach + 8.0 * sigma;
    // Group velocity 2k: the packet returns to the start radius after r0 / k.
    out.duration = out.start_radius / k;
    GridSpec grid;
    grid.geometry = Geometry::radial;
    grid.dx = std::min(0.1, pi / (8.0 * k));
    const double extent = out.start_radius + 14.0 * sigma;
    grid.n = 8;
    while (grid.n * grid.dx < extent / 0.9) grid.n *= 2;

    const WavePacket incoming = gaussian_packet(grid, out.start_radius, sigma, -k);
    EvolutionConfig config;
    config.model = model;
    const WavePacket scattered = split_step_evolve(incoming, config, out.duration, exec);
    const WavePacket free = free_evolve(incoming, out.duration, exec);
    out.valid = scattered.valid;
    // Outgoing component at momentum k on the half-line.
    auto project = [&](const WavePacket& p) {
        cplx s = 0.0;
        for (std::size_t j = 1; j < p.size(); ++j) s += p.values[j] * std::exp(-I * k * p.coordinate(j));
        return s * p.dx;
    };
    out.value = project(scattered) / project(free);
    return out;
}

}  // namespace scatterlab::propagator
