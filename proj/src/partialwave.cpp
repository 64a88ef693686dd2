#include "scatterlab/partialwave.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "scatterlab/error.hpp"
#include "scatterlab/numerics/quadrature.hpp"
#include "scatterlab/numerics/special_functions.hpp"

namespace scatterlab::partialwave {

namespace {

constexpr double kPi = std::numbers::pi;

void require_radial(const PotentialModel& model) {
    if (!model.radial()) throw ParameterError("partial waves require a radial model");
}

void require_momentum(double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ParameterError("momentum k must be positive");
}

// Near the origin v(r) ~ c_m1 / r + c_0, and the regular solution is
// u ~ r^{l+1} (1 + a1 r + a2 r^2) with the Frobenius coefficients below.
struct OriginBehaviour {
    double c_m1 = 0.0;
    double c_0 = 0.0;
};

OriginBehaviour origin_behaviour(const PotentialModel& model) {
    OriginBehaviour o;
    const double eps = 1e-7;
    o.c_m1 = model.r_times(0.0);
    o.c_0 = (model.r_times(eps) - o.c_m1) / eps;
    return o;
}

// Regular solution of u'' = (l(l+1)/r^2 + v - k^2) u on r_i = i dr, i <= n.
// Entries below the start index stay zero. potential[i] = v(r_i).
std::vector<double> numerov_regular(const std::vector<double>& potential, const OriginBehaviour& origin, int l,
                                    double k, double dr, int n) {
    const double ll = static_cast<double>(l) * (l + 1);
    // Start where dr^2 l(l+1)/r^2 <= 1.2 so that the recursion is stable.
    const int i0 = std::max(1, static_cast<int>(std::ceil(std::sqrt(ll / 1.2))));
    if (i0 + 2 > n) throw ParameterError("radial grid too short for channel l=" + std::to_string(l));
    std::vector<double> u(n + 1, 0.0);
    const double c = dr * dr / 12.0;
    auto f = [&](int i) {
        const double r = i * dr;
        return ll / (r * r) + potential[i] - k * k;
    };
    const double a1 = origin.c_m1 / (2.0 * (l + 1));
    const double a2 = (origin.c_0 - k * k + origin.c_m1 * a1) / (2.0 * (2.0 * l + 3.0));
    auto start = [&](int i) {
        const double r = i * dr;
        const double ratio = static_cast<double>(i) / i0;
        return std::pow(ratio, l + 1) * (1.0 + a1 * r + a2 * r * r);
    };
    u[i0] = start(i0);
    u[i0 + 1] = start(i0 + 1);
    double f_prev = f(i0);
    double f_cur = f(i0 + 1);
    for (int i = i0 + 1; i < n; ++i) {
        const double f_next = f(i + 1);
        u[i + 1] = (2.0 * u[i] * (1.0 + 5.0 * c * f_cur) - u[i - 1] * (1.0 - c * f_prev)) / (1.0 - c * f_next);
        if (std::abs(u[i + 1]) > 1e200) {
            for (int m = i0; m <= i + 1; ++m) u[m] *= 1e-200;
        }
        f_prev = f_cur;
        f_cur = f_next;
    }
    return u;
}

struct RadialGrid {
    OriginBehaviour origin;
    double dr = 0.0;
    int n = 0;  // r_max = n dr
    std::vector<double> potential;
};

RadialGrid make_grid(const PotentialModel& model, double r_max, double dr) {
    if (!(dr > 0.0)) throw ParameterError("dr must be positive");
    if (!(r_max > 10.0 * dr)) throw ParameterError("r_max must exceed ten grid steps");
    const double tail = std::abs(model.radial(r_max));
    if (tail > 1e-6)
        throw ParameterError("r_max too small: potential tail " + std::to_string(tail) + " exceeds 1e-6 at r_max");
    RadialGrid g;
    g.origin = origin_behaviour(model);
    if (model.kind() == PotentialKind::square_well) {
        // Put the edge on a node so that the jump is seen symmetrically.
        const double edge = model.range_parameter();
        dr = edge / std::ceil(edge / dr);
    }
    g.dr = dr;
    g.n = static_cast<int>(std::round(r_max / dr));
    g.potential.resize(g.n + 1);
    g.potential[0] = 0.0;
    // Mean of the one-sided limits: equal to v(r) where v is continuous, the midpoint at a jump.
    for (int i = 1; i <= g.n; ++i) {
        const double r = i * dr;
        const double eps = 1e-9 * r;
        g.potential[i] = 0.5 * (model.radial(r - eps) + model.radial(r + eps));
    }
    return g;
}

double reduce_half_open(double delta) {
    // Into (-pi/2, pi/2].
    delta = std::remainder(delta, kPi);
    if (delta <= -kPi / 2.0) delta += kPi;
    return delta;
}

double match_phase(const std::vector<double>& u, int l, double k, double dr, int n) {
    const int i2 = n;
    const int gap = std::max(1, static_cast<int>(std::lround(kPi / (2.0 * k * dr))));
    const int i1 = i2 - gap;
    const double r1 = i1 * dr;
    const double r2 = i2 * dr;
    const auto b1 = numerics::spherical_bessel(l, k * r1);
    const auto b2 = numerics::spherical_bessel(l, k * r2);
    // u(r)/r = A (j cos d - y sin d) at both radii, with K = r2 u(r1) / (r1 u(r2)):
    // tan d = (K j(kr2) - j(kr1)) / (K y(kr2) - y(kr1)), cross-multiplied by r1 u(r2).
    const double a = r2 * u[i1];
    const double b = r1 * u[i2];
    const double num = a * b2.j - b * b1.j;
    const double den = a * b2.y - b * b1.y;
    return reduce_half_open(std::atan2(num, den));
}

}  // namespace

double default_r_max(const PotentialModel& model, double k) {
    require_momentum(k);
    double support = model.support_radius(1e-12);
    if (!std::isfinite(support)) support = 200.0;
    return std::max(support, 1.0) + 2.0 * kPi / k;
}

double radial_phase_shift(const PotentialModel& model, int l, double k, double r_max, double dr) {
    require_radial(model);
    require_momentum(k);
    if (l < 0) throw ParameterError("channel l must be non-negative");
    if (model.kind() == PotentialKind::zero) return 0.0;
    const RadialGrid grid = make_grid(model, r_max, dr);
    const auto u = numerov_regular(grid.potential, grid.origin, l, k, grid.dr, grid.n);
    return match_phase(u, l, k, grid.dr, grid.n);
}

double radial_phase_shift(const PotentialModel& model, int l, double k, const RadialSettings& settings) {
    require_momentum(k);
    const double r_max = settings.r_max > 0.0 ? settings.r_max : default_r_max(model, k);
    return radial_phase_shift(model, l, k, r_max, settings.dr);
}

PhaseShiftTable phase_shift_table(const PotentialModel& model, double k, int l_max, const RadialSettings& settings,
                                  Execution exec) {
    require_radial(model);
    require_momentum(k);
    const int needed = static_cast<int>(std::ceil(k * model.range_parameter())) + 8;
    if (l_max < needed)
        throw ParameterError("l_max=" + std::to_string(l_max) + " below ceil(k*range)+8=" + std::to_string(needed));
    const double r_max = settings.r_max > 0.0 ? settings.r_max : default_r_max(model, k);
    const RadialGrid grid = make_grid(model, r_max, settings.dr);

    PhaseShiftTable table;
    table.k = k;
    table.l_max = l_max;
    table.model_kind = to_string(model.kind());
    table.r_max = grid.n * grid.dr;
    table.dr = grid.dr;
    table.delta.assign(l_max + 1, 0.0);
    if (model.kind() == PotentialKind::zero) return table;

    // Channels are independent; the serial path is the reference.
    ExceptionSlot failure;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
    for (int l = 0; l <= l_max; ++l) {
        failure.capture([&] {
            const auto u = numerov_regular(grid.potential, grid.origin, l, k, grid.dr, grid.n);
            table.delta[l] = match_phase(u, l, k, grid.dr, grid.n);
        });
    }
    failure.rethrow_if_set();

    const int first = std::max(0, l_max - 4);
    for (int l = first + 1; l <= l_max; ++l)
        if (std::abs(table.delta[l]) > std::abs(table.delta[l - 1]) + 1e-14) table.tail_monotone = false;
    return table;
}

SMatrixSpectrum smatrix_eigenvalues(const PhaseShiftTable& table) {
    SMatrixSpectrum s;
    for (std::size_t l = 0; l < table.delta.size(); ++l) {
        s.eigenvalues.push_back(std::polar(1.0, 2.0 * table.delta[l]));
        s.multiplicity.push_back(2 * static_cast<int>(l) + 1);
    }
    return s;
}

namespace {

// f(t) with t = cos(theta); uses (e^{2id} - 1)/(2i) = e^{id} sin d to avoid cancellation.
cplx amplitude_at_cosine(const PhaseShiftTable& table, double t) {
    const auto p = numerics::legendre_p_all(static_cast<int>(table.delta.size()) - 1, std::clamp(t, -1.0, 1.0));
    cplx sum{};
    for (std::size_t l = 0; l < table.delta.size(); ++l) {
        const double d = table.delta[l];
        sum += (2.0 * l + 1.0) * std::polar(std::sin(d), d) * p[l];
    }
    return sum / table.k;
}

}  // namespace

cplx amplitude(const PhaseShiftTable& table, double theta) {
    if (table.delta.empty()) throw ParameterError("amplitude: empty phase-shift table");
    if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("amplitude: theta must lie in [0, pi]");
    return amplitude_at_cosine(table, std::cos(theta));
}

AmplitudeKernel amplitude_kernel(const PhaseShiftTable& table, const std::vector<double>& thetas) {
    AmplitudeKernel kernel;
    kernel.lambda = table.lambda();
    kernel.theta = thetas;
    for (double th : thetas) {
        if (th == 0.0 && std::find(kernel.flags.begin(), kernel.flags.end(), "truncated_forward") == kernel.flags.end())
            kernel.flags.emplace_back("truncated_forward");
        kernel.values.push_back(amplitude(table, th));
    }
    return kernel;
}

cplx smatrix_kernel(const PhaseShiftTable& table, double theta) {
    return cplx(0.0, table.k / (2.0 * kPi)) * amplitude(table, theta);
}

std::vector<double> assembled_smatrix_singular_values(const PhaseShiftTable& table) {
    if (table.delta.empty()) throw ParameterError("assembled S-matrix: empty table");
    const int lmax = table.l_max;
    const int nt = lmax + 2;
    const int nphi = 2 * lmax + 4;
    const auto rule = numerics::gauss_legendre(nt, -1.0, 1.0);
    const cplx c(0.0, table.k / (2.0 * kPi));
    std::vector<double> singular;
    // Block m: M_ij = delta_ij + c sqrt(w_i w_j) int_0^{2pi} f(cos gamma) cos(m phi) dphi.
    std::vector<std::vector<std::vector<cplx>>> samples(nt, std::vector<std::vector<cplx>>(nt));
    for (int i = 0; i < nt; ++i) {
        const double ti = rule.nodes[i];
        const double si = std::sqrt(1.0 - ti * ti);
        for (int j = 0; j < nt; ++j) {
            const double tj = rule.nodes[j];
            const double sj = std::sqrt(1.0 - tj * tj);
            samples[i][j].resize(nphi);
            for (int p = 0; p < nphi; ++p) {
                const double phi = 2.0 * kPi * p / nphi;
                samples[i][j][p] = amplitude_at_cosine(table, ti * tj + si * sj * std::cos(phi));
            }
        }
    }
    for (int m = 0; m <= lmax; ++m) {
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(nt, nt);
        for (int i = 0; i < nt; ++i) {
            for (int j = 0; j < nt; ++j) {
                cplx integral{};
                for (int p = 0; p < nphi; ++p) integral += samples[i][j][p] * std::cos(m * 2.0 * kPi * p / nphi);
                integral *= 2.0 * kPi / nphi;
                M(i, j) += c * std::sqrt(rule.weights[i] * rule.weights[j]) * integral;
            }
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
        const auto sv = svd.singularValues();
        for (int i = 0; i < sv.size(); ++i) singular.push_back(sv(i));
    }
    return singular;
}

InOutDecomposition radial_in_out_decomposition(const PotentialModel& model, int l, double k,
                                               const std::vector<double>& r_samples, double dr) {
    require_radial(model);
    require_momentum(k);
    if (r_samples.size() < 2) throw ParameterError("in/out decomposition needs at least two radii");
    double r_top = 0.0;
    for (double r : r_samples) {
        if (!(r > 0.0)) throw ParameterError("sample radii must be positive");
        if (std::abs(model.radial(r)) > 1e-8)
            throw ParameterError("sample radius " + std::to_string(r) + " is not in the asymptotic region");
        r_top = std::max(r_top, r);
    }
    const RadialGrid grid = make_grid(model, r_top + 4.0 * dr, dr);
    const auto u = numerov_regular(grid.potential, grid.origin, l, k, grid.dr, grid.n);

    // Least squares u(r_s) = c_- h^-(k r_s) + c_+ h^+(k r_s), samples snapped to the grid.
    const int n = static_cast<int>(r_samples.size());
    Eigen::MatrixXcd A(n, 2);
    Eigen::VectorXcd y(n);
    for (int s = 0; s < n; ++s) {
        const int idx = static_cast<int>(std::lround(r_samples[s] / dr));
        const double r = idx * dr;
        const auto b = numerics::spherical_bessel(l, k * r);
        const double x = k * r;
        A(s, 0) = cplx(-x * b.y, -x * b.j);  // h^-
        A(s, 1) = cplx(-x * b.y, x * b.j);   // h^+
        y(s) = u[idx];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto sv = svd.singularValues();
    InOutDecomposition out;
    out.condition = sv(0) / sv(sv.size() - 1);
    if (!(out.condition < 1e8)) throw NumericalError("in/out fit is ill-conditioned: cond = " + std::to_string(out.condition));
    const Eigen::VectorXcd c = svd.solve(y);
    out.b_minus = -c(0);
    out.b_plus = c(1);
    out.residual = (A * c - y).norm() / y.norm();
    return out;
}

}  // namespace scatterlab::partialwave
