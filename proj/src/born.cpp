#include "scatterlab/born.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "scatterlab/error.hpp"
#include "scatterlab/numerics/fitting.hpp"
#include "scatterlab/numerics/quadrature.hpp"
#include "scatterlab/numerics/ray.hpp"
#include "scatterlab/numerics/special_functions.hpp"
#include "scatterlab/partialwave.hpp"
#include "scatterlab/transport.hpp"

namespace scatterlab::born {

namespace {

using numerics::AxialField;
using numerics::AxialGrid;
constexpr double pi = std::numbers::pi;
constexpr int kOrder = 16;
constexpr double kRayTolerance = 1e-12;

bool finite_support(const PotentialModel& model) { return std::isfinite(model.support_radius(1e-17)); }

// Breakpoints on [0, R] with panel width at most `width`, including the square-well edge.
std::vector<double> radial_breaks(double R, double width) {
    const int panels = std::max(1, static_cast<int>(std::ceil(R / width)));
    std::vector<double> b(panels + 1);
    for (int p = 0; p <= panels; ++p) b[p] = R * p / panels;
    b.back() = R;
    return b;
}

// Wynn's epsilon extrapolation of a sequence of partial sums. Returns the last
// even-column estimate and the change from the previous one.
std::pair<double, double> wynn_epsilon(const std::vector<double>& s) {
    const std::size_t n = s.size();
    std::vector<double> prev(n + 1, 0.0);  // eps_{-1}
    std::vector<double> cur(s.begin(), s.end());
    double best = s.back();
    double best_prev = s.size() > 1 ? s[n - 2] : s.back();
    for (std::size_t col = 1; col < n; ++col) {
        std::vector<double> next(n - col);
        bool ok = true;
        for (std::size_t i = 0; i + col < n; ++i) {
            const double diff = cur[i + 1] - cur[i];
            if (diff == 0.0) {
                ok = false;
                break;
            }
            next[i] = prev[i + 1] + 1.0 / diff;
        }
        if (!ok) break;
        prev = std::move(cur);
        cur = std::move(next);
        if (col % 2 == 0 && cur.size() >= 2) {
            best = cur.back();
            best_prev = cur[cur.size() - 2];
        }
        if (cur.size() < 2) break;
    }
    return {best, std::abs(best - best_prev)};
}

// int_start^inf g for an integrand oscillating with the given half-period: the half-period
// chunks form an alternating series, summed with epsilon acceleration.
double accelerated_tail(const std::function<double(double)>& g, double start, double half, const char* what) {
    std::vector<double> partial;
    std::vector<double> terms;
    double s = 0.0;
    double a = start;
    for (int n = 0; n < 400; ++n) {
        const double t = numerics::gauss_legendre(kOrder, a, a + half).integrate(g);
        a += half;
        s += t;
        terms.push_back(std::abs(t));
        partial.push_back(s);
        if (n >= 40 && n % 10 == 0) {
            // Tail terms must shrink for the alternating sum to converge.
            if (terms[n] >= terms[n - 20] * (1.0 - 1e-9) && terms[n] > 1e-15)
                throw ConvergenceError(std::string(what) + ": oscillatory tail does not decay (integrand not integrable)");
            const std::vector<double> last(partial.end() - 30, partial.end());
            const auto [estimate, change] = wynn_epsilon(last);
            if (change < 1e-13) return estimate;
        }
    }
    throw ConvergenceError(std::string(what) + ": tail estimate above tolerance after 400 half-periods");
}

// int_0^inf g(r) dr where g = (r v(r)) sin(q r) / q style integrands; `q` sets the oscillation.
double oscillatory_radial_integral(const PotentialModel& model, const std::function<double(double)>& g, double q,
                                   const char* what) {
    const double width = std::min(0.5, pi / q);
    if (finite_support(model)) {
        const double R = std::max(model.support_radius(1e-17), 1e-12);
        return numerics::panel_gauss_legendre(radial_breaks(R, width), kOrder).integrate(g);
    }
    const double core = 50.0;
    return numerics::panel_gauss_legendre(radial_breaks(core, width), kOrder).integrate(g) +
           accelerated_tail(g, core, pi / q, what);
}

double ball_l1_guard(const PotentialModel& model, const char* what) {
    const double l1 = model.l1_norm();
    if (!std::isfinite(l1)) throw ConvergenceError(std::string(what) + ": integral of |v| diverges");
    return l1;
}

// Signed integral of v over R^3 for radial models.
double radial_volume_integral(const PotentialModel& model) {
    ball_l1_guard(model, "born_first_amplitude at theta = 0");
    auto g = [&](double r) { return 4.0 * pi * r * model.r_times(r); };
    if (finite_support(model)) {
        const double R = std::max(model.support_radius(1e-17), 1e-12);
        return numerics::panel_gauss_legendre(radial_breaks(R, 0.5), kOrder).integrate(g);
    }
    const auto res = numerics::integrate_to_infinity(g, 0.0, 50.0, 1e-14, 400, kOrder);
    if (!res.converged) throw ConvergenceError("born_first_amplitude at theta = 0: tail did not converge");
    return res.value;
}

// Spherical product rule over the ball of radius R for custom models.
template <class F>
cplx ball_integral(double R, double q_scale, F&& f) {
    const double width = std::min(0.5, pi / std::max(q_scale, 1e-12));
    const auto rr = numerics::panel_gauss_legendre(radial_breaks(R, width), kOrder);
    const int n_ang = std::max(32, static_cast<int>(std::ceil(2.0 * q_scale * R)) + 16);
    const auto ct = numerics::gauss_legendre(n_ang, -1.0, 1.0);
    const int n_phi = 2 * n_ang;
    cplx sum = 0.0;
    for (std::size_t i = 0; i < rr.size(); ++i) {
        const double r = rr.nodes[i];
        cplx shell = 0.0;
        for (std::size_t a = 0; a < ct.size(); ++a) {
            const double c = ct.nodes[a];
            const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            cplx ring = 0.0;
            for (int p = 0; p < n_phi; ++p) {
                const double phi = 2.0 * pi * p / n_phi;
                ring += f(Vec3{r * s * std::cos(phi), r * s * std::sin(phi), r * c});
            }
            shell += ct.weights[a] * ring * (2.0 * pi / n_phi);
        }
        sum += rr.weights[i] * r * r * shell;
    }
    return sum;
}

double custom_support(const PotentialModel& model, const char* what) {
    const double R = model.support_radius(1e-14);
    if (!std::isfinite(R)) throw DomainError(std::string(what) + ": custom model needs a finite support radius");
    return std::max(R, 1e-12);
}

void check_direction(const Vec3& w, const char* what) {
    const double n = norm(w);
    if (!(n > 0.0) || !std::isfinite(n)) throw ParameterError(std::string(what) + ": direction must be nonzero");
}

}  // namespace

cplx born_first_amplitude(const PotentialModel& model, double k, double theta) {
    if (!(k > 0.0)) throw ParameterError("born_first_amplitude: k must be positive");
    if (!(theta >= 0.0 && theta <= pi)) throw ParameterError("born_first_amplitude: theta must lie in [0, pi]");
    if (!model.radial()) return born_first_amplitude(model, k, direction_xz(theta), Vec3{0.0, 0.0, 1.0});
    if (model.kind() == PotentialKind::zero) return 0.0;
    const double q = 2.0 * k * std::sin(0.5 * theta);
    if (q < 1e-12) return -radial_volume_integral(model) / (4.0 * pi);
    auto g = [&](double r) { return model.r_times(r) * std::sin(q * r); };
    return -oscillatory_radial_integral(model, g, q, "born_first_amplitude") / q;
}

cplx born_first_amplitude(const PotentialModel& model, double k, const Vec3& omega, const Vec3& omega_prime) {
    check_direction(omega, "born_first_amplitude");
    check_direction(omega_prime, "born_first_amplitude");
    if (model.radial()) return born_first_amplitude(model, k, angle_between(omega, omega_prime));
    if (!(k > 0.0)) throw ParameterError("born_first_amplitude: k must be positive");
    const double R = custom_support(model, "born_first_amplitude");
    const Vec3 q = k * (normalized(omega) - normalized(omega_prime));
    const cplx I(0.0, 1.0);
    const cplx integral =
        ball_integral(R, norm(q), [&](const Vec3& x) { return std::exp(-I * dot(q, x)) * model.evaluate(x); });
    return -integral / (4.0 * pi);
}

double born_first_phase_shift(const PotentialModel& model, double k, int l) {
    if (!model.radial()) throw ParameterError("born_first_phase_shift: radial model required");
    if (!(k > 0.0)) throw ParameterError("born_first_phase_shift: k must be positive");
    if (l < 0) throw ParameterError("born_first_phase_shift: l must be non-negative");
    if (model.kind() == PotentialKind::zero) return 0.0;
    // r^2 v j_l^2 = (r v) r j_l^2 keeps the Yukawa origin finite.
    auto g = [&](double r) {
        const double j = numerics::spherical_bessel_j(l, k * r);
        return model.r_times(r) * r * j * j;
    };
    const double width = std::min(0.5, pi / (2.0 * k));
    if (finite_support(model)) {
        const double R = std::max(model.support_radius(1e-17), 1e-12);
        return -k * numerics::panel_gauss_legendre(radial_breaks(R, width), kOrder).integrate(g);
    }
    if (!model.short_range())
        throw ConvergenceError("born_first_phase_shift: integral of v j_l^2 r^2 diverges for rho <= 1");
    // Oscillation-resolving core; beyond it j_l^2 ~ (1 - cos(2kr - l pi)) / (2 k^2 r^2): the
    // averaged part is integrated directly and the oscillating rest by accelerated half-periods.
    const double core = 200.0 + 2.0 * l / k;
    const double inner = numerics::panel_gauss_legendre(radial_breaks(core, width), kOrder).integrate(g);
    auto mean = [&](double r) { return model.radial(r) / (2.0 * k * k); };
    const auto smooth = numerics::integrate_to_infinity(mean, core, core, 1e-15, 400, kOrder);
    if (!smooth.converged) throw ConvergenceError("born_first_phase_shift: tail did not converge");
    const double wiggle =
        accelerated_tail([&](double r) { return g(r) - mean(r); }, core, pi / (2.0 * k), "born_first_phase_shift");
    return -k * (inner + smooth.value + wiggle);
}

// ---------------------------------------------------------------------------------------------
// Transport coefficients

namespace {

void check_cone(const Vec3& x, const Vec3& w, double cone) {
    const double r = norm(x);
    if (r > 1.0 && angle_between(x, w) < cone)
        throw DomainError("transport_coefficients: point inside the forward cone around omega'");
}

// int_0^inf f(s) ds along y - s w, truncated where the panels fall below tolerance.
double ray_integral(const std::function<double(double)>& f, const Vec3& y, const Vec3& w, double* tail) {
    const double s_star = std::max(0.0, dot(y, w));
    const auto res = numerics::ray_integral<double>(f, s_star, norm(y - s_star * w), kRayTolerance * 1e-1);
    if (tail) *tail = std::max(*tail, res.tail);
    return res.value;
}

// b_1 and Lap b_1 at y: integrals of v and Lap v along y - s w, s >= 0.
double b1_at(const PotentialModel& m, const Vec3& w, const Vec3& y, double* tail) {
    return ray_integral([&](double s) { return m.evaluate(y - s * w); }, y, w, tail);
}
double lap_b1_at(const PotentialModel& m, const Vec3& w, const Vec3& y, double* tail) {
    return ray_integral([&](double s) { return m.laplacian(y - s * w); }, y, w, tail);
}

double b2_at(const PotentialModel& m, const Vec3& w, const Vec3& x, double* tail) {
    return ray_integral(
        [&](double s) {
            const Vec3 y = x - s * w;
            return -lap_b1_at(m, w, y, tail) + m.evaluate(y) * b1_at(m, w, y, tail);
        },
        x, w, tail);
}

double pointwise_value(const PotentialModel& m, const Vec3& w, const Vec3& x, int n, double* tail) {
    switch (n) {
        case 0: return 1.0;
        case 1: return b1_at(m, w, x, tail);
        case 2: return b2_at(m, w, x, tail);
        default: throw ParameterError("pointwise transport supports n <= 2");
    }
}

double lattice_step(double h) {
    if (!(h > 0.0)) throw ParameterError("transport settings: h must be positive");
    return h;
}

std::pair<double, double> cylindrical(const Vec3& x, const Vec3& w) {
    const double z = dot(x, w);
    return {norm(x - z * w), z};
}

}  // namespace

cplx transport_coefficient_pointwise(const PotentialModel& model, const Vec3& omega_prime, const Vec3& x, int n,
                                     double* tail_bound) {
    check_direction(omega_prime, "transport_coefficient_pointwise");
    if (!model.short_range()) throw DomainError("transport_coefficients: long-range potential, ray integrals diverge");
    return pointwise_value(model, normalized(omega_prime), x, n, tail_bound);
}

HighEnergyExpansion transport_coefficients(const PotentialModel& model, const Vec3& omega_prime,
                                           const std::vector<Vec3>& points, int N, const TransportSettings& settings,
                                           Execution exec) {
    check_direction(omega_prime, "transport_coefficients");
    if (N < 0) throw ParameterError("transport_coefficients: N must be non-negative");
    if (!model.short_range()) throw DomainError("transport_coefficients: long-range potential, ray integrals diverge");
    HighEnergyExpansion out;
    out.order = N;
    out.omega_prime = normalized(omega_prime);
    out.cone_half_angle = settings.cone_half_angle_deg * pi / 180.0;
    out.points = points;
    const Vec3& w = out.omega_prime;
    for (const Vec3& x : points) check_cone(x, w, out.cone_half_angle);
    out.values.assign(N + 1, std::vector<cplx>(points.size(), 0.0));
    out.remainder.assign(points.size(), 0.0);
    for (auto& value : out.values[0]) value = 1.0;

    const bool lattice = model.radial() && model.compact_or_fast_decaying();
    if (lattice) {
        out.route = "axial-lattice";
        const double h = lattice_step(settings.h);
        double rho_max = std::max(1.0, model.support_radius(settings.support_tol));
        double z_ext = rho_max;
        for (const Vec3& x : points) {
            const auto [rho, z] = cylindrical(x, w);
            rho_max = std::max(rho_max, rho);
            z_ext = std::max(z_ext, std::abs(z));
        }
        const AxialGrid grid = AxialGrid::covering(rho_max + 4.0 * h, z_ext + 4.0 * h, h);
        transport::AxialTransportInput input{grid, transport::sample_potential(model, grid, exec), nullptr, nullptr,
                                             transport::Sign::minus, N};
        out.fields = transport::solve(input, exec);
        const AxialField f_N = transport::source(input, out.fields.back(), exec);
        for (std::size_t p = 0; p < points.size(); ++p) {
            const auto [rho, z] = cylindrical(points[p], w);
            for (int n = 1; n <= N; ++n) out.values[n][p] = out.fields[n].sample(rho, z);
            out.remainder[p] = f_N.sample(rho, z);
        }
        return out;
    }

    if (N > 2) throw ParameterError("transport_coefficients: the ray-quadrature route supports N <= 2");
    out.route = "pointwise-rays";
    std::vector<double> tails(points.size(), 0.0);
    const int np = static_cast<int>(points.size());
    ExceptionSlot failure;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
    for (int p = 0; p < np; ++p) failure.capture([&] {
        const Vec3& x = points[p];
        double tail = 0.0;
        for (int n = 1; n <= N; ++n) out.values[n][p] = pointwise_value(model, w, x, n, &tail);
        // f_N = -Lap b_N + v b_N with a seven-point Laplacian (analytic for N = 1).
        double lap = 0.0;
        if (N == 1) {
            lap = lap_b1_at(model, w, x, &tail);
        } else if (N == 2) {
            const double step = 0.02 * std::max(1.0, norm(x));
            const double centre = out.values[2][p].real();
            for (int axis = 0; axis < 3; ++axis) {
                Vec3 e{0.0, 0.0, 0.0};
                e[axis] = step;
                lap += pointwise_value(model, w, x + e, 2, &tail) + pointwise_value(model, w, x - e, 2, &tail) -
                       2.0 * centre;
            }
            lap /= step * step;
        }
        out.remainder[p] = N == 0 ? cplx(model.evaluate(x)) : -lap + model.evaluate(x) * out.values[N][p];
        tails[p] = tail;
    });
    failure.rethrow_if_set();
    for (double t : tails) out.tail_bound = std::max(out.tail_bound, t);
    return out;
}

// ---------------------------------------------------------------------------------------------
// Kernel

namespace {

double kernel_support(const PotentialModel& model, const TransportSettings& settings) {
    if (model.kind() == PotentialKind::zero) return 0.0;
    if (!model.compact_or_fast_decaying())
        throw DomainError("high_energy_kernel: potential support is not compact within tolerance");
    const double R = model.support_radius(settings.support_tol);
    if (!std::isfinite(R)) throw DomainError("high_energy_kernel: potential support is not compact within tolerance");
    return std::max(R, 1e-12);
}

// int over the support of e^{ik x.(w' - w)} v b_n in polar coordinates about w', for each n.
std::vector<cplx> radial_kernel_integrals(const PotentialModel& model, const std::vector<AxialField>& fields,
                                          double R, double k, double theta, int N, Execution exec) {
    const double q_perp = k * std::sin(theta);
    const double q_par = k * (1.0 - std::cos(theta));
    const double q = std::hypot(q_perp, q_par);
    const double width = std::min(0.5, pi / (q + 1e-12));
    const auto rr = numerics::panel_gauss_legendre(radial_breaks(R, width), kOrder);
    const int a_panels = std::max(2, static_cast<int>(std::ceil(pi / std::min(0.5, pi / (q * R + 1e-12)))));
    const auto aa = numerics::composite_gauss_legendre(a_panels, kOrder, 0.0, pi);
    const int nr = static_cast<int>(rr.size());
    std::vector<std::vector<cplx>> shells(nr, std::vector<cplx>(N + 1, 0.0));
    const cplx I(0.0, 1.0);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (int i = 0; i < nr; ++i) {
        const double r = rr.nodes[i];
        const double v = model.radial(r);
        if (v == 0.0) continue;
        for (std::size_t a = 0; a < aa.size(); ++a) {
            const double alpha = aa.nodes[a];
            const double rho = r * std::sin(alpha);
            const double z = r * std::cos(alpha);
            const cplx phase = std::exp(I * q_par * z) * std::cyl_bessel_j(0.0, q_perp * rho);
            const double weight = aa.weights[a] * 2.0 * pi * r * r * std::sin(alpha) * v;
            for (int n = 0; n <= N; ++n) {
                const cplx b = n == 0 ? cplx(1.0) : fields[n].sample(rho, z);
                shells[i][n] += weight * phase * b;
            }
        }
    }
    std::vector<cplx> total(N + 1, 0.0);
    for (int i = 0; i < nr; ++i)
        for (int n = 0; n <= N; ++n) total[n] += rr.weights[i] * shells[i][n];
    return total;
}

BornKernelSample assemble(double lambda, const Vec3& omega, const Vec3& omega_prime, int N,
                          const std::vector<cplx>& integrals) {
    const double k = std::sqrt(lambda);
    const cplx I(0.0, 1.0);
    const cplx pref = -I * pi * std::pow(2.0 * pi, -3.0) * k;
    BornKernelSample s;
    s.lambda = lambda;
    s.omega = omega;
    s.omega_prime = omega_prime;
    s.order = N;
    s.value = 0.0;
    cplx scale = 1.0;
    for (int n = 0; n <= N; ++n) {
        const cplx term = pref * scale * integrals[n];
        s.partial.push_back(term);
        s.value += term;
        scale /= 2.0 * I * k;
    }
    return s;
}

void check_kernel_args(double lambda, const Vec3& omega, const Vec3& omega_prime, int N) {
    if (!(lambda > 0.0)) throw ParameterError("high_energy_kernel: lambda must be positive");
    if (N < 0) throw ParameterError("high_energy_kernel: N must be non-negative");
    check_direction(omega, "high_energy_kernel");
    check_direction(omega_prime, "high_energy_kernel");
}

}  // namespace

BornKernelSample high_energy_kernel(const PotentialModel& model, const HighEnergyExpansion& expansion, double lambda,
                                    const Vec3& omega, int N, Execution exec) {
    check_kernel_args(lambda, omega, expansion.omega_prime, N);
    if (N > expansion.order) throw ParameterError("high_energy_kernel: expansion order below requested N");
    const Vec3 w = normalized(omega);
    const double theta = angle_between(w, expansion.omega_prime);
    const double k = std::sqrt(lambda);
    if (model.kind() == PotentialKind::zero) return assemble(lambda, w, expansion.omega_prime, N, std::vector<cplx>(N + 1, 0.0));
    if (!model.radial() || !expansion.has_fields())
        throw ParameterError("high_energy_kernel: precomputed expansion lacks lattice fields");
    const double R = kernel_support(model, TransportSettings{});
    return assemble(lambda, w, expansion.omega_prime, N,
                    radial_kernel_integrals(model, expansion.fields, R, k, theta, N, exec));
}

BornKernelSample high_energy_kernel(const PotentialModel& model, double lambda, const Vec3& omega,
                                    const Vec3& omega_prime, int N, const TransportSettings& settings,
                                    Execution exec) {
    check_kernel_args(lambda, omega, omega_prime, N);
    const Vec3 w = normalized(omega);
    const Vec3 wp = normalized(omega_prime);
    const double k = std::sqrt(lambda);
    const double R = kernel_support(model, settings);
    if (model.kind() == PotentialKind::zero) return assemble(lambda, w, wp, N, std::vector<cplx>(N + 1, 0.0));
    if (model.radial()) {
        const HighEnergyExpansion e = transport_coefficients(model, wp, {}, N, settings, exec);
        return assemble(lambda, w, wp, N,
                        radial_kernel_integrals(model, e.fields, R, k, angle_between(w, wp), N, exec));
    }
    if (N > 1) throw ParameterError("high_energy_kernel: custom models support N <= 1");
    const Vec3 shift = k * (wp - w);
    const cplx I(0.0, 1.0);
    std::vector<cplx> integrals(N + 1, 0.0);
    for (int n = 0; n <= N; ++n) {
        integrals[n] = ball_integral(R, norm(shift), [&](const Vec3& x) {
            const double v = model.evaluate(x);
            if (v == 0.0) return cplx(0.0);
            const double b = n == 0 ? 1.0 : b1_at(model, wp, x, nullptr);
            return std::exp(I * dot(shift, x)) * v * b;
        });
    }
    return assemble(lambda, w, wp, N, integrals);
}

cplx exact_kernel(const PotentialModel& model, double lambda, double theta) {
    if (!(lambda > 0.0)) throw ParameterError("exact_kernel: lambda must be positive");
    const double k = std::sqrt(lambda);
    if (model.kind() == PotentialKind::zero) return 0.0;
    const double R = std::max(model.support_radius(1e-16), model.range_parameter());
    const int l_max = static_cast<int>(std::ceil(k * R)) + 10;
    partialwave::RadialSettings rs;
    rs.dr = std::min(1e-3, 0.01 / k);
    const auto table = partialwave::phase_shift_table(model, k, l_max, rs);
    return partialwave::smatrix_kernel(table, theta);
}

namespace {

ErrorOrderReport finish_report(int N, const std::vector<double>& lambdas, std::vector<double> errors,
                               std::vector<double> exact) {
    ErrorOrderReport rep;
    rep.order = N;
    rep.lambdas = lambdas;
    rep.errors = std::move(errors);
    rep.exact_magnitudes = std::move(exact);
    rep.theoretical_slope = -0.5 * N;
    for (double e : rep.errors)
        if (!(e >= 1e-10)) rep.floor_warning = true;
    bool all_positive = true;
    for (double e : rep.errors) all_positive = all_positive && e > 0.0;
    rep.slope = all_positive ? numerics::fit_loglog(rep.lambdas, rep.errors).slope
                             : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

void check_lambdas(const std::vector<double>& lambdas) {
    if (lambdas.size() < 2) throw ParameterError("measure_error_order: need at least two energies");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0)) throw ParameterError("measure_error_order: energies must be positive");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw ParameterError("measure_error_order: energies must increase");
    }
}

}  // namespace

ErrorOrderReport measure_error_order(const PotentialModel& model, const std::vector<double>& lambdas,
                                     const Vec3& omega, const Vec3& omega_prime, int N,
                                     const TransportSettings& settings, Execution exec) {
    check_lambdas(lambdas);
    check_direction(omega, "measure_error_order");
    check_direction(omega_prime, "measure_error_order");
    const double theta = angle_between(omega, omega_prime);
    std::vector<double> errors;
    std::vector<double> exact;
    if (model.kind() == PotentialKind::zero) {
        return finish_report(N, lambdas, std::vector<double>(lambdas.size(), 0.0),
                             std::vector<double>(lambdas.size(), 0.0));
    }
    const HighEnergyExpansion e = transport_coefficients(model, omega_prime, {}, N, settings, exec);
    for (double lambda : lambdas) {
        const cplx ex = exact_kernel(model, lambda, theta);
        const cplx approx = high_energy_kernel(model, e, lambda, omega, N, exec).value;
        errors.push_back(std::abs(ex - approx));
        exact.push_back(std::abs(ex));
    }
    return finish_report(N, lambdas, std::move(errors), std::move(exact));
}

ErrorOrderReport measure_error_order_fixed_transfer(const PotentialModel& model, const std::vector<double>& lambdas,
                                                    double momentum_transfer, int N,
                                                    const TransportSettings& settings, Execution exec) {
    check_lambdas(lambdas);
    if (!(momentum_transfer > 0.0)) throw ParameterError("measure_error_order: momentum transfer must be positive");
    if (!(momentum_transfer <= 2.0 * std::sqrt(lambdas.front())))
        throw ParameterError("measure_error_order: momentum transfer exceeds 2k at the lowest energy");
    const Vec3 wp{0.0, 0.0, 1.0};
    if (model.kind() == PotentialKind::zero) {
        return finish_report(N, lambdas, std::vector<double>(lambdas.size(), 0.0),
                             std::vector<double>(lambdas.size(), 0.0));
    }
    const HighEnergyExpansion e = transport_coefficients(model, wp, {}, N, settings, exec);
    std::vector<double> errors;
    std::vector<double> exact;
    for (double lambda : lambdas) {
        const double theta = 2.0 * std::asin(momentum_transfer / (2.0 * std::sqrt(lambda)));
        const cplx ex = exact_kernel(model, lambda, theta);
        const cplx approx = high_energy_kernel(model, e, lambda, direction_xz(theta), N, exec).value;
        errors.push_back(std::abs(ex - approx));
        exact.push_back(std::abs(ex));
    }
    return finish_report(N, lambdas, std::move(errors), std::move(exact));
}

}  // namespace scatterlab::born
