#include "scatterlab/eikonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "scatterlab/error.hpp"
#include "scatterlab/numerics/fitting.hpp"
#include "scatterlab/numerics/quadrature.hpp"
#include "scatterlab/numerics/ray.hpp"
#include "scatterlab/numerics/taper.hpp"

namespace scatterlab::eikonal {

namespace {

using numerics::AxialField;
using numerics::AxialGrid;
using numerics::Parity;
constexpr double pi = std::numbers::pi;
constexpr double kRayTolerance = 1e-11;

// Fixed-size value bundle for vector-valued ray integrals.
template <std::size_t N>
struct Pack {
    std::array<double, N> a{};
    friend Pack operator+(Pack x, const Pack& y) {
        for (std::size_t i = 0; i < N; ++i) x.a[i] += y.a[i];
        return x;
    }
    friend Pack operator*(double s, Pack x) {
        for (auto& v : x.a) v *= s;
        return x;
    }
    friend double magnitude(const Pack& p) {
        double m = 0.0;
        for (double v : p.a) m = std::max(m, std::abs(v));
        return m;
    }
};

using Mat3 = std::array<double, 9>;

Mat3 hessian(const PotentialModel& m, const Vec3& x) {
    const double r = norm(x);
    Mat3 H{};
    if (m.radial() && r > 1e-4) {
        const double d1 = m.radial_derivative(r);
        const double d2 = m.laplacian(x) - 2.0 * d1 / r;
        const Vec3 u = (1.0 / r) * x;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) H[3 * i + j] = (d2 - d1 / r) * u[i] * u[j] + (i == j ? d1 / r : 0.0);
        return H;
    }
    const double step = 1e-5 * std::max(1.0, r);
    for (int j = 0; j < 3; ++j) {
        Vec3 e{0.0, 0.0, 0.0};
        e[j] = step;
        const Vec3 gp = m.gradient(x + e);
        const Vec3 gm = m.gradient(x - e);
        for (int i = 0; i < 3; ++i) H[3 * i + j] = (gp[i] - gm[i]) / (2.0 * step);
    }
    return H;
}

double angle_to(const Vec3& x, const Vec3& dir) { return angle_between(x, dir); }

}  // namespace

int default_N0(double rho) {
    if (!(rho > 0.0)) throw ParameterError("default_N0: rho must be positive");
    return static_cast<int>(std::ceil(1.5 / rho));
}

// ---------------------------------------------------------------------------------------------

EikonalPhase::EikonalPhase(const PotentialModel& model, const Vec3& xi, Sign sign, int N0, double cone_half_angle_deg)
    : model_(std::make_shared<PotentialModel>(model)),
      xi_hat_{0.0, 0.0, 1.0},
      xi_norm_(norm(xi)),
      sign_(sign),
      N0_(N0),
      cone_(cone_half_angle_deg * pi / 180.0),
      s_(sign == Sign::plus ? 1.0 : -1.0) {
    if (!(xi_norm_ > 0.0) || !std::isfinite(xi_norm_)) throw ParameterError("EikonalPhase: xi must be nonzero");
    if (N0 < 0 || N0 > 4) throw ParameterError("EikonalPhase: N0 must lie in [0, 4]");
    if (!(cone_half_angle_deg > 0.0 && cone_half_angle_deg < 90.0))
        throw ParameterError("EikonalPhase: cone half-angle must lie in (0, 90) degrees");
    xi_hat_ = normalized(xi);
}

bool EikonalPhase::in_bad_cone(const Vec3& x) const {
    return norm(x) > 1.0 && angle_to(x, -s_ * xi_hat_) < cone_;
}

namespace {

// Ray x + s t xi_hat, t >= 0: closest approach and impact parameter.
struct RayGeometry {
    double t_star;
    double impact;
};
RayGeometry geometry(const Vec3& x, const Vec3& dir) {
    const double t = std::max(0.0, -dot(x, dir));
    return {t, norm(x + t * dir)};
}

template <class T, class F>
T integrate_ray(const Vec3& x, const Vec3& dir, F&& f, double tolerance = kRayTolerance) {
    const auto g = geometry(x, dir);
    return numerics::ray_integral<T>(std::forward<F>(f), g.t_star, g.impact, tolerance).value;
}

}  // namespace

double EikonalPhase::phi(int n, const Vec3& x) const {
    if (n < 0 || n > N0_) throw ParameterError("EikonalPhase::phi: order out of range");
    const Vec3 d = s_ * xi_hat_;
    const PotentialModel& m = *model_;
    switch (n) {
        case 1:
            return s_ * integrate_ray<double>(x, d, [&](double t) { return m.evaluate(x + t * d) - m.evaluate(t * d); });
        case 3:
            return s_ * integrate_ray<double>(x, d, [&](double t) {
                       return norm_sq(grad_phi(1, x + t * d)) - norm_sq(grad_phi(1, t * d));
                   });
        default:
            return 0.0;  // phi_0 = 0 and every even order vanishes when a = 0
    }
}

Vec3 EikonalPhase::grad_phi(int n, const Vec3& x) const {
    if (n < 0 || n > std::max(N0_, 1)) throw ParameterError("EikonalPhase::grad_phi: order out of range");
    const Vec3 d = s_ * xi_hat_;
    const PotentialModel& m = *model_;
    if (n == 1) {
        const auto p = integrate_ray<Pack<3>>(x, d, [&](double t) { return Pack<3>{m.gradient(x + t * d)}; });
        return s_ * p.a;
    }
    if (n == 3) {
        // grad |grad phi_1|^2 = 2 H_1 grad phi_1 with H_1 the ray integral of Hess v.
        const auto p = integrate_ray<Pack<3>>(x, d, [&](double t) {
            const Vec3 y = x + t * d;
            const auto inner = integrate_ray<Pack<12>>(y, d, [&](double s) {
                Pack<12> q;
                const Vec3 g = m.gradient(y + s * d);
                const Mat3 H = hessian(m, y + s * d);
                for (int i = 0; i < 3; ++i) q.a[i] = g[i];
                for (int i = 0; i < 9; ++i) q.a[3 + i] = H[i];
                return q;
            });
            Pack<3> out;
            for (int i = 0; i < 3; ++i) {
                double acc = 0.0;
                for (int j = 0; j < 3; ++j) acc += inner.a[3 + 3 * i + j] * inner.a[j];
                out.a[i] = 2.0 * acc;  // s_^2 = 1 from the two inner integrals
            }
            return out;
        });
        return s_ * p.a;
    }
    return {0.0, 0.0, 0.0};
}

double EikonalPhase::lap_phi(int n, const Vec3& x) const {
    if (n < 0 || n > N0_) throw ParameterError("EikonalPhase::lap_phi: order out of range");
    const Vec3 d = s_ * xi_hat_;
    const PotentialModel& m = *model_;
    if (n == 1) return s_ * integrate_ray<double>(x, d, [&](double t) { return m.laplacian(x + t * d); });
    if (n == 3) {
        const double step = 1e-3 * std::max(1.0, norm(x));
        double div = 0.0;
        for (int i = 0; i < 3; ++i) {
            Vec3 e{0.0, 0.0, 0.0};
            e[i] = step;
            div += (grad_phi(3, x + e)[i] - grad_phi(3, x - e)[i]) / (2.0 * step);
        }
        return div;
    }
    return 0.0;
}

double EikonalPhase::Phi(const Vec3& x) const {
    double total = 0.0;
    for (int n = 1; n <= N0_; n += 2) total += phi(n, x) / std::pow(2.0 * xi_norm_, n);
    return total;
}

Vec3 EikonalPhase::grad_Phi(const Vec3& x) const {
    Vec3 total{0.0, 0.0, 0.0};
    for (int n = 1; n <= N0_; n += 2) total = total + (1.0 / std::pow(2.0 * xi_norm_, n)) * grad_phi(n, x);
    return total;
}

double EikonalPhase::lap_Phi(const Vec3& x) const {
    double total = 0.0;
    for (int n = 1; n <= N0_; n += 2) total += lap_phi(n, x) / std::pow(2.0 * xi_norm_, n);
    return total;
}

double EikonalPhase::residual(const Vec3& x) const {
    const Vec3 g = grad_Phi(x);
    return 2.0 * xi_norm_ * dot(xi_hat_, g) + norm_sq(g) + model_->evaluate(x);
}

PhaseIntegral eikonal_phase_integral(const PotentialModel& model, const Vec3& x, const Vec3& xi, Sign sign,
                                     double cone_half_angle_deg) {
    if (!(model.rho() > 0.5)) throw DomainError("eikonal_phase_integral: requires rho > 1/2");
    const double k = norm(xi);
    if (!(k > 0.0)) throw ParameterError("eikonal_phase_integral: xi must be nonzero");
    const EikonalPhase phase(model, xi, sign, 1, cone_half_angle_deg);
    if (phase.in_bad_cone(x)) throw DomainError("eikonal_phase_integral: x lies in the excluded cone");
    const double s = sign == Sign::plus ? 1.0 : -1.0;
    const Vec3 d = s * normalized(xi);
    const auto g = geometry(x, d);
    numerics::RayResult<double> res;
    try {
        res = numerics::ray_integral<double>(
            [&](double t) { return model.evaluate(x + t * d) - model.evaluate(t * d); }, g.t_star, g.impact, 1e-12);
    } catch (const DomainError&) {
        throw ConvergenceError("eikonal_phase_integral: ray integral tail does not converge");
    }
    if (res.tail > 1e-8) throw ConvergenceError("eikonal_phase_integral: tail estimate above 1e-8");
    return {s * res.value / (2.0 * k), res.tail / (2.0 * k)};
}

EikonalData eikonal_iterate(const PotentialModel& model, const Vec3& xi_hat, double xi_norm, int N0,
                            const std::vector<Vec3>& points, Sign sign, double cone_half_angle_deg, Execution exec) {
    if (N0 < 1) throw ParameterError("eikonal_iterate: N0 must be at least 1");
    if (model.kind() != PotentialKind::zero && !(N0 * model.rho() > 1.0))
        throw ParameterError("eikonal_iterate: N0 rho must exceed 1");
    const EikonalPhase phase(model, xi_norm * normalized(xi_hat), sign, N0, cone_half_angle_deg);
    EikonalData out;
    out.sign = sign;
    out.xi = xi_norm * phase.xi_hat();
    out.N0 = N0;
    out.cone_half_angle = phase.cone_half_angle();
    out.phase_dropped = model.short_range();
    out.points = points;
    out.theoretical_exponent = N0 * model.rho();
    for (const Vec3& x : points)
        if (phase.in_bad_cone(x)) throw DomainError("eikonal_iterate: point inside the excluded cone");
    const int np = static_cast<int>(points.size());
    out.phi.assign(N0 + 1, std::vector<double>(np, 0.0));
    out.Phi.assign(np, 0.0);
    out.residual.assign(np, 0.0);
    ExceptionSlot failure;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
    for (int p = 0; p < np; ++p) failure.capture([&] {
        for (int n = 1; n <= N0; n += 2) out.phi[n][p] = phase.phi(n, points[p]);
        double Phi = 0.0;
        for (int n = 1; n <= N0; n += 2) Phi += out.phi[n][p] / std::pow(2.0 * xi_norm, n);
        out.Phi[p] = Phi;
        out.residual[p] = phase.residual(points[p]);
    });
    failure.rethrow_if_set();

    std::vector<double> radii;
    std::vector<double> mags;
    for (int p = 0; p < np; ++p) {
        radii.push_back(norm(points[p]));
        mags.push_back(std::abs(out.residual[p]));
    }
    const bool distinct = np >= 2 && *std::max_element(radii.begin(), radii.end()) >
                                         1.01 * *std::min_element(radii.begin(), radii.end());
    const bool nonzero = std::all_of(mags.begin(), mags.end(), [](double m) { return m > 0.0; });
    out.residual_decay_exponent = distinct && nonzero ? -numerics::fit_loglog(radii, mags).slope
                                                      : std::numeric_limits<double>::quiet_NaN();
    return out;
}

// ---------------------------------------------------------------------------------------------
// Lattice tables

namespace {

// phi_1 for the minus sign along e_z with its cylindrical gradient. The plus sign follows by
// reflection: phi_1^+(rho, z) = -phi_1^-(rho, -z).
struct PhaseTable {
    AxialField G;
    AxialField G_rho;
    AxialField G_z;
};

// Each rho row starts from one ray integral at z_min; along z, d phi_1 / dz = -v and
// d(d_rho phi_1) / dz = -d_rho v, so the row is accumulated cell by cell.
PhaseTable tabulate_phi1(const PotentialModel& model, double rho_max, double z_ext, double h, Execution exec) {
    const AxialGrid grid = AxialGrid::covering(rho_max, z_ext, h);
    PhaseTable t{AxialField(grid), AxialField(grid, Parity::odd), AxialField(grid)};
    const Vec3 d{0.0, 0.0, -1.0};
    const auto cell = numerics::gauss_legendre(8, 0.0, 1.0);
    ExceptionSlot failure;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
    for (int i = 0; i < grid.n_rho; ++i) failure.capture([&] {
        const double rho = grid.rho(i);
        const Vec3 start{rho, 0.0, grid.z(0)};
        const auto p = integrate_ray<Pack<2>>(start, d, [&](double s) {
            const Vec3 y = start + s * d;
            return Pack<2>{{model.evaluate(y) - model.evaluate(s * d), model.gradient(y)[0]}};
        });
        double G = -p.a[0];
        double G_rho = -p.a[1];
        for (int j = 0; j < grid.n_z; ++j) {
            if (j > 0) {
                const double z0 = grid.z(j - 1);
                const double dz = grid.z(j) - z0;
                double dv = 0.0;
                double dv_rho = 0.0;
                for (std::size_t q = 0; q < cell.size(); ++q) {
                    const Vec3 y{rho, 0.0, z0 + dz * cell.nodes[q]};
                    dv += cell.weights[q] * model.evaluate(y);
                    dv_rho += cell.weights[q] * model.gradient(y)[0];
                }
                G -= dz * dv;
                G_rho -= dz * dv_rho;
            }
            t.G.at(i, j) = G;
            t.G_rho.at(i, j) = G_rho;
            t.G_z.at(i, j) = -model.evaluate({rho, 0.0, grid.z(j)});
        }
    });
    failure.rethrow_if_set();
    return t;
}

struct PhaseSample {
    double phi;
    double d_rho;
    double d_z;
};

// phi_1^{+-}(rho, z) and its cylindrical derivatives from the minus-sign table.
PhaseSample sample_phase(const PhaseTable& t, Sign sign, double rho, double z) {
    if (sign == Sign::minus)
        return {t.G.sample(rho, z).real(), t.G_rho.sample(rho, z).real(), t.G_z.sample(rho, z).real()};
    return {-t.G.sample(rho, -z).real(), -t.G_rho.sample(rho, -z).real(), t.G_z.sample(rho, -z).real()};
}

// Fine table near the potential, coarse table far out where phi_1 varies on the scale |x|.
struct TwoLevelPhase {
    PhaseTable inner;
    PhaseTable outer;
    double inner_limit = 0.0;
    bool has_outer = false;

    PhaseSample sample(Sign sign, double rho, double z) const {
        if (!has_outer || std::max(rho, std::abs(z)) < inner_limit) return sample_phase(inner, sign, rho, z);
        return sample_phase(outer, sign, rho, z);
    }
};

TwoLevelPhase tabulate_two_level(const PotentialModel& model, double reach, Execution exec) {
    constexpr double inner_reach = 16.0;
    constexpr double inner_h = 0.1;
    TwoLevelPhase t;
    t.inner = tabulate_phi1(model, std::min(reach, inner_reach), std::min(reach, inner_reach), inner_h, exec);
    if (reach > inner_reach) {
        t.outer = tabulate_phi1(model, reach, reach, std::max(inner_h, reach / 300.0), exec);
        t.inner_limit = inner_reach - 3.0 * inner_h;
        t.has_outer = true;
    }
    return t;
}

double cone_angle(Sign sign, double rho, double z) {
    // Angle from the bad direction: +xi_hat for minus, -xi_hat for plus.
    const double axial = sign == Sign::minus ? z : -z;
    return std::atan2(rho, axial);
}

}  // namespace

cplx ApproximateEigenfunction::value(const Vec3& x) const {
    const double z = dot(x, direction);
    return psi.sample(norm(x - z * direction), z);
}

ApproximateEigenfunction transport_solve(const PotentialModel& model, const EikonalData& eikonal, int N,
                                         const TransportSolveSettings& settings, Execution exec) {
    if (!model.radial()) throw ParameterError("transport_solve: the axial lattice requires a radial model");
    if (N < 0) throw ParameterError("transport_solve: N must be non-negative");
    const double k = norm(eikonal.xi);
    if (!(k > 0.0)) throw ParameterError("transport_solve: |xi| must be positive");
    const bool zero = model.kind() == PotentialKind::zero;
    const bool use_phase = !zero && !(settings.drop_phase_short_range && model.short_range());
    if (use_phase && eikonal.N0 > 2)
        throw ParameterError("transport_solve: lattice phases support N0 <= 2 (rho >= 0.75)");
    if (!zero && !use_phase && !model.compact_or_fast_decaying() && settings.extent <= 0.0)
        throw ParameterError("transport_solve: slowly decaying model needs an explicit lattice extent");

    double extent = settings.extent;
    if (extent <= 0.0) extent = use_phase ? 12.0 : std::max(1.0, zero ? 1.0 : model.support_radius(1e-14)) + 2.0;
    const AxialGrid grid = AxialGrid::covering(extent, extent, settings.h);

    ApproximateEigenfunction out;
    out.sign = eikonal.sign;
    out.order = N;
    out.lambda = k * k;
    out.direction = normalized(eikonal.xi);
    out.phase_used = use_phase;
    out.grid = grid;
    out.phase = AxialField(grid);

    transport::AxialTransportInput input{grid, transport::sample_potential(model, grid, exec), nullptr, nullptr,
                                         eikonal.sign, N};
    AxialField q(grid);
    if (use_phase) {
        const PhaseTable table = tabulate_phi1(model, extent + 1.0, extent + 1.0, 0.1, exec);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
        for (int i = 0; i < grid.n_rho; ++i) {
            for (int j = 0; j < grid.n_z; ++j) {
                const PhaseSample s = sample_phase(table, eikonal.sign, grid.rho(i), grid.z(j));
                out.phase.at(i, j) = s.phi / (2.0 * k);
                q.at(i, j) = (s.d_rho * s.d_rho + s.d_z * s.d_z) / (4.0 * k * k);
            }
        }
        input.phase = &out.phase;
        input.residual = &q;
    }
    out.b = transport::solve(input, exec);

    AxialField total(grid);
    cplx scale = 1.0;
    const cplx I(0.0, 1.0);
    for (int n = 0; n <= N; ++n) {
        for (std::size_t idx = 0; idx < grid.size(); ++idx) total.values()[idx] += scale * out.b[n].values()[idx];
        scale /= 2.0 * I * k;
    }
    const AxialField src = transport::source(input, total, exec);
    const AxialField dz = numerics::d_z(total, exec);
    out.psi = AxialField(grid);
    out.residual = AxialField(grid);
    double sum = 0.0;
    double sum_incoming = 0.0;
    double psi_max = 0.0;
    for (int i = 0; i < grid.n_rho; ++i) {
        for (int j = 0; j < grid.n_z; ++j) {
            const double z = grid.z(j);
            const cplx e = std::exp(I * (k * z + out.phase.at(i, j).real()));
            out.psi.at(i, j) = e * total.at(i, j);
            out.residual.at(i, j) = e * (-2.0 * I * k * dz.at(i, j) + src.at(i, j));
            const bool interior = i <= grid.n_rho - 3 && j >= 2 && j <= grid.n_z - 3;
            const double rho = grid.rho(i);
            const bool cone = std::hypot(rho, z) > 1.0 && cone_angle(eikonal.sign, rho, z) < eikonal.cone_half_angle;
            if (!interior || cone) continue;
            const double weight = 2.0 * pi * (i == 0 ? grid.h / 8.0 : rho) * grid.h * grid.h;
            sum += weight * std::norm(out.residual.at(i, j));
            if ((eikonal.sign == Sign::minus) == (z < 0.0)) sum_incoming += weight * std::norm(out.residual.at(i, j));
            psi_max = std::max(psi_max, std::abs(out.psi.at(i, j)));
        }
    }
    out.residual_norm = std::sqrt(sum);
    out.residual_norm_incoming = std::sqrt(sum_incoming);
    out.psi_max_off_cone = psi_max;
    return out;
}

// ---------------------------------------------------------------------------------------------
// S0 kernel

namespace {

struct Profile {
    cplx b;
    cplx db;  // derivative along omega0
};

// Short-range context: lattice b_n for the minus sign along e_z, with derivative fields.
struct ShortRangeContext {
    double k;
    int N;
    std::vector<AxialField> B;
    std::vector<AxialField> B_rho;
    std::vector<AxialField> B_z;

    // b^{-}(x; w) = sum (2ik)^{-n} B_n(rho, z); b^{+}(x; w) = sum (2ik)^{-n} (-1)^n B_n(rho, -z).
    Profile profile(const Vec3& x, const Vec3& w, const Vec3& omega0, bool plus) const {
        const double z = dot(x, w);
        const Vec3 perp = x - z * w;
        const double rho = norm(perp);
        const double rho_dot = rho > 1e-12 ? dot(perp, omega0) / rho : 0.0;
        const double w_dot = dot(w, omega0);
        const double zq = plus ? -z : z;
        const cplx I(0.0, 1.0);
        cplx scale = 1.0;
        Profile p{0.0, 0.0};
        for (int n = 0; n <= N; ++n) {
            const double sgn = plus && (n % 2) ? -1.0 : 1.0;
            if (n == 0) {
                p.b += 1.0;
            } else {
                const cplx Bv = B[n].sample(rho, zq);
                const cplx Br = B_rho[n].sample(rho, zq);
                const cplx Bz = B_z[n].sample(rho, zq) * (plus ? -1.0 : 1.0);
                p.b += scale * sgn * Bv;
                p.db += scale * sgn * (Br * rho_dot + Bz * w_dot);
            }
            scale /= 2.0 * I * k;
        }
        return p;
    }
};

struct PlaneRule {
    numerics::QuadratureRule rule;
    Frame frame;
};

template <class F>
cplx plane_integral(const Vec3& omega0, double L, double taper, double k, double ppw, F&& integrand, Execution exec,
                    long* nodes) {
    const double wavelength = 2.0 * pi / k;
    const int per_axis = static_cast<int>(std::ceil(ppw * 2.0 * L / wavelength));
    const int panels = std::max(2, (per_axis + 15) / 16);
    const auto rule = numerics::composite_gauss_legendre(panels, 16, -L, L);
    const Frame f = frame_along(omega0);
    const int n = static_cast<int>(rule.size());
    std::vector<cplx> rows(n, 0.0);
    ExceptionSlot failure;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
    for (int i = 0; i < n; ++i) failure.capture([&] {
        cplx row = 0.0;
        const double u = rule.nodes[i];
        for (int j = 0; j < n; ++j) {
            const double w = rule.nodes[j];
            const double window = numerics::window_taper(std::hypot(u, w), L, taper);
            if (window == 0.0) continue;
            row += rule.weights[j] * window * integrand(u * f.e1 + w * f.e2);
        }
        rows[i] = rule.weights[i] * row;
    });
    failure.rethrow_if_set();
    if (nodes) *nodes += static_cast<long>(n) * n;
    cplx total = 0.0;
    for (const cplx& r : rows) total += r;
    return total;
}

void check_cap(const Vec3& w, const Vec3& omega0, const char* name) {
    if (!(dot(w, omega0) > 0.5))
        throw DomainError(std::string("s0_kernel: ") + name + " lies outside the cap omega.omega0 > 1/2");
}

struct S0Context {
    const PotentialModel* model;
    double k;
    int N;
    bool long_range;
    ShortRangeContext short_ctx;
    TwoLevelPhase table;

    cplx integrand(const Vec3& y, const Vec3& omega, const Vec3& omega_prime, const Vec3& omega0) const {
        const cplx I(0.0, 1.0);
        const double a_m = dot(omega_prime, omega0);
        const double a_p = dot(omega, omega0);
        const cplx plane = std::exp(I * k * dot(y, omega_prime - omega));
        const cplx free_part = plane * I * k * (a_m + a_p);
        if (!long_range) {
            const Profile m = short_ctx.profile(y, omega_prime, omega0, false);
            const Profile p = short_ctx.profile(y, omega, omega0, true);
            // conj(psi+) d psi- - conj(d psi+) psi- with psi = e^{ik x.w} b.
            const cplx d_minus = I * k * a_m * m.b + m.db;
            const cplx d_plus = I * k * a_p * p.b + p.db;
            return plane * (std::conj(p.b) * d_minus - std::conj(d_plus) * m.b) - free_part;
        }
        // Long range: psi = e^{i(k x.w + Phi)}. The part iK(e^{i dP} - 1), K = k(a_m + a_p), does not decay
        // on the plane (dP tends to a constant or grows), so it is integrated by parts once along the
        // in-plane transfer Q; what remains decays like |y|^{-rho}.
        struct Sampled {
            double P;
            double dP;
            Vec3 grad;
        };
        auto phase = [&](const Vec3& w, Sign sign) {
            const double z = dot(y, w);
            const Vec3 perp = y - z * w;
            const double rho = norm(perp);
            const PhaseSample s = table.sample(sign, rho, z);
            const Vec3 rho_hat = rho > 1e-12 ? (1.0 / rho) * perp : Vec3{0.0, 0.0, 0.0};
            const Vec3 grad = (1.0 / (2.0 * k)) * (s.d_rho * rho_hat + s.d_z * w);
            return Sampled{s.phi / (2.0 * k), dot(grad, omega0), grad};
        };
        const Sampled m = phase(omega_prime, Sign::minus);
        const Sampled p = phase(omega, Sign::plus);
        const Vec3 d = k * (omega_prime - omega);
        const Vec3 Q = d - dot(d, omega0) * omega0;
        const double Q2 = norm_sq(Q);
        const cplx rel = std::exp(I * (m.P - p.P));
        const double K = k * (a_m + a_p);
        const cplx by_parts = (I / Q2) * (-K * rel * dot(Q, m.grad - p.grad));
        return plane * (by_parts + I * rel * (m.dP + p.dP));
    }
};

S0Context make_context(const PotentialModel& model, double k, int N, double max_window, const S0Settings& settings,
                       Execution exec) {
    S0Context ctx;
    ctx.model = &model;
    ctx.k = k;
    ctx.N = N;
    ctx.long_range = model.kind() != PotentialKind::zero && (!model.short_range() || settings.phase_representation);
    const double reach = max_window * std::sqrt(2.0) + 1.0;
    if (ctx.long_range) {
        if (N != 0) throw ParameterError("s0_kernel: long-range models support N = 0");
        if (!model.radial()) throw ParameterError("s0_kernel: the phase table requires a radial model");
        if (default_N0(model.rho()) > 2) throw ParameterError("s0_kernel: long-range phases need rho >= 0.75");
        ctx.table = tabulate_two_level(model, reach, exec);
        return ctx;
    }
    ctx.short_ctx.k = k;
    ctx.short_ctx.N = N;
    if (N > 0 && model.kind() != PotentialKind::zero) {
        if (!model.radial() || !model.compact_or_fast_decaying())
            throw ParameterError("s0_kernel: transport lattice needs a radial, fast-decaying model");
        const double h = settings.lattice_h;
        const double R = std::max(1.0, model.support_radius(1e-14));
        const AxialGrid grid = AxialGrid::covering(R + 4.0 * h, reach, h);
        transport::AxialTransportInput input{grid, transport::sample_potential(model, grid, exec), nullptr, nullptr,
                                             Sign::minus, N};
        ctx.short_ctx.B = transport::solve(input, exec);
        for (const auto& f : ctx.short_ctx.B) {
            ctx.short_ctx.B_rho.push_back(numerics::d_rho(f, exec));
            ctx.short_ctx.B_z.push_back(numerics::d_z(f, exec));
        }
    } else {
        ctx.short_ctx.N = 0;
    }
    return ctx;
}

double auto_window(const PotentialModel& model, double k, const Vec3& omega, const Vec3& omega_prime,
                   const Vec3& omega0) {
    if (model.kind() == PotentialKind::zero) return 4.0;
    if (!model.short_range()) {
        // The long-range integrand decays only like |y|^{-rho}; the taper band must span about ten
        // oscillations of the in-plane transfer Q.
        const Vec3 d = k * (omega_prime - omega);
        const double Q = norm(d - dot(d, omega0) * omega0);
        return std::max(24.0, 10.0 / (0.2 * Q));
    }
    const double R = std::max(1.0, model.support_radius(1e-14));
    return (R + 1.0) / std::min(dot(omega, omega0), dot(omega_prime, omega0));
}

S0Result evaluate_s0(const S0Context& ctx, const Vec3& omega, const Vec3& omega_prime, const Vec3& omega0, double L,
                     const S0Settings& settings, Execution exec) {
    const double k = ctx.k;
    const cplx pref = cplx(0.0, -pi) * k * std::pow(2.0 * pi, -3.0);
    S0Result r;
    r.window = L;
    auto run = [&](double window) {
        return pref * plane_integral(
                          omega0, window, settings.taper_fraction, k, settings.points_per_wavelength,
                          [&](const Vec3& y) { return ctx.integrand(y, omega, omega_prime, omega0); }, exec, &r.nodes);
    };
    r.value = run(L);
    r.enlarged_value = run(settings.enlargement * L);
    const double mag = std::abs(r.value);
    r.window_sensitivity = mag > 0.0 ? std::abs(r.enlarged_value - r.value) / mag
                                     : (std::abs(r.enlarged_value) > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    r.converged = r.window_sensitivity <= settings.sensitivity_limit;
    return r;
}

void check_s0_args(double lambda, const Vec3& omega, const Vec3& omega_prime, const Vec3& omega0, int N,
                   const S0Settings& settings) {
    if (!(lambda > 0.0)) throw ParameterError("s0_kernel: lambda must be positive");
    if (N < 0) throw ParameterError("s0_kernel: N must be non-negative");
    if (!(settings.points_per_wavelength >= 8.0)) throw ParameterError("s0_kernel: need >= 8 points per wavelength");
    if (!(settings.taper_fraction > 0.0 && settings.taper_fraction < 1.0))
        throw ParameterError("s0_kernel: taper fraction must lie in (0, 1)");
    if (!(settings.enlargement > 1.0)) throw ParameterError("s0_kernel: enlargement must exceed 1");
    for (const Vec3* w : {&omega, &omega_prime, &omega0})
        if (std::abs(norm(*w) - 1.0) > 1e-9) throw ParameterError("s0_kernel: directions must be unit vectors");
    check_cap(omega, omega0, "omega");
    check_cap(omega_prime, omega0, "omega'");
    if (angle_between(omega, omega_prime) < 1e-9) throw DomainError("s0_kernel: omega must differ from omega'");
}

}  // namespace

S0Result s0_kernel(const PotentialModel& model, double lambda, const Vec3& omega, const Vec3& omega_prime,
                   const Vec3& omega0, int N, const S0Settings& settings, Execution exec) {
    check_s0_args(lambda, omega, omega_prime, omega0, N, settings);
    const double L =
        settings.window > 0.0 ? settings.window : auto_window(model, std::sqrt(lambda), omega, omega_prime, omega0);
    const S0Context ctx = make_context(model, std::sqrt(lambda), N, settings.enlargement * L, settings, exec);
    return evaluate_s0(ctx, omega, omega_prime, omega0, L, settings, exec);
}

DiagonalProbe diagonal_exponent_probe(const PotentialModel& model, double lambda, const Vec3& omega0,
                                      const std::vector<double>& angles, const S0Settings& settings, Execution exec) {
    if (angles.size() < 2) throw ParameterError("diagonal_exponent_probe: need at least two angles");
    for (std::size_t i = 1; i < angles.size(); ++i)
        if (!(angles[i] < angles[i - 1])) throw ParameterError("diagonal_exponent_probe: angles must decrease");
    if (!(angles.back() > 0.0)) throw ParameterError("diagonal_exponent_probe: angles must be positive");
    const Vec3 w0 = normalized(omega0);
    const Frame f = frame_along(w0);
    auto tilt = [&](double a) { return std::cos(a) * w0 + std::sin(a) * f.e1; };

    DiagonalProbe probe;
    probe.theoretical_exponent = -(1.0 + 1.0 / model.rho());
    const double k = std::sqrt(lambda);
    std::vector<double> windows;
    for (double a : angles) {
        check_s0_args(lambda, tilt(a / 2), tilt(-a / 2), w0, 0, settings);
        windows.push_back(settings.window > 0.0 ? settings.window : auto_window(model, k, tilt(a / 2), tilt(-a / 2), w0));
    }
    const double L_max = *std::max_element(windows.begin(), windows.end());
    const S0Context ctx = make_context(model, k, 0, settings.enlargement * L_max, settings, exec);
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const double a = angles[i];
        const S0Result r = evaluate_s0(ctx, tilt(a / 2), tilt(-a / 2), w0, windows[i], settings, exec);
        probe.angles.push_back(a);
        probe.separations.push_back(2.0 * std::sin(a / 2));
        probe.magnitudes.push_back(std::abs(r.value));
        probe.sensitivities.push_back(r.window_sensitivity);
        probe.reliable = probe.reliable && r.converged;
    }
    const bool positive = std::all_of(probe.magnitudes.begin(), probe.magnitudes.end(), [](double m) { return m > 0.0; });
    probe.fitted_exponent = positive ? numerics::fit_loglog(probe.separations, probe.magnitudes).slope
                                     : std::numeric_limits<double>::quiet_NaN();
    if (!positive) probe.reliable = false;
    return probe;
}

}  // namespace scatterlab::eikonal
