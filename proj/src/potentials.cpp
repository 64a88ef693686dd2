#include "scatterlab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "scatterlab/error.hpp"
#include "scatterlab/numerics/quadrature.hpp"

namespace scatterlab {

std::string to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::gaussian_well: return "gaussian_well";
        case PotentialKind::yukawa: return "yukawa";
        case PotentialKind::square_well: return "square_well";
        case PotentialKind::power_tail: return "power_tail";
        case PotentialKind::compact_bump: return "compact_bump";
        case PotentialKind::zero: return "zero";
        case PotentialKind::custom: return "custom";
    }
    return "unknown";
}

PotentialKind potential_kind_from_string(const std::string& name) {
    for (auto k : {PotentialKind::gaussian_well, PotentialKind::yukawa, PotentialKind::square_well,
                   PotentialKind::power_tail, PotentialKind::compact_bump, PotentialKind::zero})
        if (to_string(k) == name) return k;
    throw ParameterError("unknown potential kind '" + name + "'");
}

namespace {
void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) throw ParameterError(std::string(what) + " must be positive and finite");
}
}  // namespace

PotentialModel PotentialModel::zero() {
    PotentialModel m;
    m.kind_ = PotentialKind::zero;
    m.rho_ = 3.0;
    return m;
}

PotentialModel PotentialModel::gaussian_well(double v0, double width, double declared_rho) {
    require_positive(width, "gaussian_well width");
    require_positive(declared_rho, "declared rho");
    PotentialModel m;
    m.kind_ = PotentialKind::gaussian_well;
    m.v0_ = v0;
    m.range_ = width;
    m.rho_ = declared_rho;
    return m;
}

PotentialModel PotentialModel::yukawa(double g, double mu, double declared_rho) {
    require_positive(mu, "yukawa mu");
    require_positive(declared_rho, "declared rho");
    PotentialModel m;
    m.kind_ = PotentialKind::yukawa;
    m.v0_ = g;
    m.range_ = 1.0 / mu;
    m.rho_ = declared_rho;
    return m;
}

PotentialModel PotentialModel::square_well(double depth, double radius, double declared_rho) {
    require_positive(radius, "square_well radius");
    require_positive(declared_rho, "declared rho");
    PotentialModel m;
    m.kind_ = PotentialKind::square_well;
    m.v0_ = depth;
    m.range_ = radius;
    m.rho_ = declared_rho;
    return m;
}

PotentialModel PotentialModel::power_tail(double v0, double rho) {
    require_positive(rho, "power_tail rho");
    PotentialModel m;
    m.kind_ = PotentialKind::power_tail;
    m.v0_ = v0;
    m.rho_ = rho;
    return m;
}

PotentialModel PotentialModel::compact_bump(double v0, double radius, double declared_rho) {
    require_positive(radius, "compact_bump radius");
    require_positive(declared_rho, "declared rho");
    PotentialModel m;
    m.kind_ = PotentialKind::compact_bump;
    m.v0_ = v0;
    m.range_ = radius;
    m.rho_ = declared_rho;
    return m;
}

PotentialModel PotentialModel::custom(std::function<double(const Vec3&)> fn, double declared_rho,
                                      double support_radius) {
    if (!fn) throw ParameterError("custom potential needs a callable");
    require_positive(declared_rho, "declared rho");
    PotentialModel m;
    m.kind_ = PotentialKind::custom;
    m.custom_ = std::move(fn);
    m.rho_ = declared_rho;
    m.support_ = support_radius;
    return m;
}

double PotentialModel::radial(double r) const {
    r = std::abs(r);
    switch (kind_) {
        case PotentialKind::zero: return 0.0;
        case PotentialKind::gaussian_well: return v0_ * std::exp(-(r * r) / (range_ * range_));
        case PotentialKind::yukawa: return v0_ * std::exp(-r / range_) / std::max(r, yukawa_r_min);
        case PotentialKind::square_well: return r < range_ ? -v0_ : 0.0;
        case PotentialKind::power_tail: return v0_ * std::pow(1.0 + r * r, -0.5 * rho_);
        case PotentialKind::compact_bump: {
            const double s = r / range_;
            if (s >= 1.0) return 0.0;
            return v0_ * std::exp(1.0 - 1.0 / (1.0 - s * s));
        }
        case PotentialKind::custom: break;
    }
    throw ParameterError("radial profile requested for a non-radial model");
}

double PotentialModel::r_times(double r) const {
    if (kind_ == PotentialKind::yukawa) return v0_ * std::exp(-std::abs(r) / range_) * (r < 0 ? -1.0 : 1.0);
    return r * radial(r);
}

double PotentialModel::radial_derivative(double r) const {
    r = std::abs(r);
    switch (kind_) {
        case PotentialKind::zero:
        case PotentialKind::square_well: return 0.0;
        case PotentialKind::gaussian_well: return -2.0 * r / (range_ * range_) * radial(r);
        case PotentialKind::yukawa: {
            const double rr = std::max(r, yukawa_r_min);
            return -v0_ * std::exp(-rr / range_) * (rr / range_ + 1.0) / (rr * rr);
        }
        case PotentialKind::power_tail: return -rho_ * r * v0_ * std::pow(1.0 + r * r, -0.5 * rho_ - 1.0);
        case PotentialKind::compact_bump: {
            const double s = r / range_;
            if (s >= 1.0) return 0.0;
            const double d = 1.0 - s * s;
            return radial(r) * (-2.0 * s / (d * d)) / range_;
        }
        case PotentialKind::custom: break;
    }
    throw ParameterError("radial derivative requested for a non-radial model");
}

double PotentialModel::evaluate(const Vec3& x) const {
    if (kind_ == PotentialKind::custom) return custom_(x);
    return radial(norm(x));
}

Vec3 PotentialModel::gradient(const Vec3& x) const {
    if (kind_ != PotentialKind::custom) {
        const double r = norm(x);
        if (r == 0.0) return {0.0, 0.0, 0.0};
        return (radial_derivative(r) / r) * x;
    }
    Vec3 g{};
    for (int d = 0; d < 3; ++d) {
        const double step = 1e-5 * std::max(1.0, std::abs(x[d]));
        Vec3 a = x;
        Vec3 b = x;
        a[d] += step;
        b[d] -= step;
        g[d] = (custom_(a) - custom_(b)) / (2.0 * step);
    }
    return g;
}

double PotentialModel::laplacian(const Vec3& x) const {
    const double r = norm(x);
    switch (kind_) {
        case PotentialKind::zero:
        case PotentialKind::square_well: return 0.0;
        case PotentialKind::gaussian_well: {
            const double w2 = range_ * range_;
            return (4.0 * r * r / (w2 * w2) - 6.0 / w2) * radial(r);
        }
        case PotentialKind::yukawa: return radial(r) / (range_ * range_);
        case PotentialKind::power_tail:
            return v0_ * rho_ * std::pow(1.0 + r * r, -0.5 * rho_ - 2.0) * ((rho_ - 1.0) * r * r - 3.0);
        case PotentialKind::compact_bump: {
            const double s = r / range_;
            if (s >= 1.0) return 0.0;
            const double d = 1.0 - s * s;
            const double g1 = -2.0 * s / (d * d);
            const double g2 = -2.0 / (d * d) - 8.0 * s * s / (d * d * d);
            const double v = radial(r);
            const double v1 = v * g1 / range_;
            const double v2 = v * (g1 * g1 + g2) / (range_ * range_);
            return r == 0.0 ? 3.0 * v2 : v2 + 2.0 * v1 / r;
        }
        case PotentialKind::custom: break;
    }
    double total = 0.0;
    const double v = custom_(x);
    for (int d = 0; d < 3; ++d) {
        const double step = 1e-4 * std::max(1.0, std::abs(x[d]));
        Vec3 a = x;
        Vec3 b = x;
        a[d] += step;
        b[d] -= step;
        total += (custom_(a) - 2.0 * v + custom_(b)) / (step * step);
    }
    return total;
}

double PotentialModel::support_radius(double tol) const {
    switch (kind_) {
        case PotentialKind::zero: return 0.0;
        case PotentialKind::square_well:
        case PotentialKind::compact_bump: return range_;
        case PotentialKind::gaussian_well: {
            const double a = std::abs(v0_);
            if (a <= tol) return 0.0;
            return range_ * std::sqrt(std::log(a / tol));
        }
        case PotentialKind::yukawa: {
            // Solve |g| e^{-mu r} / r = tol by bisection.
            const double a = std::abs(v0_);
            if (a == 0.0) return 0.0;
            double lo = 1e-6;
            double hi = 1.0;
            while (a * std::exp(-hi / range_) / hi > tol) hi *= 2.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (a * std::exp(-mid / range_) / mid > tol ? lo : hi) = mid;
            }
            return hi;
        }
        case PotentialKind::power_tail: return v0_ == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        case PotentialKind::custom: return support_ > 0.0 ? support_ : std::numeric_limits<double>::infinity();
    }
    return std::numeric_limits<double>::infinity();
}

bool PotentialModel::compact_or_fast_decaying() const { return std::isfinite(support_radius()); }

PotentialModel PotentialModel::scaled(double s) const {
    PotentialModel m = *this;
    m.v0_ *= s;
    if (kind_ == PotentialKind::custom) {
        auto inner = custom_;
        m.custom_ = [inner, s](const Vec3& x) { return s * inner(x); };
    }
    return m;
}

double PotentialModel::l1_norm() const {
    switch (kind_) {
        case PotentialKind::zero: return 0.0;
        case PotentialKind::square_well: return 4.0 * std::numbers::pi * std::abs(v0_) * std::pow(range_, 3) / 3.0;
        case PotentialKind::power_tail:
            if (v0_ == 0.0) return 0.0;
            if (rho_ <= 3.0) return std::numeric_limits<double>::infinity();
            break;
        case PotentialKind::custom: throw ParameterError("l1_norm requires a radial model");
        default: break;
    }
    const auto result = numerics::integrate_to_infinity(
        [this](double r) { return r * std::abs(r_times(r)); }, 0.0, 16.0 * std::max(1.0, range_), 1e-16, 400, 24);
    if (!result.converged) return std::numeric_limits<double>::infinity();
    return 4.0 * std::numbers::pi * result.value;
}

namespace {

double bracket(double r) { return std::sqrt(1.0 + r * r); }

// k-th derivative of the profile along the ray, by central differences.
double profile_derivative(const PotentialModel& model, int order, double r) {
    auto v = [&](double s) { return model.evaluate({0.0, 0.0, s}); };
    const double step = 1e-3 * std::max(1.0, r);
    switch (order) {
        case 0: return v(r);
        case 1: return (v(r + step) - v(r - step)) / (2.0 * step);
        case 2: return (v(r + step) - 2.0 * v(r) + v(r - step)) / (step * step);
        default: throw ParameterError("verify_decay supports derivative orders up to 2");
    }
}

}  // namespace

DecayReport verify_decay(const PotentialModel& model, int derivative_orders, const std::vector<double>& radii,
                         double claimed_rho) {
    if (derivative_orders < 0 || derivative_orders > 2) throw ParameterError("derivative_orders must be in [0, 2]");
    if (radii.size() < 2) throw ParameterError("verify_decay needs at least two radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw ParameterError("verify_decay radii must be positive");
        if (i > 0 && !(radii[i] > radii[i - 1])) throw ParameterError("verify_decay radii must increase");
    }
    DecayReport report;
    report.pass = true;
    for (int k = 0; k <= derivative_orders; ++k) {
        DecayOrderReport o;
        o.order = k;
        o.declared_rho = claimed_rho;
        o.radii = radii;
        for (double r : radii) {
            const double w = std::abs(profile_derivative(model, k, r)) * std::pow(bracket(r), claimed_rho + k);
            o.weighted.push_back(w);
            o.empirical_constant = std::max(o.empirical_constant, w);
        }
        const std::size_t mid = radii.size() / 2;
        double upper_max = 0.0;
        for (std::size_t i = mid; i < radii.size(); ++i) upper_max = std::max(upper_max, o.weighted[i]);
        o.pass = std::isfinite(o.empirical_constant) && upper_max <= 1.05 * o.weighted[mid] + 1e-300;
        report.pass = report.pass && o.pass;
        report.orders.push_back(std::move(o));
    }
    return report;
}

DecayReport verify_decay(const PotentialModel& model, int derivative_orders, const std::vector<double>& radii) {
    return verify_decay(model, derivative_orders, radii, model.rho());
}

}  // namespace scatterlab
