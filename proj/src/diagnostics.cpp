#include "scatterlab/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "scatterlab/error.hpp"
#include "scatterlab/numerics/quadrature.hpp"

namespace scatterlab::diagnostics {

namespace {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

double radial_x_derivative(const PotentialModel& model, double x) {
    // x d/dx v(|x|) = |x| v'(|x|)
    const double r = std::abs(x);
    if (model.kind() == PotentialKind::zero) return 0.0;
    if (model.radial()) return r * model.radial_derivative(r);
    return x * model.gradient({x, 0.0, 0.0})[0];
}

// Outgoing root of 2 - theta - 1/theta = z h^2 with |theta| < 1.
cplx exterior_theta(cplx z, double h) {
    const cplx a = 2.0 - z * h * h;
    cplx theta = 0.5 * (a - std::sqrt(a * a - 4.0));
    if (std::abs(theta) > 1.0) theta = 1.0 / theta;
    return theta;
}

// Solves a complex symmetric tridiagonal system with constant off-diagonal e (Thomas algorithm).
void tridiagonal_solve(const std::vector<cplx>& diag, cplx e, std::vector<cplx>& rhs, std::vector<cplx>& work) {
    const std::size_t n = diag.size();
    work[0] = e / diag[0];
    rhs[0] /= diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const cplx m = diag[i] - e * work[i - 1];
        work[i] = e / m;
        rhs[i] = (rhs[i] - e * rhs[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= work[i] * rhs[i + 1];
}

}  // namespace

DiscretizedOperator DiscretizedOperator::build(const PotentialModel& model, int n, double h) {
    if (n < 3) throw ParameterError("DiscretizedOperator: need n >= 3");
    if (!(h > 0.0)) throw ParameterError("DiscretizedOperator: h must be positive");
    DiscretizedOperator op;
    op.h = h;
    op.x.resize(n);
    op.potential.resize(n);
    for (int j = 0; j < n; ++j) {
        op.x[j] = (j - 0.5 * (n - 1)) * h;
        op.potential[j] = model.evaluate({std::abs(op.x[j]), 0.0, 0.0});
    }
    return op;
}

Eigen::MatrixXd DiscretizedOperator::kinetic() const {
    const int n = size();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    const double s = 1.0 / (h * h);
    for (int j = 0; j < n; ++j) {
        k(j, j) = 2.0 * s;
        if (j + 1 < n) k(j, j + 1) = k(j + 1, j) = -s;
    }
    return k;
}

Eigen::MatrixXd DiscretizedOperator::matrix() const {
    Eigen::MatrixXd m = kinetic();
    m.diagonal() += potential;
    return m;
}

DilationGenerator DilationGenerator::build(const DiscretizedOperator& op) {
    const int n = op.size();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j + 1 < n; ++j) {
        d(j, j + 1) = 0.5 / op.h;
        d(j + 1, j) = -0.5 / op.h;
    }
    const Eigen::MatrixXd s = d * op.x.asDiagonal() + op.x.asDiagonal() * d;
    DilationGenerator g;
    g.matrix = cplx(0.0, -1.0) * s.cast<cplx>();
    return g;
}

double hermitian_defect(const Eigen::MatrixXcd& m) {
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

double hs_norm_resolvent_weight(const PotentialModel& model, double c) {
    if (!(c > 0.0)) throw ParameterError("hs_norm_resolvent_weight: c must be positive");
    const double l1 = model.l1_norm();
    if (!std::isfinite(l1))
        throw DomainError("hs_norm_resolvent_weight: int |v| diverges in three dimensions (rho = " +
                          std::to_string(model.rho()) + ")");
    // int (|xi|^2 + c)^{-2} dxi = c^{-1/2} 4 pi int_0^inf t^2 / (t^2 + 1)^2 dt; with t = tan(theta)
    // the integrand becomes sin^2(theta) on [0, pi/2].
    static const numerics::QuadratureRule rule = numerics::gauss_legendre(32, 0.0, pi / 2.0);
    const double angular = rule.integrate([](double th) { return std::sin(th) * std::sin(th); });
    const double xi_integral = 4.0 * pi * angular / std::sqrt(c);
    return l1 * xi_integral / std::pow(2.0 * pi, 3);
}

KatoReport kato_smoothness_integral(double r, const propagator::WavePacket& f, const std::vector<double>& times,
                                    Execution exec) {
    if (f.geometry != propagator::Geometry::line) throw ParameterError("kato_smoothness_integral: line grid required");
    if (times.empty()) throw ParameterError("kato_smoothness_integral: need at least one time");
    for (std::size_t i = 0; i < times.size(); ++i)
        if (!(times[i] > (i == 0 ? 0.0 : times[i - 1])))
            throw ParameterError("kato_smoothness_integral: times must be positive and increasing");
    KatoReport report;
    report.times = times;
    const double f_norm2 = f.norm() * f.norm();
    if (f_norm2 == 0.0) {
        report.integrals.assign(times.size(), 0.0);
        report.saturating = true;
        return report;
    }
    std::vector<double> weight(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = f.coordinate(j);
        weight[j] = std::pow(1.0 + x * x, -r);
    }
    // Panels of width max(1, t/16): unit width resolves the packet crossing the weight, and the
    // integrand varies on the scale t afterwards.
    std::vector<double> breaks{0.0};
    for (double T : times) {
        while (breaks.back() < T) {
            const double a = breaks.back();
            const double step = std::max(1.0, a / 16.0);
            breaks.push_back(T - a < 1.5 * step ? T : a + step);
        }
    }
    const numerics::QuadratureRule rule = numerics::panel_gauss_legendre(breaks, 8);
    const long m = static_cast<long>(rule.size());
    std::vector<double> values(m);
    std::vector<char> edge(m, 0);
    const std::size_t cut = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(f.size())));
    ExceptionSlot failure;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
    for (long i = 0; i < m; ++i) {
        failure.capture([&] {
            const auto psi = propagator::free_evolve(f, rule.nodes[i], Execution::serial);
            double s = 0.0;
            double outer = 0.0;
            double total = 0.0;
            for (std::size_t j = 0; j < psi.size(); ++j) {
                const double p = std::norm(psi.values[j]);
                s += weight[j] * p;
                total += p;
                if (j < cut || j >= psi.size() - cut) outer += p;
            }
            values[i] = s * f.dx;
            edge[i] = outer > 1e-6 * total;
        });
    }
    failure.rethrow_if_set();
    double acc = 0.0;
    std::size_t next = 0;
    for (long i = 0; i < m; ++i) {
        while (next < times.size() && rule.nodes[i] > times[next]) {
            report.integrals.push_back(acc / f_norm2);
            ++next;
        }
        acc += rule.weights[i] * values[i];
        if (edge[i]) report.valid = false;
    }
    while (report.integrals.size() < times.size()) report.integrals.push_back(acc / f_norm2);
    if (times.size() >= 2) {
        const double prev = report.integrals[times.size() - 2];
        report.last_growth = prev > 0.0 ? report.integrals.back() / prev - 1.0 : 0.0;
    }
    report.saturating = report.last_growth < 0.01;
    return report;
}

MourreReport mourre_check(const PotentialModel& model, std::pair<double, double> window, int n, double box_length) {
    const auto [l1, l2] = window;
    if (!(l1 > 0.0 && l2 > l1)) throw ParameterError("mourre_check: need 0 < lambda1 < lambda2");
    if (!(box_length > 0.0)) throw ParameterError("mourre_check: box length must be positive");
    const DiscretizedOperator op = DiscretizedOperator::build(model, n, box_length / n);
    if (!(l2 < 0.25 * op.max_kinetic_eigenvalue()))
        throw ParameterError("mourre_check: lambda2 = " + std::to_string(l2) + " exceeds a quarter of lambda_max = " +
                             std::to_string(op.max_kinetic_eigenvalue()));
    const double s2 = 1.0 / (op.h * op.h);
    Eigen::VectorXd diag = op.potential.array() + 2.0 * s2;
    Eigen::VectorXd sub = Eigen::VectorXd::Constant(n - 1, -s2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    std::vector<int> inside;
    for (int i = 0; i < n; ++i)
        if (eig.eigenvalues()[i] >= l1 && eig.eigenvalues()[i] <= l2) inside.push_back(i);
    if (inside.empty())
        throw WindowError("mourre_check: no eigenvalues of the discrete operator in [" + std::to_string(l1) + ", " +
                          std::to_string(l2) + "]");
    const auto m = static_cast<Eigen::Index>(inside.size());
    Eigen::MatrixXd p(n, m);
    for (Eigen::Index c = 0; c < m; ++c) p.col(c) = eig.eigenvectors().col(inside[static_cast<std::size_t>(c)]);

    // Banded operators applied to the n x m block.
    auto kinetic = [&](const Eigen::MatrixXd& y) {
        Eigen::MatrixXd out = 2.0 * s2 * y;
        out.bottomRows(n - 1) -= s2 * y.topRows(n - 1);
        out.topRows(n - 1) -= s2 * y.bottomRows(n - 1);
        return out;
    };
    auto hamiltonian = [&](const Eigen::MatrixXd& y) -> Eigen::MatrixXd {
        return kinetic(y) + op.potential.asDiagonal() * y;
    };
    auto centered = [&](const Eigen::MatrixXd& y) {
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, y.cols());
        out.topRows(n - 1) += (0.5 / op.h) * y.bottomRows(n - 1);
        out.bottomRows(n - 1) -= (0.5 / op.h) * y.topRows(n - 1);
        return out;
    };
    // A = -i S with S = D X + X D real antisymmetric, so i[H, A] = H S - S H.
    auto dilation = [&](const Eigen::MatrixXd& y) -> Eigen::MatrixXd {
        return centered(op.x.asDiagonal() * y) + op.x.asDiagonal() * centered(y);
    };

    Eigen::VectorXd virial(n);
    for (int j = 0; j < n; ++j) virial[j] = 2.0 * radial_x_derivative(model, op.x[j]);
    const Eigen::MatrixXd symbolic = 4.0 * kinetic(p) - virial.asDiagonal() * p;
    const Eigen::MatrixXd projected = p.transpose() * symbolic;
    const Eigen::MatrixXd exact = p.transpose() * (hamiltonian(dilation(p)) - dilation(hamiltonian(p)));

    MourreReport report;
    report.window_count = static_cast<int>(m);
    report.h = op.h;
    const Eigen::MatrixXd sym_projected = 0.5 * (projected + projected.transpose());
    const Eigen::MatrixXd sym_exact = 0.5 * (exact + exact.transpose());
    report.min_eigenvalue =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym_projected, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    report.matrix_commutator_min =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym_exact, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    return report;
}

namespace {

// Largest singular value of M from Lanczos on M^* M with full reorthogonalization.
template <class Apply, class ApplyAdjoint>
double largest_singular_value(Apply apply, ApplyAdjoint apply_adjoint, int n) {
    const int max_steps = std::min(n, 400);
    std::vector<Eigen::VectorXcd> basis;
    Eigen::VectorXcd v(n);
    // Deterministic start without parity symmetry.
    for (int j = 0; j < n; ++j) v[j] = 1.0 + 0.5 * std::sin(1.7 * j + 0.3) + cplx(0.0, 0.25 * std::cos(0.9 * j));
    v.normalize();
    std::vector<double> alpha;
    std::vector<double> beta;
    double previous = 0.0;
    double theta = 0.0;
    for (int step = 0; step < max_steps; ++step) {
        basis.push_back(v);
        Eigen::VectorXcd w = apply_adjoint(apply(v));
        const double a = v.dot(w).real();
        alpha.push_back(a);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) w -= b.dot(w) * b;
        const double b = w.norm();
        Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
        Eigen::VectorXd e = Eigen::Map<Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
        if (alpha.size() == 1) {
            theta = a;
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> t;
            t.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
            theta = t.eigenvalues().maxCoeff();
        }
        if (step > 2 && std::abs(theta - previous) <= 1e-13 * theta) break;
        if (b <= 1e-14 * std::max(1.0, theta)) break;
        previous = theta;
        beta.push_back(b);
        v = w / b;
    }
    return std::sqrt(std::max(theta, 0.0));
}

}  // namespace

LapReport lap_probe(const PotentialModel& model, double lambda, double r, const std::vector<double>& epsilons,
                    const LapSettings& settings, Execution exec) {
    if (epsilons.empty()) throw ParameterError("lap_probe: need at least one epsilon");
    for (std::size_t i = 0; i < epsilons.size(); ++i)
        if (!(epsilons[i] > 0.0) || (i > 0 && !(epsilons[i] < epsilons[i - 1])))
            throw ParameterError("lap_probe: epsilons must be positive and decreasing");
    if (!(r > 0.0)) throw ParameterError("lap_probe: r must be positive");
    const DiscretizedOperator op = DiscretizedOperator::build(model, settings.n, settings.h);
    const int n = op.size();
    const double eps_min = epsilons.back();
    const double s2 = 1.0 / (op.h * op.h);

    // Eigenvalues outside the free band [0, 4/h^2] are the discrete spectrum.
    if (model.kind() != PotentialKind::zero) {
        Eigen::VectorXd diag = op.potential.array() + 2.0 * s2;
        Eigen::VectorXd sub = Eigen::VectorXd::Constant(n - 1, -s2);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
        eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
        const Eigen::VectorXd& ev = eig.eigenvalues();
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            const bool discrete = ev[i] < 0.0 || ev[i] > op.max_kinetic_eigenvalue();
            if (discrete && std::abs(ev[i] - lambda) < 10.0 * eps_min)
                throw DomainError("lap_probe: lambda = " + std::to_string(lambda) +
                                  " lies within 10 eps of the discrete eigenvalue " + std::to_string(ev[i]));
        }
    }

    Eigen::VectorXd w(n);
    for (int j = 0; j < n; ++j) w[j] = std::pow(1.0 + op.x[j] * op.x[j], -0.5 * r);
    const cplx off = -s2;

    LapReport report;
    report.epsilons = epsilons;
    report.norms.assign(epsilons.size(), 0.0);
    const long count = static_cast<long>(epsilons.size());
    ExceptionSlot failure;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
    for (long i = 0; i < count; ++i) {
        failure.capture([&] {
            const cplx z(lambda, epsilons[static_cast<std::size_t>(i)]);
            const cplx theta = exterior_theta(z, op.h);
            std::vector<cplx> diag(n);
            for (int j = 0; j < n; ++j) diag[j] = 2.0 * s2 + op.potential[j] - z;
            diag.front() -= theta * s2;
            diag.back() -= theta * s2;
            std::vector<cplx> rhs(n);
            std::vector<cplx> work(n);
            // M = W (H - z)^{-1} W; (H - z) is complex symmetric, so M^* y = conj(M conj(y)).
            auto apply = [&](const Eigen::VectorXcd& y) {
                for (int j = 0; j < n; ++j) rhs[j] = w[j] * y[j];
                tridiagonal_solve(diag, off, rhs, work);
                Eigen::VectorXcd out(n);
                for (int j = 0; j < n; ++j) out[j] = w[j] * rhs[j];
                return out;
            };
            auto apply_adjoint = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
                return apply(y.conjugate()).conjugate();
            };
            report.norms[static_cast<std::size_t>(i)] = largest_singular_value(apply, apply_adjoint, n);
        });
    }
    failure.rethrow_if_set();
    const std::size_t k = report.norms.size();
    if (k >= 2) report.relative_change = std::abs(report.norms[k - 1] - report.norms[k - 2]) / report.norms[k - 2];
    report.stable = report.relative_change < 0.05;
    report.monotone = true;
    for (std::size_t i = 1; i < k; ++i)
        if (report.norms[i] < report.norms[i - 1] * (1.0 - 1e-10)) report.monotone = false;
    return report;
}

}  // namespace scatterlab::diagnostics
