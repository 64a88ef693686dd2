#include "scatterlab/cli/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "scatterlab/born.hpp"
#include "scatterlab/diagnostics.hpp"
#include "scatterlab/eikonal.hpp"
#include "scatterlab/error.hpp"
#include "scatterlab/partialwave.hpp"
#include "scatterlab/propagator.hpp"

namespace scatterlab::cli {

namespace {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr cplx I(0.0, 1.0);

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Check check(std::string name, double measured, std::string expected, bool pass) {
    return Check{std::move(name), measured, std::move(expected), pass};
}

Vec3 tilt(double a) { return {std::sin(a), 0.0, std::cos(a)}; }

// Closed-form s-wave phase shift of v = -depth for r < radius, reduced to (-pi/2, pi/2].
double square_well_s_wave(double depth, double radius, double k) {
    const double kp = std::sqrt(k * k + depth);
    double d = -k * radius + std::atan((k / kp) * std::tan(kp * radius));
    d = std::remainder(d, pi);
    if (d <= -pi / 2.0) d += pi;
    return d;
}

double l2_diff(const propagator::WavePacket& a, const propagator::WavePacket& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a.values[j] - b.values[j]);
    return std::sqrt(s * a.dx);
}

void criterion_1(CriterionResult& r, const AcceptanceOptions& o) {
    const auto model = PotentialModel::square_well(1.0, 1.0);
    const double delta = partialwave::radial_phase_shift(model, 0, 1.0) + o.phase_shift_perturbation;
    const double exact = square_well_s_wave(1.0, 1.0, 1.0);
    r.checks.push_back(check("|delta_0 - closed form|", std::abs(delta - exact), "< 1e-6", std::abs(delta - exact) < 1e-6));
    r.notes.push_back("delta_0 = " + fmt(delta) + ", closed form " + fmt(exact));
}

void criterion_2(CriterionResult& r, const AcceptanceOptions& o) {
    const auto model = PotentialModel::gaussian_well(-1.0, 1.0);
    const double k = 2.0;
    auto table = partialwave::phase_shift_table(model, k, 25);
    for (double& d : table.delta) d += o.phase_shift_perturbation;
    const auto spec = partialwave::smatrix_eigenvalues(table);
    double modulus = 0.0;
    double tail = 0.0;
    for (std::size_t l = 0; l < spec.eigenvalues.size(); ++l) {
        modulus = std::max(modulus, std::abs(std::abs(spec.eigenvalues[l]) - 1.0));
        if (l >= 20) tail = std::max(tail, std::abs(spec.eigenvalues[l] - 1.0));
    }
    r.checks.push_back(check("max ||e^{2i delta_l}| - 1|", modulus, "< 1e-12", modulus < 1e-12));
    r.checks.push_back(check("max_{l>=20} |e^{2i delta_l} - 1|", tail, "< 1e-3", tail < 1e-3));
    // Unitarity cross-check: the outgoing/incoming amplitude ratio of the channel solution must be
    // unimodular and equal to the tabulated eigenvalue.
    const std::vector<double> samples{20.0, 20.37, 20.81, 21.4, 22.0, 22.9};
    double flux = 0.0;
    double agreement = 0.0;
    for (int l = 0; l <= 4; ++l) {
        const auto dec = partialwave::radial_in_out_decomposition(model, l, k, samples);
        const cplx ratio = dec.b_plus / dec.b_minus;
        flux = std::max(flux, std::abs(std::abs(ratio) - 1.0));
        agreement = std::max(agreement, std::abs(ratio - spec.eigenvalues[static_cast<std::size_t>(l)]));
    }
    r.checks.push_back(check("max ||b+/b-| - 1|, l <= 4", flux, "< 1e-4", flux < 1e-4));
    r.checks.push_back(check("max |b+/b- - e^{2i delta_l}|, l <= 4", agreement, "< 1e-4", agreement < 1e-4));
    double sv = 0.0;
    for (double s : partialwave::assembled_smatrix_singular_values(table)) sv = std::max(sv, std::abs(s - 1.0));
    r.notes.push_back("assembled S-matrix: max |singular value - 1| = " + fmt(sv));
}

void criterion_3(CriterionResult& r, const AcceptanceOptions&) {
    const double g = 0.1;
    const double mu = 1.0;
    const double k = 2.0;
    const double theta = pi / 2.0;
    const auto model = PotentialModel::yukawa(g, mu);
    const double q = 2.0 * k * std::sin(theta / 2.0);
    const double closed = -g / (q * q + mu * mu);
    const cplx born = born::born_first_amplitude(model, k, theta);
    const cplx exact = partialwave::amplitude(partialwave::phase_shift_table(model, k, 40), theta);
    const double rel = std::abs(born - exact) / std::abs(exact);
    r.checks.push_back(check("|f_Born - f_exact| / |f_exact|", rel, "< 0.05", rel < 0.05));
    r.checks.push_back(check("|f_Born quadrature - (-g/(q^2+mu^2))|", std::abs(born - closed), "< 1e-10",
                             std::abs(born - closed) < 1e-10));
    r.notes.push_back("f_exact = (" + fmt(exact.real()) + ", " + fmt(exact.imag()) + "), f_Born = " + fmt(closed));
    r.notes.push_back("real parts: relative difference " + fmt(std::abs(born.real() - exact.real()) / std::abs(exact.real())));
    r.notes.push_back("magnitudes: relative difference " + fmt(std::abs(std::abs(born) - std::abs(exact)) / std::abs(exact)));
    r.notes.push_back("the gap is Im f_exact = " + fmt(exact.imag()) + ", second order in g and absent from first Born");
}

void criterion_4(CriterionResult& r, const AcceptanceOptions&) {
    const auto model = PotentialModel::gaussian_well(-1.0, 1.0);
    const std::vector<double> lambdas{25.0, 50.0, 100.0, 200.0};
    const double targets[2] = {-0.5, -1.0};
    for (int N = 0; N <= 1; ++N) {
        const auto rep = born::measure_error_order(model, lambdas, direction_xz(pi / 2.0), Vec3{0.0, 0.0, 1.0}, N);
        const double dev = std::abs(rep.slope - targets[N]);
        r.checks.push_back(check("slope N=" + std::to_string(N), rep.slope, fmt(targets[N]) + " +- 0.3",
                                 std::isfinite(rep.slope) && dev <= 0.3));
        std::string errs;
        for (double e : rep.errors) errs += " " + fmt(e);
        r.notes.push_back("N=" + std::to_string(N) + " errors at lambda 25..200:" + errs +
                          (rep.floor_warning ? " (below the 1e-10 quadrature floor; slope unreliable)" : ""));
    }
    for (int N = 0; N <= 1; ++N) {
        const auto fixed = born::measure_error_order_fixed_transfer(model, lambdas, 1.0, N);
        r.notes.push_back("supplementary, fixed |q| = 1: slope N=" + std::to_string(N) + " = " + fmt(fixed.slope) +
                          " (theory " + fmt(fixed.theoretical_slope) + ")");
    }
}

void criterion_5(CriterionResult& r, const AcceptanceOptions&) {
    const double v0 = 0.7;
    const auto model = PotentialModel::power_tail(v0, 2.0);
    double worst = 0.0;
    for (double x : {1.0, 5.0, 20.0})
        for (double xi : {1.0, 5.0}) {
            const auto res = eikonal::eikonal_phase_integral(model, {x, 0.0, 0.0}, {0.0, 0.0, xi}, eikonal::Sign::plus);
            const double closed = (pi * v0 / (4.0 * xi)) * (1.0 / std::sqrt(1.0 + x * x) - 1.0);
            worst = std::max(worst, std::abs(res.value - closed));
        }
    r.checks.push_back(check("max |Phi_+ - closed form|", worst, "< 1e-6", worst < 1e-6));
}

void criterion_6(CriterionResult& r, const AcceptanceOptions&) {
    const auto model = PotentialModel::gaussian_well(-1.0, 1.0);
    auto solve = [&](double lambda, int N) {
        const auto data = eikonal::eikonal_iterate(model, {0.0, 0.0, 1.0}, std::sqrt(lambda), 1, {});
        return eikonal::transport_solve(model, data, N);
    };
    const auto p0 = solve(25.0, 0);
    const auto p1 = solve(25.0, 1);
    const auto p2 = solve(25.0, 2);
    const double ratio = p0.residual_norm / p2.residual_norm;
    r.checks.push_back(check("residual N=0 / N=2 at lambda 25", ratio, ">= 5", ratio >= 5.0));
    const double slope = std::log(solve(100.0, 1).residual_norm / p1.residual_norm) / std::log(4.0);
    r.checks.push_back(check("lambda-slope at N=1", slope, "-0.5 +- 0.3", std::abs(slope + 0.5) <= 0.3));
    r.notes.push_back("off-cone residual N=0,1,2: " + fmt(p0.residual_norm) + " " + fmt(p1.residual_norm) + " " +
                      fmt(p2.residual_norm));
    r.notes.push_back("supplementary, incoming half-space N=0,1,2: " + fmt(p0.residual_norm_incoming) + " " +
                      fmt(p1.residual_norm_incoming) + " " + fmt(p2.residual_norm_incoming) + ", ratio " +
                      fmt(p0.residual_norm_incoming / p2.residual_norm_incoming));
}

void criterion_7(CriterionResult& r, const AcceptanceOptions&) {
    const auto model = PotentialModel::gaussian_well(-1.0, 1.0);
    const double lambda = 100.0;
    double worst = 0.0;
    double sensitivity = 0.0;
    for (double deg : {10.0, 20.0, 30.0}) {
        const double theta = deg * pi / 180.0;
        const auto s = eikonal::s0_kernel(model, lambda, tilt(theta / 2.0), tilt(-theta / 2.0), {0.0, 0.0, 1.0}, 4);
        const cplx exact = born::exact_kernel(model, lambda, theta);
        const double rel = std::abs(s.value - exact) / std::abs(exact);
        worst = std::max(worst, rel);
        sensitivity = std::max(sensitivity, s.window_sensitivity);
        r.notes.push_back(fmt(deg) + " deg: relative error " + fmt(rel) + ", window sensitivity " +
                          fmt(s.window_sensitivity));
    }
    r.checks.push_back(check("max relative error vs (ik/2pi) f", worst, "< 0.1", worst < 0.1));
    r.checks.push_back(check("max window sensitivity", sensitivity, "< 0.1", sensitivity < 0.1));
}

void criterion_8(CriterionResult& r, const AcceptanceOptions&) {
    const auto grid = propagator::default_line_grid();
    const auto fhat = propagator::gaussian_profile(0.0, 1.0, 2.0);
    const auto f = propagator::gaussian_packet(grid, 0.0, 1.0, 2.0);
    const double e100 = l2_diff(propagator::free_evolve(f, 100.0), propagator::free_asymptotics(fhat, 100.0, grid));
    const double e200 = l2_diff(propagator::free_evolve(f, 200.0), propagator::free_asymptotics(fhat, 200.0, grid));
    r.checks.push_back(check("L2 error at t = 100", e100, "<= 0.01", e100 <= 0.01));
    r.checks.push_back(check("L2 error at t = 200", e200, "< error at t = 100", e200 < e100));
}

std::string increments(const propagator::CauchyReport& rep) {
    std::string s;
    for (double d : rep.increments) s += " " + fmt(d);
    return s;
}

void criterion_9(CriterionResult& r, const AcceptanceOptions&) {
    const auto grid = propagator::default_line_grid();
    const auto f = propagator::gaussian_packet(grid, -40.0, 4.0, 2.0);
    const std::vector<double> times{20.0, 40.0, 80.0, 160.0, 320.0};
    const auto coulomb = PotentialModel::power_tail(0.5, 1.0);
    const auto gauss = propagator::moller_probe(PotentialModel::gaussian_well(-0.3, 1.0), f, times);
    const auto plain = propagator::moller_probe(coulomb, f, times);
    const auto mod = propagator::modified_moller_probe(coulomb, f, times);
    r.checks.push_back(check("gaussian_well decay ratio", gauss.decay_ratio, ">= 10, monotone, reflection-free",
                             gauss.converging && gauss.valid));
    r.checks.push_back(check("power_tail rho=1 unmodified decay ratio", plain.decay_ratio, "< 2, reflection-free",
                             plain.plateau && plain.valid));
    r.checks.push_back(check("power_tail rho=1 modified decay ratio", mod.decay_ratio, ">= 10, monotone, reflection-free",
                             mod.converging && mod.valid));
    r.notes.push_back("gaussian_well increments:" + increments(gauss));
    r.notes.push_back("unmodified increments:" + increments(plain));
    r.notes.push_back("modified increments:" + increments(mod));
}

void criterion_10(CriterionResult& r, const AcceptanceOptions&) {
    const auto model = PotentialModel::gaussian_well(-0.3, 1.0);
    const auto td = propagator::scattering_phase_from_time_domain(model, 1.0, 5.0);
    const cplx stationary = std::exp(2.0 * I * partialwave::radial_phase_shift(model, 0, 1.0));
    const double diff = std::abs(td.value - stationary);
    r.checks.push_back(check("|S_time - S_stationary|", diff, "< 1e-2, reflection-free", diff < 1e-2 && td.valid));
}

void criterion_11(CriterionResult& r, const AcceptanceOptions&) {
    const auto model = PotentialModel::gaussian_well(1.0, 1.0);
    const double value = diagnostics::hs_norm_resolvent_weight(model, 1.0);
    const double closed = std::sqrt(pi) / 8.0;
    const double rel = std::abs(value - closed) / closed;
    r.checks.push_back(check("relative error vs sqrt(pi)/8", rel, "< 0.01", rel < 0.01));
    const double scaling = std::abs(diagnostics::hs_norm_resolvent_weight(model, 16.0) / value - 0.25) / 0.25;
    r.checks.push_back(check("relative deviation of c -> 16c scaling from 1/4", scaling, "< 1e-12", scaling < 1e-12));
}

void criterion_12(CriterionResult& r, const AcceptanceOptions&) {
    const auto rep = diagnostics::mourre_check(PotentialModel::zero(), {1.0, 2.0}, 1024);
    r.checks.push_back(check("min projected commutator eigenvalue", rep.min_eigenvalue, "4.0 +- 0.1",
                             std::abs(rep.min_eigenvalue - 4.0) <= 0.1));
    r.notes.push_back(std::to_string(rep.window_count) + " eigenvalues in the window, h = " + fmt(rep.h));
}

void criterion_13(CriterionResult& r, const AcceptanceOptions&) {
    const auto grid = propagator::default_line_grid();
    const auto f = propagator::gaussian_packet(grid, -40.0, 4.0, 2.0);
    const std::vector<double> times{20.0, 40.0, 80.0, 160.0, 320.0};
    const auto one = diagnostics::kato_smoothness_integral(1.0, f, times);
    const auto quarter = diagnostics::kato_smoothness_integral(0.25, f, times);
    r.checks.push_back(check("r = 1 growth on the last doubling", one.last_growth, "< 0.01", one.saturating && one.valid));
    r.checks.push_back(check("r = 0.25 growth on the last doubling", quarter.last_growth, "> 0.10",
                             quarter.last_growth > 0.10 && quarter.valid));
}

void criterion_14(CriterionResult& r, const AcceptanceOptions&) {
    const auto zero = PotentialModel::zero();
    const auto one = diagnostics::lap_probe(zero, 1.0, 1.0, {3e-3, 1e-3});
    const auto quarter = diagnostics::lap_probe(zero, 1.0, 0.25, {3e-3, 1e-3});
    r.checks.push_back(check("r = 1 relative change", one.relative_change, "< 0.05", one.relative_change < 0.05));
    r.checks.push_back(check("r = 0.25 relative change", quarter.relative_change, "> 0.20", quarter.relative_change > 0.20));
}

void criterion_15(CriterionResult& r, const AcceptanceOptions&) {
    eikonal::S0Settings s;
    s.points_per_wavelength = 8.0;
    const std::vector<double> angles{0.3, 0.18, 0.1, 0.055, 0.03};
    for (double rho : {1.0, 0.75}) {
        const auto probe =
            eikonal::diagonal_exponent_probe(PotentialModel::power_tail(0.5, rho), 25.0, {0.0, 0.0, 1.0}, angles, s);
        r.checks.push_back(check("fitted exponent, rho = " + fmt(rho), probe.fitted_exponent,
                                 "reported against " + fmt(probe.theoretical_exponent), std::isfinite(probe.fitted_exponent)));
        if (!probe.reliable) r.notes.push_back("rho = " + fmt(rho) + ": window sensitivity above limit, fit unreliable");
    }
}

struct Criterion {
    int id;
    const char* title;
    bool informational;
    void (*run)(CriterionResult&, const AcceptanceOptions&);
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> table = {
        {1, "partial-wave exactness (square well s-wave)", false, criterion_1},
        {2, "S-matrix unitarity and accumulation at 1", false, criterion_2},
        {3, "Born cross-validation (weak Yukawa)", false, criterion_3},
        {4, "high-energy error order", false, criterion_4},
        {5, "eikonal phase closed form", false, criterion_5},
        {6, "approximate eigenfunction residual scaling", false, criterion_6},
        {7, "s0 versus the exact kernel", false, criterion_7},
        {8, "free asymptotics", false, criterion_8},
        {9, "short/long-range dichotomy", false, criterion_9},
        {10, "time-domain S-matrix", false, criterion_10},
        {11, "Hilbert-Schmidt identity", false, criterion_11},
        {12, "Mourre positivity", false, criterion_12},
        {13, "Kato-smoothness threshold", false, criterion_13},
        {14, "limiting absorption stability", false, criterion_14},
        {15, "diagonal singularity probe", true, criterion_15},
    };
    return table;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& progress) {
    for (int id : options.criteria)
        if (id < 1 || id > acceptance_criterion_count)
            throw ParameterError("acceptance criterion " + std::to_string(id) + " does not exist (1.." +
                                 std::to_string(acceptance_criterion_count) + ")");
    std::vector<CriterionResult> results;
    for (const Criterion& c : criteria()) {
        if (!options.criteria.empty() &&
            std::find(options.criteria.begin(), options.criteria.end(), c.id) == options.criteria.end())
            continue;
        CriterionResult r;
        r.id = c.id;
        r.title = c.title;
        r.informational = c.informational;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(r, options);
            r.pass = !r.checks.empty() &&
                     std::all_of(r.checks.begin(), r.checks.end(), [](const Check& k) { return k.pass; });
        } catch (const std::exception& e) {
            r.error = e.what();
            r.pass = false;
        }
        r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (progress) progress(r);
        results.push_back(std::move(r));
    }
    return results;
}

void print_criterion(std::ostream& out, const CriterionResult& r) {
    char head[256];
    const char* status = r.pass ? (r.informational ? "INFO" : "PASS") : "FAIL";
    std::snprintf(head, sizeof head, "[%s] criterion %2d: %s (%.2f s)", status, r.id, r.title.c_str(),
                  r.runtime_seconds);
    out << head << '\n';
    for (const Check& c : r.checks)
        out << "    " << (c.pass ? "ok  " : "FAIL") << "  " << c.name << " = " << fmt(c.measured) << "  (expected "
            << c.expected << ")\n";
    for (const std::string& n : r.notes) out << "    note  " << n << '\n';
    if (!r.error.empty()) out << "    error " << r.error << '\n';
}

nlohmann::json to_json(const CriterionResult& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const Check& c : r.checks)
        checks.push_back({{"name", c.name}, {"measured", c.measured}, {"expected", c.expected}, {"pass", c.pass}});
    nlohmann::json j = {{"id", r.id},
                        {"title", r.title},
                        {"informational", r.informational},
                        {"pass", r.pass},
                        {"runtime_seconds", r.runtime_seconds},
                        {"checks", checks},
                        {"notes", r.notes}};
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

}  // namespace scatterlab::cli
