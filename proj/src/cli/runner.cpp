#include "scatterlab/cli/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "scatterlab/born.hpp"
#include "scatterlab/diagnostics.hpp"
#include "scatterlab/eikonal.hpp"
#include "scatterlab/error.hpp"
#include "scatterlab/execution.hpp"
#include "scatterlab/partialwave.hpp"
#include "scatterlab/propagator.hpp"

namespace scatterlab::cli {

namespace {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr cplx I(0.0, 1.0);

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> doubles(const json& v) { return v.get<std::vector<double>>(); }

Vec3 vec3(const json& v) { return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()}; }

Vec3 tilt(double a) { return {std::sin(a), 0.0, std::cos(a)}; }

propagator::GridSpec grid_from(const json& g) {
    propagator::GridSpec grid;
    grid.geometry = g.at("geometry").get<std::string>() == "radial" ? propagator::Geometry::radial
                                                                     : propagator::Geometry::line;
    grid.n = g.at("n").get<int>();
    grid.dx = g.at("dx").get<double>();
    if (grid.n < 16 || (grid.n & (grid.n - 1)) != 0) throw ParameterError("grid.n must be a power of two >= 16");
    if (!(grid.dx > 0.0)) throw ParameterError("grid.dx must be positive");
    return grid;
}

propagator::WavePacket packet_from(const json& p, const propagator::GridSpec& grid) {
    const double x0 = p.at("x0").get<double>();
    const double sigma = p.at("sigma").get<double>();
    if (!(sigma > 0.0)) throw ParameterError("packet.sigma must be positive");
    if (grid.geometry == propagator::Geometry::radial && x0 < 6.0 * sigma)
        throw ParameterError("radial packets need x0 >= 6 sigma so that u(0) = 0 is consistent");
    return propagator::gaussian_packet(grid, x0, sigma, p.at("k0").get<double>());
}

void run_phaseshift(const json& d, const PotentialModel& model, ResultRecord& rec) {
    partialwave::RadialSettings s;
    s.dr = d.at("dr").get<double>();
    s.r_max = d.at("r_max").get<double>();
    const int l_max = d.at("l_max").get<int>();
    rec.table.columns = {"k", "l", "delta", "S"};
    json tables = json::array();
    for (double k : doubles(d.at("k"))) {
        const auto t = partialwave::phase_shift_table(model, k, l_max, s);
        for (int l = 0; l <= l_max; ++l) {
            const double dl = t.delta[static_cast<std::size_t>(l)];
            rec.table.rows.push_back({k, static_cast<long long>(l), dl, std::exp(2.0 * I * dl)});
        }
        if (!t.tail_monotone) rec.warnings.push_back("tail_not_monotone k=" + num(k));
        tables.push_back({{"k", k}, {"r_max", t.r_max}, {"dr", t.dr}, {"tail_monotone", t.tail_monotone}});
    }
    rec.results["tables"] = tables;
}

void run_amplitude(const json& d, const PotentialModel& model, ResultRecord& rec) {
    partialwave::RadialSettings s;
    s.dr = d.at("dr").get<double>();
    const double k = d.at("k").get<double>();
    const auto table = partialwave::phase_shift_table(model, k, d.at("l_max").get<int>(), s);
    const auto kernel = partialwave::amplitude_kernel(table, doubles(d.at("theta")));
    rec.table.columns = {"theta", "f", "kernel"};
    for (std::size_t i = 0; i < kernel.theta.size(); ++i)
        rec.table.rows.push_back({kernel.theta[i], kernel.values[i], (I * k / (2.0 * pi)) * kernel.values[i]});
    rec.results["normalization"] = kernel.normalization;
    rec.results["lambda"] = kernel.lambda;
    for (const auto& f : kernel.flags) rec.warnings.push_back(f);
}

void run_born(const json& d, const PotentialModel& model, ResultRecord& rec) {
    const double k = d.at("k").get<double>();
    const bool compare = d.at("compare_exact").get<bool>();
    rec.table.columns = {"theta", "q", "f_born"};
    partialwave::PhaseShiftTable table;
    if (compare) {
        table = partialwave::phase_shift_table(model, k, d.at("l_max").get<int>());
        rec.table.columns.insert(rec.table.columns.end(), {"f_exact", "relative_difference"});
    }
    for (double theta : doubles(d.at("theta"))) {
        const cplx fb = born::born_first_amplitude(model, k, theta);
        std::vector<Cell> row{theta, 2.0 * k * std::sin(theta / 2.0), fb};
        if (compare) {
            const cplx fe = partialwave::amplitude(table, theta);
            row.push_back(fe);
            row.push_back(std::abs(fb - fe) / std::abs(fe));
        }
        rec.table.rows.push_back(std::move(row));
    }
}

void run_highenergy(const json& d, const PotentialModel& model, ResultRecord& rec) {
    const auto lambdas = doubles(d.at("lambda"));
    const double theta = d.at("theta").get<double>();
    const double q = d.at("momentum_transfer").get<double>();
    rec.table.columns = {"N", "lambda", "error", "exact_magnitude"};
    json fits = json::array();
    for (int N : d.at("orders").get<std::vector<int>>()) {
        const auto rep = q > 0.0 ? born::measure_error_order_fixed_transfer(model, lambdas, q, N)
                                 : born::measure_error_order(model, lambdas, direction_xz(theta), {0.0, 0.0, 1.0}, N);
        for (std::size_t i = 0; i < rep.lambdas.size(); ++i)
            rec.table.rows.push_back({static_cast<long long>(N), rep.lambdas[i], rep.errors[i], rep.exact_magnitudes[i]});
        fits.push_back({{"N", N},
                        {"slope", rep.slope},
                        {"theoretical_slope", rep.theoretical_slope},
                        {"floor_warning", rep.floor_warning}});
        if (rep.floor_warning) rec.flags.push_back("floor_warning N=" + std::to_string(N));
    }
    rec.results["fits"] = fits;
    rec.tolerances["error_floor"] = 1e-10;
}

void run_eikonal(const json& d, const PotentialModel& model, ResultRecord& rec) {
    const Vec3 xi = vec3(d.at("xi"));
    if (!(norm(xi) > 0.0)) throw ParameterError("xi must be nonzero");
    int N0 = d.at("N0").get<int>();
    if (N0 == 0) N0 = eikonal::default_N0(model.rho());
    std::vector<Vec3> points;
    for (const auto& p : d.at("points")) points.push_back(vec3(p));
    const auto sign = d.at("sign").get<std::string>() == "plus" ? eikonal::Sign::plus : eikonal::Sign::minus;
    const auto data = eikonal::eikonal_iterate(model, normalized(xi), norm(xi), N0, points, sign);
    rec.table.columns = {"x", "y", "z", "Phi", "residual"};
    for (int n = 1; n <= N0; ++n) rec.table.columns.push_back("phi_" + std::to_string(n));
    for (std::size_t p = 0; p < points.size(); ++p) {
        std::vector<Cell> row{points[p][0], points[p][1], points[p][2], data.Phi[p], data.residual[p]};
        for (int n = 1; n <= N0; ++n) row.push_back(data.phi[static_cast<std::size_t>(n)][p]);
        rec.table.rows.push_back(std::move(row));
    }
    rec.results["N0"] = N0;
    rec.results["residual_decay_exponent"] = data.residual_decay_exponent;
    rec.results["theoretical_exponent"] = data.theoretical_exponent;
    rec.results["cone_half_angle"] = data.cone_half_angle;
    if (data.phase_dropped) rec.warnings.push_back("phase_dropped_short_range");
}

void run_s0(const json& d, const PotentialModel& model, ResultRecord& rec) {
    const double lambda = d.at("lambda").get<double>();
    const bool compare = d.at("compare_exact").get<bool>() && model.short_range();
    eikonal::S0Settings s;
    s.window = d.at("window").get<double>();
    const int N = d.at("N").get<int>();
    rec.table.columns = {"theta_deg", "s0", "window_sensitivity", "converged"};
    if (compare) rec.table.columns.insert(rec.table.columns.end(), {"exact", "relative_difference"});
    for (double deg : doubles(d.at("theta_deg"))) {
        const double theta = deg * pi / 180.0;
        const auto r = eikonal::s0_kernel(model, lambda, tilt(theta / 2.0), tilt(-theta / 2.0), {0.0, 0.0, 1.0}, N, s);
        std::vector<Cell> row{deg, r.value, r.window_sensitivity, r.converged};
        if (compare) {
            const cplx exact = born::exact_kernel(model, lambda, theta);
            row.push_back(exact);
            row.push_back(std::abs(r.value - exact) / std::abs(exact));
        }
        if (!r.converged) rec.flags.push_back("s0_not_converged theta_deg=" + num(deg));
        rec.table.rows.push_back(std::move(row));
    }
    rec.tolerances["window_sensitivity_limit"] = s.sensitivity_limit;
}

void run_propagate(const json& d, const PotentialModel& model, ResultRecord& rec) {
    if (d.at("mode").get<std::string>() == "time_domain_smatrix") {
        const double k = d.at("k").get<double>();
        const auto td = propagator::scattering_phase_from_time_domain(model, k, d.at("sigma").get<double>());
        const cplx stationary = std::exp(2.0 * I * partialwave::radial_phase_shift(model, 0, k));
        rec.table.columns = {"k", "S_time_domain", "S_stationary", "difference"};
        rec.table.rows.push_back({k, td.value, stationary, std::abs(td.value - stationary)});
        rec.results = {{"bandwidth", td.bandwidth}, {"start_radius", td.start_radius}, {"duration", td.duration},
                       {"valid", td.valid}};
        if (!td.valid) rec.flags.push_back("reflection: edge monitor tripped");
        return;
    }
    const auto grid = grid_from(d.at("grid"));
    const auto f = packet_from(d.at("packet"), grid);
    propagator::EvolutionConfig cfg;
    cfg.dt = d.at("dt").get<double>();
    cfg.model = model;
    const auto out = propagator::split_step_evolve(f, cfg, d.at("t").get<double>());
    const int stride = std::max(1, d.at("stride").get<int>());
    rec.table.columns = {"x", "psi", "density"};
    for (std::size_t j = 0; j < out.size(); j += static_cast<std::size_t>(stride))
        rec.table.rows.push_back({out.coordinate(j), out.values[j], std::norm(out.values[j])});
    rec.results = {{"t", out.t},
                   {"initial_norm", f.norm()},
                   {"final_norm", out.norm()},
                   {"valid", out.valid},
                   {"max_edge_fraction", out.max_edge_fraction},
                   {"lambda_max", propagator::max_kinetic_eigenvalue(grid.dx)}};
    rec.tolerances["edge_fraction"] = cfg.edge_fraction;
    rec.tolerances["edge_threshold"] = cfg.edge_threshold;
    if (!out.valid) rec.flags.push_back("reflection: edge monitor tripped");
}

void run_moller(const json& d, const PotentialModel& model, ResultRecord& rec) {
    const auto grid = grid_from(d.at("grid"));
    const auto f = packet_from(d.at("packet"), grid);
    propagator::ProbeSettings s;
    s.evolution.dt = d.at("dt").get<double>();
    const bool modified = d.at("modified").get<bool>();
    const auto times = doubles(d.at("times"));
    const auto rep = modified ? propagator::modified_moller_probe(model, f, times, s)
                              : propagator::moller_probe(model, f, times, s);
    rec.table.columns = {"T_start", "T_end", "increment"};
    for (std::size_t i = 0; i < rep.increments.size(); ++i)
        rec.table.rows.push_back({rep.times[i], rep.times[i + 1], rep.increments[i]});
    const char* verdict = rep.converging ? "converging" : rep.plateau ? "plateau" : "inconclusive";
    rec.results = {{"verdict", verdict},           {"decay_ratio", rep.decay_ratio}, {"monotone", rep.monotone},
                   {"converging", rep.converging}, {"plateau", rep.plateau},         {"valid", rep.valid},
                   {"modified", rep.modified}};
    rec.tolerances["noise_floor"] = propagator::CauchyReport::noise_floor;
    rec.tolerances["converging_ratio"] = 10.0;
    rec.tolerances["plateau_ratio"] = 2.0;
    if (!rep.valid) rec.flags.push_back("reflection: edge monitor tripped");
}

void run_diagnose(const json& d, const PotentialModel& model, ResultRecord& rec) {
    const std::string check = d.at("check").get<std::string>();
    if (check == "hs") {
        const double c = d.at("c").get<double>();
        rec.table.columns = {"c", "hs_norm_squared"};
        rec.table.rows.push_back({c, diagnostics::hs_norm_resolvent_weight(model, c)});
    } else if (check == "kato") {
        const auto grid = propagator::default_line_grid();
        const auto f = packet_from(d.at("packet"), grid);
        const auto rep = diagnostics::kato_smoothness_integral(d.at("r").get<double>(), f, doubles(d.at("times")));
        rec.table.columns = {"T", "integral"};
        for (std::size_t i = 0; i < rep.times.size(); ++i) rec.table.rows.push_back({rep.times[i], rep.integrals[i]});
        rec.results = {{"last_growth", rep.last_growth}, {"saturating", rep.saturating}, {"valid", rep.valid}};
        rec.tolerances["saturation_growth"] = 0.01;
        if (!rep.valid) rec.flags.push_back("reflection: edge monitor tripped");
    } else if (check == "mourre") {
        const auto w = d.at("window").get<std::vector<double>>();
        const auto rep = diagnostics::mourre_check(model, {w[0], w[1]}, d.at("n").get<int>(),
                                                   d.at("box_length").get<double>());
        rec.table.columns = {"lambda1", "lambda2", "min_eigenvalue", "matrix_commutator_min", "window_count", "h"};
        rec.table.rows.push_back({w[0], w[1], rep.min_eigenvalue, rep.matrix_commutator_min,
                                  static_cast<long long>(rep.window_count), rep.h});
    } else {
        diagnostics::LapSettings s;
        s.n = d.at("n").get<int>();
        s.h = d.at("h").get<double>();
        const auto rep = diagnostics::lap_probe(model, d.at("lambda").get<double>(), d.at("r").get<double>(),
                                                doubles(d.at("epsilons")), s);
        rec.table.columns = {"epsilon", "weighted_resolvent_norm"};
        for (std::size_t i = 0; i < rep.epsilons.size(); ++i) rec.table.rows.push_back({rep.epsilons[i], rep.norms[i]});
        rec.results = {{"relative_change", rep.relative_change}, {"stable", rep.stable}, {"monotone", rep.monotone}};
        rec.tolerances["stability_change"] = 0.05;
    }
}

void run_acceptance_experiment(const json& d, ResultRecord& rec) {
    AcceptanceOptions o;
    o.criteria = d.at("criteria").get<std::vector<int>>();
    const auto results = run_acceptance(o);
    rec.table.columns = {"criterion", "title", "status", "checks_passed", "checks"};
    json report = json::array();
    bool all = true;
    for (const auto& r : results) {
        long long passed = 0;
        for (const auto& c : r.checks) passed += c.pass ? 1 : 0;
        rec.table.rows.push_back({static_cast<long long>(r.id), r.title,
                                  std::string(r.pass ? (r.informational ? "info" : "pass") : "fail"), passed,
                                  static_cast<long long>(r.checks.size())});
        report.push_back(to_json(r));
        all = all && r.pass;
        if (!r.pass) rec.flags.push_back("acceptance_failed criterion=" + std::to_string(r.id));
    }
    rec.results = {{"all_pass", all}, {"criteria", report}};
}

json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, cplx>) return json::array({v.real(), v.imag()});
            else return json(v);
        },
        c);
}

std::string cell_csv(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, cplx>) return num(v.real()) + "," + num(v.imag());
            else if constexpr (std::is_same_v<T, double>) return num(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else {
                if (v.find_first_of(",\"\n") == std::string::npos) return v;
                std::string q = "\"";
                for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                return q + "\"";
            }
        },
        c);
}

bool is_complex_column(const Table& t, std::size_t col) {
    return !t.rows.empty() && std::holds_alternative<cplx>(t.rows.front()[col]);
}

json record_json(const ResultRecord& rec, const ScenarioConfig& cfg, const RunOptions& options, double runtime) {
    json rows = json::array();
    for (const auto& row : rec.table.rows) {
        json r = json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rows.push_back(r);
    }
    json modules = json::object();
    for (const char* m : {"numerics", "potentials", "partialwave", "born", "eikonal", "propagator", "diagnostics", "cli"})
        modules[m] = version;
    return {{"experiment", rec.experiment},
            {"input", rec.input},
            {"results", rec.results},
            {"table", {{"columns", rec.table.columns}, {"rows", rows}}},
            {"provenance",
             {{"version", version},
              {"modules", modules},
              {"config_hash", cfg.hash},
              {"seed", cfg.seed},
              {"source", cfg.source},
              {"strict", options.strict},
              {"threads", max_threads()},
              {"runtime_seconds", runtime},
              {"tolerances", rec.tolerances},
              {"warnings", rec.warnings},
              {"flags", rec.flags}}}};
}

bool write_file(const std::filesystem::path& path, const std::string& text, std::ostream& err) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) {
        err << "error: cannot write " << path.string() << '\n';
        return false;
    }
    return true;
}

std::filesystem::path prepare_dir(const std::string& dir) {
    std::filesystem::path p(dir.empty() ? "." : dir);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

ResultRecord execute(const ScenarioConfig& config) {
    ResultRecord rec;
    rec.experiment = to_string(config.kind);
    rec.input = config.document;
    const json& d = config.document;
    if (config.kind == ExperimentKind::acceptance) {
        run_acceptance_experiment(d, rec);
        return rec;
    }
    const PotentialModel model = build_potential(d.at("potential"));
    switch (config.kind) {
        case ExperimentKind::phaseshift: run_phaseshift(d, model, rec); break;
        case ExperimentKind::amplitude: run_amplitude(d, model, rec); break;
        case ExperimentKind::born: run_born(d, model, rec); break;
        case ExperimentKind::highenergy: run_highenergy(d, model, rec); break;
        case ExperimentKind::eikonal: run_eikonal(d, model, rec); break;
        case ExperimentKind::s0: run_s0(d, model, rec); break;
        case ExperimentKind::propagate: run_propagate(d, model, rec); break;
        case ExperimentKind::moller: run_moller(d, model, rec); break;
        case ExperimentKind::diagnose: run_diagnose(d, model, rec); break;
        case ExperimentKind::acceptance: break;
    }
    return rec;
}

std::string render_csv(const ResultRecord& rec, const ScenarioConfig& cfg) {
    std::string out = "# scatterlab " + rec.experiment + " config_hash=" + cfg.hash +
                      " seed=" + std::to_string(cfg.seed) + " version=" + version + "\n";
    std::string header;
    for (std::size_t c = 0; c < rec.table.columns.size(); ++c) {
        if (c) header += ",";
        const std::string& name = rec.table.columns[c];
        header += is_complex_column(rec.table, c) ? "re_" + name + ",im_" + name : name;
    }
    out += header + "\n";
    for (const auto& row : rec.table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ",";
            out += cell_csv(row[c]);
        }
        out += "\n";
    }
    return out;
}

int run_text(const std::string& text, const std::string& source, const RunOptions& options, std::ostream& out,
             std::ostream& err) {
    ScenarioConfig cfg;
    try {
        cfg = parse_config(text, source);
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return exit_validation;
    }
    std::filesystem::path dir;
    try {
        dir = prepare_dir(options.out_dir);
    } catch (const std::exception& e) {
        err << "error: cannot create output directory " << options.out_dir << ": " << e.what() << '\n';
        return exit_validation;
    }
    const auto start = std::chrono::steady_clock::now();
    ResultRecord rec;
    int code = exit_ok;
    std::string failure;
    try {
        rec = execute(cfg);
    } catch (const ParameterError& e) {
        code = exit_validation;
        failure = e.what();
    } catch (const DomainError& e) {
        code = exit_validation;
        failure = e.what();
    } catch (const WindowError& e) {
        code = exit_validation;
        failure = e.what();
    } catch (const std::exception& e) {
        code = exit_numerical;
        failure = e.what();
    }
    const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto json_path = dir / (cfg.output + ".json");
    if (code != exit_ok) {
        rec.experiment = to_string(cfg.kind);
        rec.input = cfg.document;
        json doc = record_json(rec, cfg, options, runtime);
        doc["error"] = failure;
        doc["exit_code"] = code;
        write_file(json_path, doc.dump(2) + "\n", err);
        err << cfg.source << ": error: " << failure << '\n';
        return code;
    }
    if (options.strict && !rec.flags.empty()) code = exit_numerical;
    json doc = record_json(rec, cfg, options, runtime);
    doc["exit_code"] = code;
    if (!write_file(json_path, doc.dump(2) + "\n", err)) return exit_validation;
    const auto csv_path = dir / (cfg.output + ".csv");
    if (!write_file(csv_path, render_csv(rec, cfg), err)) return exit_validation;
    out << "wrote " << json_path.string() << " and " << csv_path.string() << '\n';
    for (const auto& w : rec.warnings) out << "warning: " << w << '\n';
    for (const auto& f : rec.flags) err << "flag: " << f << '\n';
    if (code == exit_numerical) err << "strict mode: invalidating flags raised\n";
    return code;
}

int run_file(const std::string& path, const RunOptions& options, std::ostream& out, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << path << ":0: cannot read configuration file\n";
        return exit_validation;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return run_text(ss.str(), path, options, out, err);
}

int run_acceptance_command(const AcceptanceOptions& options, const std::string& out_dir, std::ostream& out,
                           std::ostream& err) {
    std::filesystem::path dir;
    try {
        dir = prepare_dir(out_dir);
    } catch (const std::exception& e) {
        err << "error: cannot create output directory " << out_dir << ": " << e.what() << '\n';
        return exit_validation;
    }
    std::vector<CriterionResult> results;
    try {
        results = run_acceptance(options, [&](const CriterionResult& r) {
            print_criterion(out, r);
            out.flush();
        });
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    }
    int passed = 0;
    double total = 0.0;
    json report = json::array();
    std::string csv = "# scatterlab acceptance version=" + std::string(version) + "\ncriterion,title,status,runtime_seconds\n";
    for (const auto& r : results) {
        passed += r.pass ? 1 : 0;
        total += r.runtime_seconds;
        report.push_back(to_json(r));
        csv += std::to_string(r.id) + ",\"" + r.title + "\"," + (r.pass ? (r.informational ? "info" : "pass") : "fail") +
               "," + num(r.runtime_seconds) + "\n";
    }
    const bool all = passed == static_cast<int>(results.size());
    char summary[160];
    std::snprintf(summary, sizeof summary, "acceptance: %d/%zu passed (%.1f s)", passed, results.size(), total);
    out << summary << '\n';
    json doc = {{"experiment", "acceptance"},
                {"all_pass", all},
                {"passed", passed},
                {"total", results.size()},
                {"runtime_seconds", total},
                {"phase_shift_perturbation", options.phase_shift_perturbation},
                {"criteria", report},
                {"provenance", {{"version", version}, {"threads", max_threads()}}}};
    write_file(dir / "acceptance.json", doc.dump(2) + "\n", err);
    write_file(dir / "acceptance.csv", csv, err);
    return all ? exit_ok : exit_acceptance_failure;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    apply_thread_limit_from_env();
    CLI::App app{"scatterlab: numerical scattering theory experiments"};
    app.require_subcommand(1);

    std::string config_path;
    RunOptions run_options;
    auto* run = app.add_subcommand("run", "run one scenario from a JSON configuration");
    run->add_option("config", config_path, "configuration file")->required();
    run->add_flag("--strict", run_options.strict, "exit 3 when any invalidating numerical flag is raised");
    run->add_option("--out", run_options.out_dir, "output directory")->capture_default_str();

    std::string acceptance_dir = ".";
    AcceptanceOptions acceptance_options;
    auto* acc = app.add_subcommand("acceptance", "run the acceptance suite");
    acc->add_option("--out", acceptance_dir, "output directory")->capture_default_str();
    acc->add_option("--criteria", acceptance_options.criteria, "criterion ids to run (default: all)");
    acc->add_option("--perturb-phase-shifts", acceptance_options.phase_shift_perturbation,
                    "test hook: offset added to computed phase shifts")
        ->group("");

    auto* schema = app.add_subcommand("schema", "print the configuration JSON Schema");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_validation;
    }
    if (run->parsed()) return run_file(config_path, run_options, out, err);
    if (acc->parsed()) return run_acceptance_command(acceptance_options, acceptance_dir, out, err);
    if (schema->parsed()) {
        out << config_schema().dump(2) << '\n';
        return exit_ok;
    }
    return exit_validation;
}

}  // namespace scatterlab::cli
