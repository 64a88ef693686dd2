#pragma once

// Scenario execution and result emission. Exit codes: 0 success, 1 acceptance failure,
// 2 validation error, 3 numerical failure (or any invalidating flag in strict mode).

#include <complex>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "scatterlab/cli/acceptance.hpp"
#include "scatterlab/cli/config.hpp"

namespace scatterlab::cli {

inline constexpr const char* version = "1.0.0";

enum ExitCode : int { exit_ok = 0, exit_acceptance_failure = 1, exit_validation = 2, exit_numerical = 3 };

// Complex cells become [re, im] in JSON and re_<name>, im_<name> column pairs in CSV.
using Cell = std::variant<double, long long, bool, std::string, std::complex<double>>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct ResultRecord {
    std::string experiment;
    json input;                        // validated config with defaults
    json results = json::object();     // scalar summaries
    Table table;
    std::vector<std::string> warnings;  // informational module flags, verbatim
    std::vector<std::string> flags;     // invalidating flags (reflection, non-convergence, floors)
    json tolerances = json::object();
};

struct RunOptions {
    bool strict = false;
    std::string out_dir = ".";
};

// Computes a scenario without writing files. Library exceptions propagate.
ResultRecord execute(const ScenarioConfig& config);

// CSV text: "# scatterlab <experiment> config_hash=<hash> seed=<seed> version=<v>", the column row, then rows.
std::string render_csv(const ResultRecord& record, const ScenarioConfig& config);

// Full run: validate, execute, write <out>/<output>.json and .csv, map errors to exit codes.
int run_file(const std::string& path, const RunOptions& options, std::ostream& out, std::ostream& err);
int run_text(const std::string& text, const std::string& source, const RunOptions& options, std::ostream& out,
             std::ostream& err);

// Runs the acceptance suite, prints one line per criterion and writes acceptance.json / acceptance.csv.
int run_acceptance_command(const AcceptanceOptions& options, const std::string& out_dir, std::ostream& out,
                           std::ostream& err);

// Command-line entry point: run / acceptance / schema.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scatterlab::cli
