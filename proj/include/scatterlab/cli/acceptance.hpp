#pragma once

// The acceptance suite: fifteen numbered criteria with embedded defaults. Each criterion reports
// measured values against expected values and tolerances; failures are reported, never masked.

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace scatterlab::cli {

struct Check {
    std::string name;
    double measured = 0.0;
    std::string expected;  // target and tolerance in words, e.g. "< 1e-6"
    bool pass = false;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool informational = false;  // reported, never failed on its value
    bool pass = false;
    double runtime_seconds = 0.0;
    std::vector<Check> checks;
    std::vector<std::string> notes;  // supplementary measurements
    std::string error;               // exception text when the criterion could not run
};

struct AcceptanceOptions {
    std::vector<int> criteria;  // empty = all
    // Test hook: added to every computed phase shift in criteria 1 and 2.
    double phase_shift_perturbation = 0.0;
};

constexpr int acceptance_criterion_count = 15;

// Runs the selected criteria in order; progress(result) is called after each one.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& progress = {});

// One summary line per criterion plus indented check and note lines.
void print_criterion(std::ostream& out, const CriterionResult& result);

nlohmann::json to_json(const CriterionResult& result);

}  // namespace scatterlab::cli
