#pragma once

// Scenario configuration: one JSON document with an "experiment" discriminator, validated against a
// per-experiment schema before any computation. Validation errors carry the source line.

#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "scatterlab/error.hpp"
#include "scatterlab/potentials.hpp"

namespace scatterlab::cli {

using json = nlohmann::json;

class ConfigError : public ParameterError {
public:
    ConfigError(const std::string& source, int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

enum class ExperimentKind { phaseshift, amplitude, born, highenergy, eikonal, s0, propagate, moller, diagnose, acceptance };

std::string to_string(ExperimentKind kind);
const std::vector<ExperimentKind>& all_experiments();

struct ScenarioConfig {
    ExperimentKind kind = ExperimentKind::phaseshift;
    json document;     // validated input with defaults filled in
    std::string hash;  // FNV-1a 64 of the canonical dump of `document`, 16 hex digits
    std::string output;
    long long seed = 0;
    std::string source;
};

// JSON pointer -> 1-based line of the key (object members) or value (array elements).
std::map<std::string, int> index_lines(const std::string& text);

ScenarioConfig parse_config(const std::string& text, const std::string& source = "<config>");
ScenarioConfig load_config(const std::string& path);

// JSON Schema (draft 2020-12) describing every experiment.
json config_schema();

PotentialModel build_potential(const json& spec);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace scatterlab::cli
