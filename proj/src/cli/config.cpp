#include "scatterlab/cli/config.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace scatterlab::cli {

namespace {

enum class FieldType { number, integer, boolean, string, number_array, integer_array, vec3, vec3_array, number_pair, object };

struct FieldSpec {
    std::string name;
    FieldType type;
    bool required = false;
    json default_value = nullptr;  // null: no default (optional fields are then omitted)
    std::string description;
    std::vector<std::string> choices;
    std::vector<FieldSpec> children;  // for objects
};

FieldSpec field(std::string name, FieldType type, json def, std::string description) {
    return FieldSpec{std::move(name), type, false, std::move(def), std::move(description), {}, {}};
}

FieldSpec required(std::string name, FieldType type, std::string description) {
    return FieldSpec{std::move(name), type, true, nullptr, std::move(description), {}, {}};
}

FieldSpec choice(std::string name, std::vector<std::string> choices, json def, std::string description) {
    return FieldSpec{std::move(name), FieldType::string, false, std::move(def), std::move(description),
                     std::move(choices), {}};
}

FieldSpec object(std::string name, std::vector<FieldSpec> children, std::string description) {
    return FieldSpec{std::move(name), FieldType::object, false, json::object(), std::move(description), {},
                     std::move(children)};
}

// Parameters per potential kind, with defaults.
const std::map<std::string, std::vector<FieldSpec>>& potential_fields() {
    static const std::map<std::string, std::vector<FieldSpec>> table = {
        {"zero", {}},
        {"gaussian_well",
         {field("v0", FieldType::number, -1.0, "strength; v = v0 exp(-r^2/width^2)"),
          field("width", FieldType::number, 1.0, "Gaussian width"),
          field("declared_rho", FieldType::number, 3.0, "decay exponent used for range classification")}},
        {"yukawa",
         {field("g", FieldType::number, 1.0, "coupling; v = g exp(-mu r)/r"),
          field("mu", FieldType::number, 1.0, "screening mass"),
          field("declared_rho", FieldType::number, 3.0, "decay exponent used for range classification")}},
        {"square_well",
         {field("depth", FieldType::number, 1.0, "v = -depth for r < radius"),
          field("radius", FieldType::number, 1.0, "well radius"),
          field("declared_rho", FieldType::number, 3.0, "decay exponent used for range classification")}},
        {"power_tail",
         {field("v0", FieldType::number, 0.5, "strength; v = v0 (1 + r^2)^{-rho/2}"),
          field("rho", FieldType::number, 1.0, "decay exponent")}},
        {"compact_bump",
         {field("v0", FieldType::number, 1.0, "peak value of the C-infinity bump"),
          field("radius", FieldType::number, 1.0, "support radius"),
          field("declared_rho", FieldType::number, 3.0, "decay exponent used for range classification")}},
    };
    return table;
}

std::vector<FieldSpec> packet_fields(double x0, double sigma, double k0) {
    return {field("x0", FieldType::number, x0, "initial center"),
            field("sigma", FieldType::number, sigma, "spatial width"),
            field("k0", FieldType::number, k0, "central momentum")};
}

std::vector<FieldSpec> grid_fields() {
    return {choice("geometry", {"line", "radial"}, "line", "line grid or l = 0 radial half-line"),
            field("n", FieldType::integer, 1 << 14, "number of points (power of two)"),
            field("dx", FieldType::number, 2.0 * (1280.0 / 0.6) / (1 << 14), "grid spacing")};
}

const std::map<ExperimentKind, std::vector<FieldSpec>>& experiment_fields() {
    static const std::map<ExperimentKind, std::vector<FieldSpec>> table = {
        {ExperimentKind::phaseshift,
         {required("k", FieldType::number_array, "momenta"),
          field("l_max", FieldType::integer, 10, "highest partial wave"),
          field("dr", FieldType::number, 1e-3, "Numerov step"),
          field("r_max", FieldType::number, 0.0, "matching radius; 0 = automatic")}},
        {ExperimentKind::amplitude,
         {required("k", FieldType::number, "momentum"), required("theta", FieldType::number_array, "angles (rad)"),
          field("l_max", FieldType::integer, 30, "highest partial wave"),
          field("dr", FieldType::number, 1e-3, "Numerov step")}},
        {ExperimentKind::born,
         {required("k", FieldType::number, "momentum"), required("theta", FieldType::number_array, "angles (rad)"),
          field("compare_exact", FieldType::boolean, true, "also evaluate the partial-wave amplitude"),
          field("l_max", FieldType::integer, 30, "partial waves for the comparison")}},
        {ExperimentKind::highenergy,
         {required("lambda", FieldType::number_array, "energies lambda = k^2 (increasing)"),
          field("theta", FieldType::number, 1.5707963267948966, "scattering angle (rad)"),
          field("orders", FieldType::integer_array, json::array({0, 1}), "expansion orders N"),
          field("momentum_transfer", FieldType::number, 0.0,
                "if > 0, hold |k(w - w')| fixed instead of theta")}},
        {ExperimentKind::eikonal,
         {required("xi", FieldType::vec3, "momentum vector xi"),
          required("points", FieldType::vec3_array, "evaluation points x"),
          field("N0", FieldType::integer, 0, "iteration order; 0 = default for rho"),
          choice("sign", {"minus", "plus"}, "minus", "which phase")}},
        {ExperimentKind::s0,
         {required("lambda", FieldType::number, "energy"),
          required("theta_deg", FieldType::number_array, "angles between w and w' (degrees)"),
          field("N", FieldType::integer, 2, "transport order"),
          field("window", FieldType::number, 0.0, "plane window half-width; 0 = automatic"),
          field("compare_exact", FieldType::boolean, true, "also evaluate the partial-wave kernel")}},
        {ExperimentKind::propagate,
         {choice("mode", {"evolve", "time_domain_smatrix"}, "evolve", "plain evolution or time-domain S-matrix"),
          field("t", FieldType::number, 1.0, "target time (evolve)"),
          field("dt", FieldType::number, 0.0, "time step; 0 = 0.45 / lambda_max"),
          field("stride", FieldType::integer, 1, "CSV row stride"),
          field("k", FieldType::number, 1.0, "momentum (time_domain_smatrix)"),
          field("sigma", FieldType::number, 5.0, "packet width (time_domain_smatrix)"),
          object("grid", grid_fields(), "spatial grid (evolve)"),
          object("packet", packet_fields(-40.0, 4.0, 2.0), "initial Gaussian packet (evolve)")}},
        {ExperimentKind::moller,
         {field("times", FieldType::number_array, json::array({20.0, 40.0, 80.0, 160.0, 320.0}), "probe times"),
          field("modified", FieldType::boolean, false, "use the modified free evolution"),
          field("dt", FieldType::number, 0.0, "time step; 0 = 0.45 / lambda_max"),
          object("grid", grid_fields(), "spatial grid (line)"),
          object("packet", packet_fields(-40.0, 4.0, 2.0), "initial Gaussian packet")}},
        {ExperimentKind::diagnose,
         {FieldSpec{"check", FieldType::string, true, nullptr, "which diagnostic", {"hs", "kato", "mourre", "lap"}, {}},
          field("c", FieldType::number, 1.0, "hs: resolvent shift"),
          field("r", FieldType::number, 1.0, "kato/lap: weight exponent"),
          field("times", FieldType::number_array, json::array({20.0, 40.0, 80.0, 160.0, 320.0}), "kato: T values"),
          object("packet", packet_fields(-40.0, 4.0, 2.0), "kato: free packet on the default grid"),
          field("window", FieldType::number_pair, json::array({1.0, 2.0}), "mourre: spectral window"),
          field("n", FieldType::integer, 1024, "mourre/lap: matrix size"),
          field("box_length", FieldType::number, 300.0, "mourre: box length"),
          field("lambda", FieldType::number, 1.0, "lap: spectral parameter"),
          field("epsilons", FieldType::number_array, json::array({1e-1, 3e-2, 1e-2, 3e-3}), "lap: decreasing"),
          field("h", FieldType::number, 1.0, "lap: lattice spacing")}},
        {ExperimentKind::acceptance,
         {field("criteria", FieldType::integer_array, json::array(), "criterion ids; empty = all")}},
    };
    return table;
}

std::vector<FieldSpec> common_fields() {
    return {required("experiment", FieldType::string, "experiment kind"),
            field("output", FieldType::string, nullptr, "output file stem; default = experiment name"),
            field("seed", FieldType::integer, 0, "seed for randomized steps"),
            field("potential", FieldType::object, nullptr, "potential model {kind, parameters}")};
}

bool experiment_uses_potential(ExperimentKind k) {
    return k != ExperimentKind::acceptance;
}

std::string escape_pointer(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

std::string type_name(FieldType t) {
    switch (t) {
        case FieldType::number: return "number";
        case FieldType::integer: return "integer";
        case FieldType::boolean: return "boolean";
        case FieldType::string: return "string";
        case FieldType::number_array: return "array of numbers";
        case FieldType::integer_array: return "array of integers";
        case FieldType::vec3: return "array of 3 numbers";
        case FieldType::vec3_array: return "array of 3-vectors";
        case FieldType::number_pair: return "array of 2 numbers";
        case FieldType::object: return "object";
    }
    return "value";
}

bool is_vec(const json& v, std::size_t n) {
    if (!v.is_array() || v.size() != n) return false;
    return std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); });
}

bool matches(const json& v, FieldType t) {
    switch (t) {
        case FieldType::number: return v.is_number();
        case FieldType::integer: return v.is_number_integer();
        case FieldType::boolean: return v.is_boolean();
        case FieldType::string: return v.is_string();
        case FieldType::number_array:
            return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); });
        case FieldType::integer_array:
            return v.is_array() &&
                   std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number_integer(); });
        case FieldType::vec3: return is_vec(v, 3);
        case FieldType::vec3_array:
            return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return is_vec(e, 3); });
        case FieldType::number_pair: return is_vec(v, 2);
        case FieldType::object: return v.is_object();
    }
    return false;
}

class Validator {
public:
    Validator(std::string source, std::map<std::string, int> lines)
        : source_(std::move(source)), lines_(std::move(lines)) {}

    [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
        throw ConfigError(source_, line_of(pointer), message);
    }

    int line_of(std::string pointer) const {
        while (true) {
            const auto it = lines_.find(pointer);
            if (it != lines_.end()) return it->second;
            const auto cut = pointer.rfind('/');
            if (cut == std::string::npos || pointer.empty()) return 1;
            pointer = pointer.substr(0, cut);
        }
    }

    json validate_object(const json& input, const std::vector<FieldSpec>& fields, const std::string& pointer,
                         const std::string& context) const {
        if (!input.is_object()) fail(pointer, context + " must be an object");
        std::vector<std::string> allowed;
        for (const auto& f : fields) allowed.push_back(f.name);
        for (const auto& [key, value] : input.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                std::string list;
                for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
                fail(pointer + "/" + escape_pointer(key), "unknown key \"" + key + "\" in " + context +
                                                              " (allowed: " + (list.empty() ? "none" : list) + ")");
            }
        }
        json out = json::object();
        for (const auto& f : fields) {
            const std::string p = pointer + "/" + escape_pointer(f.name);
            if (!input.contains(f.name)) {
                if (f.required) fail(pointer, "missing required key \"" + f.name + "\" in " + context);
                if (f.type == FieldType::object && !f.children.empty())
                    out[f.name] = validate_object(json::object(), f.children, p, "\"" + f.name + "\"");
                else if (!f.default_value.is_null())
                    out[f.name] = f.default_value;
                continue;
            }
            const json& v = input.at(f.name);
            if (!matches(v, f.type))
                fail(p, "key \"" + f.name + "\" must be " + type_name(f.type) + ", got " + v.dump());
            if (!f.choices.empty() &&
                std::find(f.choices.begin(), f.choices.end(), v.get<std::string>()) == f.choices.end()) {
                std::string list;
                for (const auto& c : f.choices) list += (list.empty() ? "" : ", ") + c;
                fail(p, "key \"" + f.name + "\" must be one of " + list + ", got " + v.dump());
            }
            if (f.type == FieldType::object && !f.children.empty())
                out[f.name] = validate_object(v, f.children, p, "\"" + f.name + "\"");
            else
                out[f.name] = v;
        }
        return out;
    }

    json validate_potential(const json& input) const {
        const std::string pointer = "/potential";
        if (!input.is_object()) fail(pointer, "\"potential\" must be an object");
        if (!input.contains("kind")) fail(pointer, "missing required key \"kind\" in \"potential\"");
        const json& kind = input.at("kind");
        const auto& table = potential_fields();
        if (!kind.is_string() || !table.count(kind.get<std::string>())) {
            std::string list;
            for (const auto& [name, _] : table) list += (list.empty() ? "" : ", ") + name;
            fail(pointer + "/kind", "potential kind must be one of " + list + ", got " + kind.dump());
        }
        auto fields = table.at(kind.get<std::string>());
        fields.insert(fields.begin(), FieldSpec{"kind", FieldType::string, true, nullptr, "potential kind", {}, {}});
        return validate_object(input, fields, pointer, "\"potential\" (kind " + kind.get<std::string>() + ")");
    }

private:
    std::string source_;
    std::map<std::string, int> lines_;
};

json field_schema(const FieldSpec& f) {
    json s;
    switch (f.type) {
        case FieldType::number: s = {{"type", "number"}}; break;
        case FieldType::integer: s = {{"type", "integer"}}; break;
        case FieldType::boolean: s = {{"type", "boolean"}}; break;
        case FieldType::string: s = {{"type", "string"}}; break;
        case FieldType::number_array: s = {{"type", "array"}, {"items", {{"type", "number"}}}}; break;
        case FieldType::integer_array: s = {{"type", "array"}, {"items", {{"type", "integer"}}}}; break;
        case FieldType::vec3:
            s = {{"type", "array"}, {"items", {{"type", "number"}}}, {"minItems", 3}, {"maxItems", 3}};
            break;
        case FieldType::number_pair:
            s = {{"type", "array"}, {"items", {{"type", "number"}}}, {"minItems", 2}, {"maxItems", 2}};
            break;
        case FieldType::vec3_array:
            s = {{"type", "array"},
                 {"items", {{"type", "array"}, {"items", {{"type", "number"}}}, {"minItems", 3}, {"maxItems", 3}}}};
            break;
        case FieldType::object: {
            s = {{"type", "object"}, {"additionalProperties", false}};
            json props = json::object();
            for (const auto& c : f.children) props[c.name] = field_schema(c);
            s["properties"] = props;
            break;
        }
    }
    if (!f.description.empty()) s["description"] = f.description;
    if (!f.default_value.is_null() && f.type != FieldType::object) s["default"] = f.default_value;
    if (!f.choices.empty()) s["enum"] = f.choices;
    return s;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : ParameterError(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::phaseshift: return "phaseshift";
        case ExperimentKind::amplitude: return "amplitude";
        case ExperimentKind::born: return "born";
        case ExperimentKind::highenergy: return "highenergy";
        case ExperimentKind::eikonal: return "eikonal";
        case ExperimentKind::s0: return "s0";
        case ExperimentKind::propagate: return "propagate";
        case ExperimentKind::moller: return "moller";
        case ExperimentKind::diagnose: return "diagnose";
        case ExperimentKind::acceptance: return "acceptance";
    }
    return "unknown";
}

const std::vector<ExperimentKind>& all_experiments() {
    static const std::vector<ExperimentKind> kinds = {
        ExperimentKind::phaseshift, ExperimentKind::amplitude, ExperimentKind::born,     ExperimentKind::highenergy,
        ExperimentKind::eikonal,    ExperimentKind::s0,        ExperimentKind::propagate, ExperimentKind::moller,
        ExperimentKind::diagnose,   ExperimentKind::acceptance};
    return kinds;
}

std::map<std::string, int> index_lines(const std::string& text) {
    struct Frame {
        bool object;
        std::string pointer;
        std::string key;
        long index = 0;
        bool expect_key = true;
    };
    std::map<std::string, int> lines;
    std::vector<Frame> stack;
    int line = 1;
    auto value_pointer = [&]() -> std::string {
        if (stack.empty()) return "";
        const Frame& top = stack.back();
        return top.pointer + "/" + (top.object ? escape_pointer(top.key) : std::to_string(top.index));
    };
    auto record_value = [&]() {
        if (!stack.empty() && !stack.back().object) lines.emplace(value_pointer(), line);
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
        } else if (c == '{' || c == '[') {
            record_value();
            stack.push_back(Frame{c == '{', value_pointer(), "", 0, c == '{'});
        } else if (c == '}' || c == ']') {
            if (!stack.empty()) stack.pop_back();
        } else if (c == ',') {
            if (!stack.empty()) {
                if (stack.back().object) stack.back().expect_key = true;
                else ++stack.back().index;
            }
        } else if (c == ':') {
            if (!stack.empty()) stack.back().expect_key = false;
        } else if (c == '"') {
            std::string s;
            for (++i; i < text.size() && text[i] != '"'; ++i) {
                if (text[i] == '\\' && i + 1 < text.size()) ++i;
                s += text[i];
            }
            if (!stack.empty() && stack.back().object && stack.back().expect_key) {
                stack.back().key = s;
                lines.emplace(stack.back().pointer + "/" + escape_pointer(s), line);
            } else {
                record_value();
            }
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            record_value();
            while (i + 1 < text.size() && std::string(",]}\n \t\r").find(text[i + 1]) == std::string::npos) ++i;
        }
    }
    return lines;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
        throw ConfigError(source, line, std::string("invalid JSON: ") + e.what());
    }
    const Validator v(source, index_lines(text));
    if (!doc.is_object()) v.fail("", "configuration must be a JSON object");
    if (!doc.contains("experiment")) v.fail("", "missing required key \"experiment\"");
    const json& exp = doc.at("experiment");
    ExperimentKind kind{};
    bool found = false;
    std::string list;
    for (ExperimentKind k : all_experiments()) {
        list += (list.empty() ? "" : ", ") + to_string(k);
        if (exp.is_string() && exp.get<std::string>() == to_string(k)) {
            kind = k;
            found = true;
        }
    }
    if (!found) v.fail("/experiment", "experiment must be one of " + list + ", got " + exp.dump());

    std::vector<FieldSpec> fields = common_fields();
    for (const auto& f : experiment_fields().at(kind)) fields.push_back(f);
    json shallow = doc;
    const bool has_potential = doc.contains("potential");
    if (has_potential) shallow.erase("potential");
    if (!experiment_uses_potential(kind) && has_potential)
        v.fail("/potential", "unknown key \"potential\" for experiment " + to_string(kind));
    json normalized = v.validate_object(shallow, fields, "", "experiment " + to_string(kind));
    if (experiment_uses_potential(kind)) {
        normalized["potential"] = has_potential ? v.validate_potential(doc.at("potential"))
                                                : json{{"kind", "zero"}};
    }
    ScenarioConfig cfg;
    cfg.kind = kind;
    cfg.source = source;
    cfg.seed = normalized.at("seed").get<long long>();
    cfg.output = normalized.contains("output") ? normalized.at("output").get<std::string>() : to_string(kind);
    if (cfg.output.empty() || cfg.output.find('/') != std::string::npos)
        v.fail("/output", "output must be a plain file stem without '/'");
    cfg.document = normalized;
    cfg.hash = fnv1a_hex(normalized.dump());
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, 0, "cannot read configuration file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

json config_schema() {
    json variants = json::array();
    for (ExperimentKind k : all_experiments()) {
        json props = json::object();
        json req = json::array({"experiment"});
        for (const auto& f : common_fields()) props[f.name] = field_schema(f);
        props["experiment"] = {{"const", to_string(k)}};
        if (!experiment_uses_potential(k)) props.erase("potential");
        for (const auto& f : experiment_fields().at(k)) {
            props[f.name] = field_schema(f);
            if (f.required) req.push_back(f.name);
        }
        if (experiment_uses_potential(k)) props["potential"] = {{"$ref", "#/$defs/potential"}};
        variants.push_back({{"type", "object"}, {"properties", props}, {"required", req},
                            {"additionalProperties", false}});
    }
    json potentials = json::array();
    for (const auto& [name, fields] : potential_fields()) {
        json props = {{"kind", {{"const", name}}}};
        for (const auto& f : fields) props[f.name] = field_schema(f);
        potentials.push_back({{"type", "object"}, {"properties", props}, {"required", json::array({"kind"})},
                              {"additionalProperties", false}});
    }
    return {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
            {"title", "scatterlab scenario configuration"},
            {"oneOf", variants},
            {"$defs", {{"potential", {{"oneOf", potentials}}}}}};
}

PotentialModel build_potential(const json& spec) {
    const std::string kind = spec.at("kind").get<std::string>();
    auto num = [&](const char* key) { return spec.at(key).get<double>(); };
    if (kind == "zero") return PotentialModel::zero();
    if (kind == "gaussian_well") return PotentialModel::gaussian_well(num("v0"), num("width"), num("declared_rho"));
    if (kind == "yukawa") return PotentialModel::yukawa(num("g"), num("mu"), num("declared_rho"));
    if (kind == "square_well") return PotentialModel::square_well(num("depth"), num("radius"), num("declared_rho"));
    if (kind == "power_tail") return PotentialModel::power_tail(num("v0"), num("rho"));
    if (kind == "compact_bump") return PotentialModel::compact_bump(num("v0"), num("radius"), num("declared_rho"));
    throw ParameterError("unknown potential kind " + kind);
}

}  // namespace scatterlab::cli
