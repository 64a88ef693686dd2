#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "doctest.h"
#include "scatterlab/cli/acceptance.hpp"
#include "scatterlab/cli/config.hpp"
#include "scatterlab/cli/runner.hpp"

using namespace scatterlab;
using namespace scatterlab::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("scatterlab_test_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::string& text, const fs::path& dir, bool strict = false) {
    std::ostringstream out;
    std::ostringstream err;
    RunOptions o;
    o.strict = strict;
    o.out_dir = dir.string();
    const int code = run_text(text, "cfg.json", o, out, err);
    return {code, out.str(), err.str()};
}

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "scatterlab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

}  // namespace

TEST_CASE("config: unknown key exits 2 with a line-anchored message naming the key") {
    const auto dir = scratch("unknown");
    const std::string text = "{\n  \"experiment\": \"phaseshift\",\n  \"k\": [1.0],\n  \"potentail\": {\"kind\": \"zero\"}\n}\n";
    const auto r = run(text, dir);
    CHECK(r.code == 2);
    CHECK(r.err.find("cfg.json:4:") == 0);
    CHECK(r.err.find("unknown key \"potentail\"") != std::string::npos);
    CHECK(fs::is_empty(dir));
}

TEST_CASE("config: nested, type, choice, missing and syntax errors carry their line") {
    auto line_of = [](const std::string& text) {
        try {
            parse_config(text, "c");
        } catch (const ConfigError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("{\"experiment\": \"phaseshift\",\n \"k\": [1],\n \"potential\": {\"kind\": \"yukawa\",\n  \"gg\": 1}}") ==
          4);
    CHECK(line_of("{\"experiment\": \"phaseshift\",\n \"k\": [1],\n \"l_max\": 2.5}") == 3);
    CHECK(line_of("{\"experiment\": \"eikonal\",\n \"xi\": [0, 0, 1],\n \"points\": [[1, 0, 0]],\n \"sign\": \"up\"}") == 4);
    CHECK(line_of("{\"experiment\": \"phaseshift\",\n \"l_max\": 12}") == 1);
    CHECK(line_of("{\n \"experiment\": \"phaseshiftx\"}") == 2);
    CHECK(line_of("{\"experiment\": \"born\",\n \"k\": 2,\n \"theta\": [1, 2\n}") == 4);
    CHECK(line_of("{\"experiment\": \"acceptance\",\n \"potential\": {\"kind\": \"zero\"}}") == 2);
    CHECK(line_of("{\"experiment\": \"moller\",\n \"grid\": {\"n\": 1024,\n   \"extent\": 3}}") == 3);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
}

TEST_CASE("config: line index, defaults and a hash that ignores formatting") {
    const auto idx = index_lines("{\n \"a\": 1,\n \"b\": [\n  2,\n  {\"c\": 3}\n ]\n}");
    CHECK(idx.at("/a") == 2);
    CHECK(idx.at("/b") == 3);
    CHECK(idx.at("/b/0") == 4);
    CHECK(idx.at("/b/1") == 5);
    CHECK(idx.at("/b/1/c") == 5);

    const auto a = parse_config("{\"experiment\": \"phaseshift\", \"k\": [1.0], \"seed\": 4}");
    const auto b = parse_config("{\n  \"seed\": 4,\n  \"k\": [1.0],\n  \"experiment\": \"phaseshift\"\n}");
    CHECK(a.hash == b.hash);
    CHECK(a.hash.size() == 16);
    CHECK(a.document.at("l_max") == 10);
    CHECK(a.document.at("potential").at("kind") == "zero");
    CHECK(a.output == "phaseshift");
    CHECK(parse_config("{\"experiment\": \"phaseshift\", \"k\": [1.0], \"seed\": 5}").hash != a.hash);
    // Explicit defaults and omitted defaults describe the same computation.
    CHECK(parse_config("{\"experiment\": \"phaseshift\", \"k\": [1.0], \"seed\": 4, \"l_max\": 10}").hash == a.hash);
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("config: potentials build with their defaults") {
    const auto g = build_potential({{"kind", "gaussian_well"}, {"v0", -2.0}, {"width", 1.5}, {"declared_rho", 3.0}});
    CHECK(g.kind() == PotentialKind::gaussian_well);
    CHECK(g.radial(0.0) == -2.0);
    const auto cfg = parse_config("{\"experiment\": \"born\", \"k\": 1, \"theta\": [1], \"potential\": {\"kind\": \"yukawa\"}}");
    CHECK(cfg.document.at("potential").at("mu") == 1.0);
    CHECK(build_potential(cfg.document.at("potential")).kind() == PotentialKind::yukawa);
}

TEST_CASE("schema: one variant per experiment, closed objects") {
    const json s = config_schema();
    REQUIRE(s.at("oneOf").size() == all_experiments().size());
    for (const auto& v : s.at("oneOf")) CHECK(v.at("additionalProperties") == false);
    const auto r = invoke({"schema"});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out) == s);
}

TEST_CASE("run: zero-potential phase shifts are a CSV of zeros") {
    const auto dir = scratch("zero");
    const auto r = run("{\"experiment\": \"phaseshift\", \"potential\": {\"kind\": \"zero\"}, \"k\": [1.0, 2.5], \"l_max\": 12}",
                       dir);
    REQUIRE(r.code == 0);
    const auto csv = lines(slurp(dir / "phaseshift.csv"));
    REQUIRE(csv.size() == 2 + 2 * 13);
    CHECK(csv[0].rfind("# scatterlab phaseshift config_hash=", 0) == 0);
    CHECK(csv[1] == "k,l,delta,re_S,im_S");
    for (std::size_t i = 2; i < csv.size(); ++i) {
        const auto cut = csv[i].find(',', csv[i].find(',') + 1);
        CHECK(csv[i].substr(cut) == ",0,1,0");
    }
    const json doc = json::parse(slurp(dir / "phaseshift.json"));
    CHECK(doc.at("table").at("rows")[0][3] == json::array({1.0, 0.0}));
    CHECK(doc.at("provenance").at("config_hash") == csv[0].substr(csv[0].find('=') + 1, 16));
    CHECK(doc.at("exit_code") == 0);
}

TEST_CASE("run: identical config and seed give byte-identical CSV") {
    const std::string text = "{\"experiment\": \"amplitude\", \"potential\": {\"kind\": \"gaussian_well\"}, \"k\": 1.5, "
                             "\"theta\": [0.0, 0.5, 2.0], \"seed\": 11}";
    const auto d1 = scratch("repro1");
    const auto d2 = scratch("repro2");
    REQUIRE(run(text, d1).code == 0);
    REQUIRE(run(text, d2).code == 0);
    const std::string a = slurp(d1 / "amplitude.csv");
    CHECK(a == slurp(d2 / "amplitude.csv"));
    CHECK(lines(a)[1] == "theta,re_f,im_f,re_kernel,im_kernel");
    // The forward-angle flag from the amplitude module appears verbatim.
    const json doc = json::parse(slurp(d1 / "amplitude.json"));
    CHECK(doc.at("provenance").at("warnings").size() >= 1);
    CHECK(doc.at("provenance").at("warnings")[0].get<std::string>().find("truncated_forward") != std::string::npos);
}

TEST_CASE("run: moller probe on the rho = 1 tail serializes the plateau verdict") {
    const auto dir = scratch("moller");
    const auto r = run("{\"experiment\": \"moller\", \"potential\": {\"kind\": \"power_tail\", \"v0\": 0.5, \"rho\": 1.0},"
                       " \"times\": [20, 40, 80], \"grid\": {\"n\": 4096, \"dx\": 0.25}}",
                       dir);
    REQUIRE(r.code == 0);
    const json doc = json::parse(slurp(dir / "moller.json"));
    CHECK(doc.at("results").at("verdict") == "plateau");
    CHECK(doc.at("results").at("plateau") == true);
    CHECK(doc.at("results").at("valid") == true);
    CHECK(doc.at("provenance").at("flags").empty());
    CHECK(lines(slurp(dir / "moller.csv")).size() == 4);
}

TEST_CASE("run: reflection flag is serialized, and strict mode turns it into exit 3") {
    const std::string text = "{\"experiment\": \"propagate\", \"t\": 10, \"stride\": 16, \"grid\": {\"n\": 256, \"dx\": 0.1},"
                             " \"packet\": {\"x0\": 0, \"sigma\": 1, \"k0\": 2}}";
    const auto lenient = scratch("lenient");
    const auto r = run(text, lenient);
    CHECK(r.code == 0);
    const json doc = json::parse(slurp(lenient / "propagate.json"));
    CHECK(doc.at("provenance").at("flags")[0] == "reflection: edge monitor tripped");
    CHECK(doc.at("results").at("valid") == false);
    const auto strict = scratch("strict");
    CHECK(run(text, strict, true).code == 3);
    CHECK(fs::exists(strict / "propagate.csv"));
}

TEST_CASE("run: numerical and domain failures map to exit codes 3 and 2") {
    const auto dir = scratch("failures");
    // The first Born integral of a Coulomb-like tail does not converge.
    const auto born = run("{\"experiment\": \"born\", \"potential\": {\"kind\": \"power_tail\", \"rho\": 1.0}, \"k\": 1,"
                          " \"theta\": [1.0], \"compare_exact\": false}",
                          dir);
    CHECK(born.code == 3);
    CHECK(json::parse(slurp(dir / "born.json")).contains("error"));
    // |v| is not integrable for rho = 1.
    const auto hs = run("{\"experiment\": \"diagnose\", \"check\": \"hs\", \"potential\": {\"kind\": \"power_tail\"}}", dir);
    CHECK(hs.code == 2);
    // l_max below the partial-wave requirement.
    CHECK(run("{\"experiment\": \"phaseshift\", \"k\": [5.0], \"l_max\": 3}", dir).code == 2);
}

TEST_CASE("run: diagnostics and eikonal scenarios produce tables") {
    const auto dir = scratch("diag");
    REQUIRE(run("{\"experiment\": \"diagnose\", \"check\": \"hs\", \"c\": 1.0, \"potential\": {\"kind\": \"gaussian_well\","
                " \"v0\": 1.0}}",
                dir)
                .code == 0);
    const json hs = json::parse(slurp(dir / "diagnose.json"));
    CHECK(hs.at("table").at("rows")[0][1].get<double>() == doctest::Approx(0.2215567).epsilon(1e-5));
    REQUIRE(run("{\"experiment\": \"eikonal\", \"output\": \"eik\", \"potential\": {\"kind\": \"power_tail\", \"rho\": 2.0},"
                " \"xi\": [0, 0, 2], \"points\": [[1, 0, 0], [5, 0, 0]], \"sign\": \"plus\", \"N0\": 1}",
                dir)
                .code == 0);
    const auto csv = lines(slurp(dir / "eik.csv"));
    CHECK(csv[1] == "x,y,z,Phi,residual,phi_1");
    CHECK(csv.size() == 4);
}

TEST_CASE("acceptance: fault injection on phase shifts fails criteria 1 and 2") {
    AcceptanceOptions clean;
    clean.criteria = {1, 2};
    const auto ok = run_acceptance(clean);
    REQUIRE(ok.size() == 2);
    CHECK(ok[0].pass);
    CHECK(ok[1].pass);

    AcceptanceOptions tampered = clean;
    tampered.phase_shift_perturbation = 1e-2;
    const auto bad = run_acceptance(tampered);
    CHECK_FALSE(bad[0].pass);
    CHECK_FALSE(bad[1].pass);
    // The unimodularity check alone cannot see a real offset; the in/out cross-check does.
    CHECK(bad[1].checks[0].pass);
    CHECK_FALSE(bad[1].checks[3].pass);

    const auto dir = scratch("acceptance");
    const auto r = invoke({"acceptance", "--criteria", "1", "2", "--perturb-phase-shifts", "0.01", "--out", dir.string()});
    CHECK(r.code == 1);
    CHECK(r.out.find("[FAIL] criterion  1") != std::string::npos);
    CHECK(r.out.find("[FAIL] criterion  2") != std::string::npos);
    const json report = json::parse(slurp(dir / "acceptance.json"));
    CHECK(report.at("all_pass") == false);
    CHECK(report.at("criteria")[0].contains("runtime_seconds"));
    CHECK_THROWS_AS(run_acceptance(AcceptanceOptions{{16}, 0.0}), ParameterError);
}

TEST_CASE("cli: argument errors exit 2") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({"run"}).code == 2);
    CHECK(invoke({"run", "/nonexistent/config.json"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("configs: every shipped sample validates, and the quick ones run") {
    const fs::path root(SCATTERLAB_CONFIG_DIR);
    int count = 0;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.path().extension() != ".json") continue;
        ++count;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_config(entry.path().string()));
    }
    CHECK(count >= static_cast<int>(all_experiments().size()));
    const auto dir = scratch("samples");
    for (const char* name : {"phaseshift", "amplitude", "born", "eikonal"}) {
        CAPTURE(name);
        std::ostringstream out;
        std::ostringstream err;
        RunOptions o;
        o.strict = true;
        o.out_dir = dir.string();
        CHECK(run_file((root / (std::string(name) + ".json")).string(), o, out, err) == 0);
        CHECK(fs::exists(dir / (std::string(name) + ".csv")));
    }
}
