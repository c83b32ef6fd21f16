#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flowfis/cli/cli.hpp"
#include "flowfis/data/dataset.hpp"
#include "flowfis/kb/knowledge_base.hpp"

using namespace flowfis;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"flowfis"};
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code =
        cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("flowfis_test_" + name);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const fs::path kShippedKb = fs::path(FLOWFIS_SOURCE_DIR) / "data" / "default_kb.json";

}  // namespace

TEST_CASE("classify prints the prediction and confidences") {
    const CliResult r = run({"classify", "--angle", "45", "--flow", "350", "--watercut", "0.5"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("predicted: W/O") != std::string::npos);
    CHECK(r.out.find("DW/O&O/W") != std::string::npos);
    CHECK(r.err.empty());

    const CliResult traced = run({"classify", "--angle", "45", "--flow", "350", "--watercut",
                                  "0.5", "--trace"});
    CHECK(traced.exit_code == 0);
    CHECK(traced.out.find("fired rules:") != std::string::npos);
    CHECK(traced.out.find("strength") != std::string::npos);
}

TEST_CASE("classify rejects missing flags with a usage error") {
    const CliResult r = run({"classify", "--angle", "45", "--flow", "350"});
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("watercut") != std::string::npos);
}

TEST_CASE("classify clamps out-of-range inputs with a warning") {
    const CliResult r = run({"classify", "--angle", "200", "--flow", "350", "--watercut", "0.5"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("warning") != std::string::npos);
    CHECK(r.out.find("clamped") != std::string::npos);
    const CliResult at_edge =
        run({"classify", "--angle", "90", "--flow", "350", "--watercut", "0.5"});
    CHECK(r.out.substr(r.out.find("predicted:")) == at_edge.out.substr(at_edge.out.find("predicted:")));
}

TEST_CASE("unknown subcommands and bad flag values are usage errors") {
    CHECK(run({"frobnicate"}).exit_code == 1);
    CHECK(run({}).exit_code == 1);
    CHECK(run({"evaluate", "--split", "sideways"}).exit_code == 1);
    CHECK(run({"train-bp", "--out", temp_file("x.json").string(), "--epochs", "0"}).exit_code == 1);
    CHECK(run({"--help"}).exit_code == 0);
}

TEST_CASE("validate-kb accepts the shipped knowledge base") {
    REQUIRE(fs::exists(kShippedKb));
    const CliResult r = run({"validate-kb", kShippedKb.string()});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "OK\n");

    // the committed document is exactly the built-in knowledge base
    CHECK(slurp(kShippedKb) == kb::kb_to_string(kb::build_default_kb()));
}

TEST_CASE("validate-kb reports broken knowledge bases on exit code 2") {
    SUBCASE("missing file") {
        const CliResult r = run({"validate-kb", temp_file("does_not_exist.json").string()});
        CHECK(r.exit_code == 2);
    }
    SUBCASE("unparseable document") {
        const fs::path path = temp_file("broken.json");
        std::ofstream(path) << "{ not json";
        const CliResult r = run({"validate-kb", path.string()});
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("parse error") != std::string::npos);
    }
    SUBCASE("class without rules") {
        nlohmann::ordered_json doc = kb::kb_to_json(kb::build_default_kb());
        nlohmann::ordered_json kept = nlohmann::ordered_json::array();
        for (const auto& rule : doc["rules"]) {
            if (rule["then"]["class"] != "DO/W&W") kept.push_back(rule);
        }
        doc["rules"] = kept;
        const fs::path path = temp_file("no_dow_rules.json");
        std::ofstream(path) << doc.dump(2);
        const CliResult r = run({"validate-kb", path.string()});
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("class-without-rules") != std::string::npos);
        CHECK(r.err.find("DO/W&W") != std::string::npos);
    }
    SUBCASE("coverage gap names the variable and interval") {
        nlohmann::ordered_json doc = kb::kb_to_json(kb::build_default_kb());
        doc["inputs"][0]["resolution"] = 91;
        doc["inputs"][0]["terms"][1]["breakpoints"] = {56, 60, 70, 87};  // PS now ends at 45
        const fs::path path = temp_file("angle_gap.json");
        std::ofstream(path) << doc.dump(2);
        const CliResult r = run({"validate-kb", path.string()});
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("coverage-gap") != std::string::npos);
        CHECK(r.err.find("angle") != std::string::npos);
        CHECK(r.err.find("[45, 56]") != std::string::npos);
    }
}

TEST_CASE("evaluate reproduces the published comparison") {
    const fs::path report_path = temp_file("report.json");
    const CliResult r = run({"evaluate", "--fis-only", "--out", report_path.string()});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("FIS accuracy: 18/18") != std::string::npos);

    const nlohmann::json doc = nlohmann::json::parse(slurp(report_path));
    CHECK(doc["report"]["fis"]["correct"] >= 17);
    CHECK(doc["report"]["rows"].size() == 18);
    CHECK(doc["split"] == "paper");
}

TEST_CASE("evaluate with the BP baseline lists disagreements") {
    const CliResult r = run({"evaluate", "--seed", "1"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("BP accuracy:") != std::string::npos);
    CHECK(r.out.find("disagreements:") != std::string::npos);
}

TEST_CASE("evaluate runs are byte-identical for identical flags") {
    const fs::path a = temp_file("report_a.json");
    const fs::path b = temp_file("report_b.json");
    CHECK(run({"evaluate", "--seed", "42", "--out", a.string()}).exit_code == 0);
    CHECK(run({"evaluate", "--seed", "42", "--out", b.string()}).exit_code == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("evaluate propagates data errors with exit code 2") {
    CHECK(run({"evaluate", "--data", temp_file("nope.csv").string()}).exit_code == 2);

    const fs::path bad = temp_file("bad.csv");
    std::ofstream(bad) << "angle_deg,flow_m3d,watercut_frac,pattern\n0,100,1.8,ST\n";
    const CliResult r = run({"evaluate", "--data", bad.string()});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("train-bp writes deterministic model files") {
    const fs::path a = temp_file("model_a.json");
    const fs::path b = temp_file("model_b.json");
    const CliResult first = run({"train-bp", "--seed", "9", "--out", a.string()});
    CHECK(first.exit_code == 0);
    CHECK(first.out.find("final mse:") != std::string::npos);
    CHECK(run({"train-bp", "--seed", "9", "--out", b.string()}).exit_code == 0);
    CHECK(slurp(a) == slurp(b));

    const CliResult other = run({"train-bp", "--seed", "10", "--out", b.string()});
    CHECK(other.exit_code == 0);
    CHECK(slurp(a) != slurp(b));
}

TEST_CASE("evaluate can reuse a trained model file") {
    const fs::path model = temp_file("model_reuse.json");
    REQUIRE(run({"train-bp", "--seed", "4", "--out", model.string()}).exit_code == 0);
    const CliResult r = run({"evaluate", "--bp-model", model.string()});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("BP accuracy:") != std::string::npos);
    // --fis-only excludes --bp-model
    CHECK(run({"evaluate", "--bp-model", model.string(), "--fis-only"}).exit_code == 1);
}

TEST_CASE("sweep writes csv and svg grids") {
    const fs::path csv_path = temp_file("sweep.csv");
    const CliResult csv = run({"sweep", "--angle", "60", "--flow-steps", "2", "--wc-steps", "2",
                               "--out", csv_path.string()});
    CHECK(csv.exit_code == 0);
    std::istringstream lines(slurp(csv_path));
    std::string line;
    int rows = 0;
    std::getline(lines, line);
    CHECK(line == "flow_m3d,watercut_frac,pattern");
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 4);

    const fs::path svg_path = temp_file("sweep.svg");
    const CliResult svg = run({"sweep", "--angle", "60", "--flow-steps", "5", "--wc-steps", "5",
                               "--format", "svg", "--out", svg_path.string()});
    CHECK(svg.exit_code == 0);
    CHECK(slurp(svg_path).find("<svg") != std::string::npos);

    // step counts below 2 are usage errors; inverted bounds are data errors
    CHECK(run({"sweep", "--angle", "60", "--flow-steps", "1", "--out", csv_path.string()})
              .exit_code == 1);
    CHECK(run({"sweep", "--angle", "60", "--flow-min", "500", "--flow-max", "200", "--out",
               csv_path.string()})
              .exit_code == 2);
}

TEST_CASE("export-data emits the embedded dataset as parseable CSV") {
    const CliResult r = run({"export-data"});
    CHECK(r.exit_code == 0);
    CHECK(data::parse_csv(r.out).size() == 60);
}

TEST_CASE("export-kb emits the canonical knowledge base document") {
    const CliResult r = run({"export-kb"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == kb::kb_to_string(kb::build_default_kb()));
}

TEST_CASE("the FLOWFIS_KB environment variable overrides the built-in knowledge base") {
    // point the variable at a weight-scaled copy; predictions must not change
    nlohmann::ordered_json doc = kb::kb_to_json(kb::build_default_kb());
    for (auto& rule : doc["rules"]) {
        rule["weight"] = rule["weight"].get<double>() * 0.5;
    }
    const fs::path kb_path = temp_file("env_kb.json");
    std::ofstream(kb_path) << doc.dump(2);
    REQUIRE(setenv("FLOWFIS_KB", kb_path.string().c_str(), 1) == 0);
    const CliResult scaled = run({"classify", "--angle", "45", "--flow", "350", "--watercut",
                                  "0.5", "--trace"});
    unsetenv("FLOWFIS_KB");
    CHECK(scaled.exit_code == 0);
    CHECK(scaled.out.find("predicted: W/O") != std::string::npos);
    CHECK(scaled.out.find("weight 0.5") != std::string::npos);  // really the env KB

    // a broken env path surfaces as a knowledge-base error
    REQUIRE(setenv("FLOWFIS_KB", temp_file("missing_env_kb.json").string().c_str(), 1) == 0);
    const CliResult broken = run({"classify", "--angle", "45", "--flow", "350", "--watercut",
                                  "0.5"});
    unsetenv("FLOWFIS_KB");
    CHECK(broken.exit_code == 2);
}

TEST_CASE("classify honors an explicit knowledge base file") {
    const CliResult r = run({"classify", "--kb", kShippedKb.string(), "--angle", "45", "--flow",
                             "350", "--watercut", "0.5"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("predicted: W/O") != std::string::npos);

    const CliResult missing = run({"classify", "--kb", temp_file("missing_kb.json").string(),
                                   "--angle", "45", "--flow", "350", "--watercut", "0.5"});
    CHECK(missing.exit_code == 2);
}
