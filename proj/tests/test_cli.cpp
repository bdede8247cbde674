#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

std::string g_cli;  // path to the binary under test, from argv[1]

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_raw(const std::string& cmd_line) {
    const fs::path capture = fs::temp_directory_path() / "synteo_cli_out.txt";
    const std::string cmd = cmd_line + " > " + capture.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(capture);
    r.stdout_text.assign(std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>());
    fs::remove(capture);
    return r;
}

RunResult run(const std::string& args) { return run_raw(g_cli + " " + args); }

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-cli-binary>\n");
        return 1;
    }
    g_cli = argv[1];
    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv + 1);
    return ctx.run();
}

TEST_CASE("validate-ontology accepts the builtin and rejects garbage") {
    const auto ok = run("validate-ontology builtin");
    CHECK(ok.exit_code == 0);
    CHECK(ok.stdout_text.find("ok:") != std::string::npos);

    const fs::path bad = fs::temp_directory_path() / "synteo_bad_ontology.xml";
    std::ofstream(bad) << "<ontology><entity name=\"A\"/><entity name=\"A\"/></ontology>";
    const auto fail = run("--json validate-ontology " + bad.string());
    CHECK(fail.exit_code == 1);
    const auto doc = nlohmann::json::parse(fail.stdout_text);
    CHECK(doc["valid"] == false);
    CHECK(!doc["diagnostics"].empty());
    fs::remove(bad);

    // missing file is an operational error, exit 1
    CHECK(run("validate-ontology /no/such/file.xml").exit_code == 1);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run("--frobnicate").exit_code == 2);
    CHECK(run("").exit_code == 2);                      // subcommand required
    CHECK(run("evaluate").exit_code == 2);              // missing required options
    CHECK(run("--help").exit_code == 0);
}

TEST_CASE("anchors reports the published scales") {
    const auto r = run("--json anchors");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.stdout_text);
    CHECK(doc["scales"] == nlohmann::json({0.25, 0.5, 1.0, 2.0, 3.5}));

    const auto custom = run("--json anchors --sizes 512 --image-size 1024");
    const auto doc2 = nlohmann::json::parse(custom.stdout_text);
    CHECK(doc2["scales"][0].get<double>() == 2.0);
}

TEST_CASE("generate --dry-run plans counts and splits") {
    const auto r = run("--json generate --recipe dataset-3 --total 120 --seed 7 --dry-run");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.stdout_text);
    CHECK(doc["dry_run"] == true);
    CHECK(doc["total"] == 120);
    CHECK(doc["class_counts"]["owf-small"] == 20);
    CHECK(doc["class_counts"]["owf-medium"] == 40);
    CHECK(doc["class_counts"]["owf-large"] == 20);
    CHECK(doc["class_counts"]["none-target-rigs"] == 20);
    CHECK(doc["class_counts"]["none-target-land"] == 20);
    CHECK(doc["split_counts"]["train"] == 114);
    CHECK(doc["split_counts"]["val"] == 6);
    CHECK(doc["failures"] == 0);
}

TEST_CASE("generate without templates fails when the recipe needs them") {
    // dataset-3 uses template sea; no --template-root and no env var -> error
    const auto r = run_raw("env -u SYNTEO_TEMPLATE_ROOT " + g_cli +
                           " generate --recipe dataset-3 --total 2 --out /tmp/synteo_never");
    CHECK(r.exit_code == 1);
    CHECK(!fs::exists("/tmp/synteo_never"));
}

TEST_CASE("make-fixtures then generate a tiny dataset end to end") {
    const fs::path store = fs::temp_directory_path() / "synteo_cli_store";
    const fs::path out = fs::temp_directory_path() / "synteo_cli_dataset";
    fs::remove_all(store);
    fs::remove_all(out);

    const auto fix = run("--json make-fixtures --out " + store.string() +
                         " --seed 3 --frame-size 10240 --pixel-size 10");
    REQUIRE(fix.exit_code == 0);
    const auto idx = nlohmann::json::parse(fix.stdout_text);
    CHECK(idx["tiles"].size() == 5);
    CHECK(idx["diagnostics"].empty());

    const fs::path recipe = fs::temp_directory_path() / "synteo_cli_recipe.json";
    std::ofstream(recipe) << nlohmann::json{
        {"name", "cli-tiny"},
        {"total", 2},
        {"class_mix", {{{"class", "owf-small"}, {"fraction", 1.0}}}},
        {"template_sea", true},
        {"seed", 11},
        {"scene_size", 10240.0},
        {"sensor_resolution", 10.0}}.dump();

    const auto gen = run("--json generate --recipe " + recipe.string() + " --out " +
                         out.string() + " --template-root " + store.string() +
                         " --workers 2");
    REQUIRE(gen.exit_code == 0);
    const auto doc = nlohmann::json::parse(gen.stdout_text);
    CHECK(doc["failures"] == 0);
    CHECK(doc["class_counts"]["owf-small"] == 2);
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(fs::exists(out / "images" / "000000.png"));
    CHECK(fs::exists(out / "annotations" / "000001.xml"));
    CHECK(fs::exists(out / "snapshots" / "000001.snapshot.xml"));

    fs::remove(recipe);
    fs::remove_all(store);
    fs::remove_all(out);
}

TEST_CASE("evaluate scores geojson files") {
    const fs::path pred_path = fs::temp_directory_path() / "synteo_cli_pred.json";
    const fs::path gt_path = fs::temp_directory_path() / "synteo_cli_gt.json";

    nlohmann::json box = {
        {"type", "Feature"},
        {"properties", {{"score", 0.95}, {"site", "s1"}}},
        {"geometry",
         {{"type", "Polygon"},
          {"coordinates", {{{0, 0}, {10, 0}, {10, 10}, {0, 10}, {0, 0}}}}}}};
    nlohmann::json gt_box = box;
    gt_box["properties"] = {{"kind", "farm"}, {"site", "s1"}};
    std::ofstream(pred_path) << nlohmann::json{{"type", "FeatureCollection"},
                                               {"properties", {{"frame", "f"}}},
                                               {"features", {box}}}.dump();
    std::ofstream(gt_path) << nlohmann::json{{"type", "FeatureCollection"},
                                             {"properties", {{"frame", "f"}}},
                                             {"features", {gt_box}}}.dump();

    const auto text = run("evaluate --predictions " + pred_path.string() +
                          " --ground-truth " + gt_path.string());
    REQUIRE(text.exit_code == 0);
    CHECK(text.stdout_text.find("combined") != std::string::npos);

    const auto json = run("--json evaluate --predictions " + pred_path.string() +
                          " --ground-truth " + gt_path.string());
    REQUIRE(json.exit_code == 0);
    const auto doc = nlohmann::json::parse(json.stdout_text);
    CHECK(doc["combined"]["tp"] == 1);
    CHECK(doc["combined"]["precision"] == 1.0);

    // frame mismatch is an operational error
    std::ofstream(gt_path) << nlohmann::json{{"type", "FeatureCollection"},
                                             {"properties", {{"frame", "other"}}},
                                             {"features", {gt_box}}}.dump();
    CHECK(run("evaluate --predictions " + pred_path.string() + " --ground-truth " +
              gt_path.string())
              .exit_code == 1);

    fs::remove(pred_path);
    fs::remove(gt_path);
}
