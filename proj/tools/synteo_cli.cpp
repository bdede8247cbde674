#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "synteo/dataset.hpp"
#include "synteo/eval.hpp"
#include "synteo/ontology.hpp"
#include "synteo/template_store.hpp"
#include "synteo/xml.hpp"

namespace {

constexpr const char* kTemplateRootEnv = "SYNTEO_TEMPLATE_ROOT";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int cmd_validate(const std::string& source, bool json_mode) {
    const std::string text =
        source == "builtin" ? synteo::onto::builtin_ontology_xml() : read_file(source);

    std::vector<synteo::onto::Diagnostic> diagnostics;
    try {
        synteo::onto::parse_ontology(text);
    } catch (const synteo::xml::ParseError& e) {
        diagnostics.push_back({"XML_PARSE", e.what()});
    } catch (const synteo::onto::ValidationError& e) {
        diagnostics = e.diagnostics;
    }

    if (json_mode) {
        nlohmann::json out = {{"source", source},
                              {"valid", diagnostics.empty()},
                              {"diagnostics", nlohmann::json::array()}};
        for (const auto& d : diagnostics)
            out["diagnostics"].push_back({{"code", d.code}, {"message", d.message}});
        std::cout << out.dump(2) << "\n";
    } else if (diagnostics.empty()) {
        std::cout << "ok: " << source << " is a valid ontology\n";
    } else {
        for (const auto& d : diagnostics)
            std::cout << d.code << ": " << d.message << "\n";
    }
    return diagnostics.empty() ? 0 : 1;
}

std::optional<synteo::store::TileIndex> open_templates(std::string root,
                                                       bool required) {
    if (root.empty())
        if (const char* env = std::getenv(kTemplateRootEnv)) root = env;
    if (root.empty()) {
        if (required)
            throw std::runtime_error(
                std::string("a template store is required; pass --template-root or "
                            "set ") + kTemplateRootEnv);
        return std::nullopt;
    }
    auto idx = synteo::store::build_index(root);
    for (const auto& d : idx.diagnostics)
        std::cerr << "warning: " << d.code << ": " << d.message << "\n";
    if (idx.empty()) throw std::runtime_error("template store at " + root + " is empty");
    return idx;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic SAR wind-farm dataset generator and detection evaluator"};
    app.require_subcommand(1);
    bool json_mode = false;
    app.add_flag("--json", json_mode, "machine-readable JSON output");

    // validate-ontology
    std::string ontology_source = "builtin";
    auto* validate = app.add_subcommand("validate-ontology",
                                        "check an ontology document ('builtin' or a path)");
    validate->add_option("source", ontology_source, "'builtin' or path to an XML file");

    // generate
    std::string recipe_name = "dataset-3";
    std::string out_dir = "dataset";
    std::string template_root;
    int total_override = 0;
    uint64_t seed = 0;
    bool seed_given = false;
    int workers = 1;
    bool dry_run = false;
    auto* generate = app.add_subcommand("generate", "build a synthetic dataset");
    generate->add_option("--recipe", recipe_name,
                         "builtin recipe name or path to a recipe JSON file");
    generate->add_option("--total", total_override, "override the recipe total");
    generate->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
        seed_given = true;
    });
    generate->add_option("--out", out_dir, "output directory");
    generate->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    generate->add_option("--template-root", template_root,
                         "template tile store (default: $" +
                             std::string(kTemplateRootEnv) + ")");
    generate->add_flag("--dry-run", dry_run, "plan ids, classes and splits only");

    // evaluate
    std::string pred_path, gt_path;
    synteo::eval::EvalConfig eval_cfg;
    auto* evaluate = app.add_subcommand("evaluate", "score detections against ground truth");
    evaluate->add_option("--predictions", pred_path, "predictions GeoJSON")->required();
    evaluate->add_option("--ground-truth", gt_path, "ground-truth GeoJSON")->required();
    evaluate->add_option("--score-threshold", eval_cfg.score_threshold,
                         "detection score cutoff");
    evaluate->add_option("--nms-overlap", eval_cfg.nms_overlap, "NMS IoU cutoff");
    evaluate->add_option("--merge-iou", eval_cfg.merge_min_iou, "cascade merge min IoU");
    evaluate->add_option("--match-tau", eval_cfg.match_tau, "matching IoU threshold");

    // anchors
    std::vector<double> sizes{128, 256, 512, 1024, 1792};
    synteo::eval::AnchorConfig anchor_cfg;
    auto* anchors = app.add_subcommand("anchors", "anchor scales for the detector config");
    anchors->add_option("--sizes", sizes, "target object sizes, px");
    anchors->add_option("--model-size", anchor_cfg.model_h, "training chip side, px")
        ->each([&](const std::string& v) { anchor_cfg.model_w = std::stod(v); });
    anchors->add_option("--image-size", anchor_cfg.image_h, "inference frame side, px")
        ->each([&](const std::string& v) { anchor_cfg.image_w = std::stod(v); });
    anchors->add_option("--stride", anchor_cfg.stride, "backbone output stride");

    // make-fixtures
    std::string fixtures_dir;
    uint64_t fixtures_seed = 1;
    double frame_size = 20480;
    double pixel_size = 10;
    auto* fixtures = app.add_subcommand("make-fixtures",
                                        "synthesize a stand-in template tile store");
    fixtures->add_option("--out", fixtures_dir, "store directory")->required();
    fixtures->add_option("--seed", fixtures_seed, "texture seed");
    fixtures->add_option("--frame-size", frame_size, "tile extent, meters");
    fixtures->add_option("--pixel-size", pixel_size, "meters per pixel");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(ontology_source, json_mode);

        if (generate->parsed()) {
            synteo::data::DatasetRecipe recipe;
            if (const auto* builtin = synteo::data::find_builtin_recipe(recipe_name))
                recipe = *builtin;
            else
                recipe = synteo::data::recipe_from_json(read_file(recipe_name));
            if (total_override > 0) recipe.total_examples = total_override;
            if (seed_given) recipe.seed = seed;

            std::optional<synteo::store::TileIndex> templates;
            if (!dry_run)
                templates = open_templates(template_root, recipe.template_sea_enabled);

            synteo::data::BuildOptions options;
            options.output_dir = out_dir;
            options.workers = workers;
            options.dry_run = dry_run;
            options.templates = templates ? &*templates : nullptr;

            const auto ontology =
                synteo::onto::parse_ontology(synteo::onto::builtin_ontology_xml());
            const auto report = synteo::data::build_dataset(ontology, recipe, options);

            int train = 0, val = 0;
            for (const auto& e : report.examples) {
                if (e.role == "train") ++train;
                if (e.role == "val") ++val;
            }
            if (json_mode) {
                nlohmann::json counts;
                for (const auto& [cls, n] : report.counts) counts[cls] = n;
                nlohmann::json out = {{"recipe", recipe.name},
                                      {"seed", recipe.seed},
                                      {"total", recipe.total_examples},
                                      {"dry_run", dry_run},
                                      {"class_counts", counts},
                                      {"split_counts", {{"train", train}, {"val", val}}},
                                      {"split",
                                       {{"train", options.train_fraction},
                                        {"val", 1.0 - options.train_fraction}}},
                                      {"failures", report.failures}};
                if (!dry_run) out["output_dir"] = out_dir;
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << (dry_run ? "planned " : "generated ")
                          << recipe.total_examples << " examples (" << train
                          << " train, " << val << " val";
                if (report.failures) std::cout << ", " << report.failures << " failed";
                std::cout << ")";
                if (!dry_run) std::cout << " in " << out_dir;
                std::cout << "\n";
                for (const auto& [cls, n] : report.counts)
                    std::cout << "  " << cls << ": " << n << "\n";
            }
            return 0;
        }

        if (evaluate->parsed()) {
            const auto report = synteo::eval::evaluate(read_file(pred_path),
                                                       read_file(gt_path), eval_cfg);
            std::cout << (json_mode ? synteo::eval::report_to_json(report)
                                    : synteo::eval::report_to_text(report));
            return 0;
        }

        if (anchors->parsed()) {
            const auto scales = synteo::eval::anchor_scales(anchor_cfg, sizes);
            if (json_mode) {
                nlohmann::json out = {{"sizes", sizes}, {"scales", scales}};
                std::cout << out.dump(2) << "\n";
            } else {
                for (size_t i = 0; i < sizes.size(); ++i)
                    std::cout << sizes[i] << " px -> "
                              << synteo::onto::format_number(scales[i]) << "\n";
            }
            return 0;
        }

        if (fixtures->parsed()) {
            synteo::store::make_fixtures(fixtures_dir, fixtures_seed, frame_size,
                                         pixel_size);
            const auto idx = synteo::store::build_index(fixtures_dir);
            if (json_mode) {
                std::cout << synteo::store::index_to_json(idx);
            } else {
                std::cout << "wrote " << idx.tiles.size() << " tiles to " << fixtures_dir
                          << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
