#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

#include "synteo/dataset.hpp"
#include "synteo/eval.hpp"
#include "synteo/texture.hpp"
#include "synteo/xml.hpp"

namespace py = pybind11;
using namespace synteo;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::pair<std::string, std::string>> validate(const std::string& source) {
    const std::string text =
        source == "builtin" ? onto::builtin_ontology_xml() : read_file(source);
    std::vector<std::pair<std::string, std::string>> out;
    try {
        onto::parse_ontology(text);
    } catch (const xml::ParseError& e) {
        out.emplace_back("XML_PARSE", e.what());
    } catch (const onto::ValidationError& e) {
        for (const auto& d : e.diagnostics) out.emplace_back(d.code, d.message);
    }
    return out;
}

data::DatasetRecipe resolve_recipe(const std::string& recipe) {
    if (const auto* builtin = data::find_builtin_recipe(recipe)) return *builtin;
    if (!recipe.empty() && recipe.front() == '{') return data::recipe_from_json(recipe);
    return data::recipe_from_json(read_file(recipe));
}

py::dict report_to_dict(const data::BuildReport& report) {
    py::dict out;
    out["recipe"] = report.recipe.name;
    out["seed"] = report.recipe.seed;
    out["total"] = report.recipe.total_examples;
    out["failures"] = report.failures;
    py::dict counts;
    for (const auto& [cls, n] : report.counts) counts[py::str(cls)] = n;
    out["class_counts"] = counts;
    py::list examples;
    for (const auto& e : report.examples) {
        py::dict d;
        d["id"] = e.id;
        d["class"] = e.composition_class;
        d["seed"] = e.seed;
        d["role"] = e.role;
        d["shard"] = e.shard;
        d["attempts"] = e.attempts;
        examples.append(d);
    }
    out["examples"] = examples;
    return out;
}

py::dict generate(const std::string& recipe, const std::string& out_dir, int total,
                  std::optional<uint64_t> seed, int workers,
                  const std::string& template_root, bool dry_run) {
    data::DatasetRecipe r = resolve_recipe(recipe);
    if (total > 0) r.total_examples = total;
    if (seed) r.seed = *seed;

    std::optional<store::TileIndex> templates;
    if (!template_root.empty()) {
        templates = store::build_index(template_root);
        if (templates->empty())
            throw std::runtime_error("template store at " + template_root + " is empty");
    } else if (!dry_run && r.template_sea_enabled) {
        throw std::runtime_error("recipe '" + r.name +
                                 "' needs a template store; pass template_root");
    }

    data::BuildOptions options;
    options.output_dir = out_dir;
    options.workers = workers;
    options.dry_run = dry_run;
    options.templates = templates ? &*templates : nullptr;

    const auto ontology = onto::parse_ontology(onto::builtin_ontology_xml());
    py::gil_scoped_release release;
    const auto report = data::build_dataset(ontology, r, options);
    py::gil_scoped_acquire acquire;
    return report_to_dict(report);
}

py::dict replayed_to_dict(const data::ReplayedExample& replay) {
    py::dict out;
    out["width"] = replay.image.width;
    out["height"] = replay.image.height;
    out["pixels"] = py::bytes(
        reinterpret_cast<const char*>(replay.image.pixels.data()),
        replay.image.pixels.size());
    py::list boxes;
    for (const auto& b : replay.boxes)
        boxes.append(py::make_tuple(b.xmin, b.ymin, b.xmax, b.ymax, b.label));
    out["boxes"] = boxes;
    return out;
}

py::dict replay_snapshot(const std::string& snapshot_path,
                         const std::string& template_root) {
    const auto snapshot = onto::parse_snapshot(read_file(snapshot_path));
    std::optional<store::TileIndex> templates;
    if (!template_root.empty()) templates = store::build_index(template_root);
    const auto ontology = onto::parse_ontology(onto::builtin_ontology_xml());
    return replayed_to_dict(data::regenerate_from_snapshot(
        ontology, snapshot, templates ? &*templates : nullptr));
}

py::dict render_example(const std::string& composition_class, uint64_t seed,
                        double scene_size, double sensor_resolution, bool coast,
                        bool template_sea, bool tidal,
                        const std::string& template_root) {
    scene::GenerationRequest request;
    request.composition_class = composition_class;
    request.coast_enabled = coast;
    request.template_sea = template_sea;
    request.tidal_turbines = tidal;
    request.extent = scene::SceneExtentConfig::create(scene_size, sensor_resolution);

    std::optional<store::TileIndex> templates;
    if (!template_root.empty()) templates = store::build_index(template_root);

    const auto ontology = onto::parse_ontology(onto::builtin_ontology_xml());
    const auto composition = scene::compose_scene(ontology, request, seed);

    data::ReplayedExample out;
    out.image = tex::render_scene(composition, templates ? &*templates : nullptr);
    out.boxes = data::derive_annotation(composition);
    out.composition = composition;
    py::dict d = replayed_to_dict(out);
    d["class"] = composition.composition_class;
    d["seed"] = composition.seed;
    return d;
}

}  // namespace

PYBIND11_MODULE(synteo, m) {
    m.doc() = "synthetic SAR wind-farm dataset generation and detection evaluation";

    m.def("builtin_ontology_xml", [] { return onto::builtin_ontology_xml(); },
          "the shipped ontology document");
    m.def("validate", &validate, py::arg("source") = "builtin",
          "validate an ontology ('builtin' or a path); returns (code, message) pairs");

    m.def("anchor_scales",
          [](const std::vector<double>& sizes, double model_size, double image_size,
             double stride, double anchor) {
              eval::AnchorConfig cfg;
              cfg.model_h = cfg.model_w = model_size;
              cfg.image_h = cfg.image_w = image_size;
              cfg.stride = stride;
              cfg.anchor_h = cfg.anchor_w = anchor;
              return eval::anchor_scales(cfg, sizes);
          },
          py::arg("sizes"), py::arg("model_size") = 1024, py::arg("image_size") = 2048,
          py::arg("stride") = 16, py::arg("anchor") = 4);

    m.def("make_fixtures",
          [](const std::string& root, uint64_t seed, double frame_size,
             double pixel_size) {
              store::make_fixtures(root, seed, frame_size, pixel_size);
          },
          py::arg("root"), py::arg("seed") = 1, py::arg("frame_size") = 20480,
          py::arg("pixel_size") = 10);

    m.def("generate", &generate, py::arg("recipe"), py::arg("out_dir") = "dataset",
          py::arg("total") = 0, py::arg("seed") = std::nullopt, py::arg("workers") = 1,
          py::arg("template_root") = "", py::arg("dry_run") = false,
          "build a dataset; recipe is a builtin name, a JSON document or a file path");

    m.def("evaluate",
          [](const std::string& predictions_geojson, const std::string& gt_geojson,
             double score_threshold, double nms_overlap, double merge_min_iou,
             double match_tau) {
              eval::EvalConfig cfg{score_threshold, nms_overlap, merge_min_iou,
                                   match_tau};
              return eval::report_to_json(
                  eval::evaluate(predictions_geojson, gt_geojson, cfg));
          },
          py::arg("predictions_geojson"), py::arg("ground_truth_geojson"),
          py::arg("score_threshold") = 0.8, py::arg("nms_overlap") = 0.5,
          py::arg("merge_min_iou") = 1.0 / 3.0, py::arg("match_tau") = 0.33,
          "score predictions against ground truth; returns the JSON report");

    m.def("replay_snapshot", &replay_snapshot, py::arg("snapshot_path"),
          py::arg("template_root") = "",
          "regenerate an example from its snapshot file");

    m.def("render_example", &render_example, py::arg("composition_class"),
          py::arg("seed"), py::arg("scene_size") = 20480,
          py::arg("sensor_resolution") = 10, py::arg("coast") = false,
          py::arg("template_sea") = false, py::arg("tidal") = false,
          py::arg("template_root") = "",
          "compose and render a single example; returns pixels and boxes");
}
