#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synteo/ontology.hpp"
#include "synteo/raster.hpp"
#include "synteo/scene.hpp"
#include "synteo/template_store.hpp"

namespace synteo::data {

struct DatasetRecipe {
    std::string name;
    int total_examples = 0;
    // (composition class, fraction), declaration order; fractions sum to 1
    std::vector<std::pair<std::string, double>> class_mix;
    bool coast_enabled = false;
    bool template_sea_enabled = false;
    bool tidal_turbines_enabled = false;
    uint64_t seed = 0;
    double scene_size = 20480;       // meters
    double sensor_resolution = 10;   // meters per pixel
    int export_size = 0;             // output side in px; 0 keeps native size
};

std::vector<DatasetRecipe> builtin_recipes();
const DatasetRecipe* find_builtin_recipe(std::string_view name);
DatasetRecipe recipe_from_json(const std::string& text);
std::string recipe_to_json(const DatasetRecipe& r);

// Exact integer split of the total: floor each share, then hand out the
// remainder by largest fractional part (ties by class name).
std::map<std::string, int> class_counts(const DatasetRecipe& r);

struct AnnotationBox {
    int xmin = 0, ymin = 0, xmax = 0, ymax = 0;  // inclusive pixel bounds
    std::string label = "owf";

    bool operator==(const AnnotationBox&) const = default;
};

// One box per target element: the min/max pixel hull of its points, padded
// by the kernel radius on every side.
std::vector<AnnotationBox> derive_annotation(const scene::SceneComposition& c);

std::string export_annotation(const std::string& example_id, int width, int height,
                              const std::vector<AnnotationBox>& boxes);

struct ParsedAnnotation {
    std::string filename;
    int width = 0, height = 0;
    std::vector<AnnotationBox> boxes;
};
ParsedAnnotation parse_annotation(const std::string& document);

// Integer-factor resampling: area average (round half away from zero) when
// shrinking, nearest-neighbor replication when enlarging.
RasterImage rescale_for_training(const RasterImage& img, int target_size);
AnnotationBox rescale_box(const AnnotationBox& b, double factor);

struct ExampleRecord {
    std::string id;
    std::string composition_class;
    uint64_t seed = 0;       // seed of the successful attempt
    std::string role;        // train | val | failed
    int shard = 0;
    int attempts = 1;
};

struct BuildOptions {
    std::filesystem::path output_dir;
    int workers = 1;
    const store::TileIndex* templates = nullptr;
    double train_fraction = 0.95;
    int shard_count = 8;
    bool dry_run = false;  // plan ids/classes/splits without generating
};

struct BuildReport {
    DatasetRecipe recipe;
    std::map<std::string, int> counts;
    std::vector<ExampleRecord> examples;
    int failures = 0;
};

std::string manifest_to_json(const BuildReport& report, const BuildOptions& options);

// Generates images/<id>.png, annotations/<id>.xml, snapshots/<id>.snapshot.xml
// and manifest.json under output_dir. Output bytes do not depend on the
// worker count. Throws if more than 1% of examples fail to generate.
BuildReport build_dataset(const onto::Ontology& o, const DatasetRecipe& recipe,
                          const BuildOptions& options);

struct ReplayedExample {
    scene::SceneComposition composition;
    RasterImage image;                 // native resolution
    std::vector<AnnotationBox> boxes;  // native resolution
};

// Re-runs composition and rendering from a snapshot; throws if the replayed
// specifications disagree with the stored ones.
ReplayedExample regenerate_from_snapshot(const onto::Ontology& o,
                                         const onto::OntologySnapshot& snapshot,
                                         const store::TileIndex* templates);

// The spec list stored in a snapshot: scene spec, then each element's spec
// and (when present) its per-point spec, in composition order.
std::vector<onto::SceneElementSpecification> snapshot_specs(
    const scene::SceneComposition& c);

}  // namespace synteo::data
