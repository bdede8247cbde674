#include "synteo/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

#include <nlohmann/json.hpp>

#include "synteo/texture.hpp"
#include "synteo/xml.hpp"

namespace synteo::data {

namespace {

constexpr uint64_t kClassShuffleSalt = 0xC1A55;
constexpr uint64_t kSplitSalt = 0x59117;
constexpr int kMaxAttempts = 10;

uint64_t fnv1a(std::string_view s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << bytes;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void validate_recipe(const DatasetRecipe& r) {
    if (r.total_examples <= 0)
        throw std::runtime_error("recipe '" + r.name + "': total must be positive");
    if (r.class_mix.empty())
        throw std::runtime_error("recipe '" + r.name + "': empty class mix");
    double sum = 0;
    for (const auto& [cls, frac] : r.class_mix) {
        if (frac <= 0)
            throw std::runtime_error("recipe '" + r.name + "': fraction for " + cls +
                                     " must be positive");
        sum += frac;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::runtime_error("recipe '" + r.name + "': class fractions sum to " +
                                 onto::format_number(sum) + ", expected 1");
}

}  // namespace

std::vector<DatasetRecipe> builtin_recipes() {
    std::vector<DatasetRecipe> out;

    DatasetRecipe d1;
    d1.name = "dataset-1";
    d1.total_examples = 45000;
    d1.class_mix = {{"owf-small", 1.0}};
    out.push_back(d1);

    DatasetRecipe d2;
    d2.name = "dataset-2";
    d2.total_examples = 90000;
    d2.class_mix = {{"owf-small", 0.25}, {"owf-medium", 0.5}, {"owf-large", 0.25}};
    out.push_back(d2);

    DatasetRecipe d3;
    d3.name = "dataset-3";
    d3.total_examples = 90000;
    d3.class_mix = {{"owf-small", 1.0 / 6},
                    {"owf-medium", 1.0 / 3},
                    {"owf-large", 1.0 / 6},
                    {"none-target-rigs", 1.0 / 6},
                    {"none-target-land", 1.0 / 6}};
    d3.coast_enabled = true;
    d3.template_sea_enabled = true;
    out.push_back(d3);

    DatasetRecipe d3p = d3;
    d3p.name = "dataset-3-plus";
    d3p.tidal_turbines_enabled = true;
    out.push_back(d3p);

    return out;
}

const DatasetRecipe* find_builtin_recipe(std::string_view name) {
    static const std::vector<DatasetRecipe> recipes = builtin_recipes();
    for (const auto& r : recipes)
        if (r.name == name) return &r;
    return nullptr;
}

DatasetRecipe recipe_from_json(const std::string& text) {
    auto doc = nlohmann::json::parse(text);
    DatasetRecipe r;
    r.name = doc.at("name").get<std::string>();
    r.total_examples = doc.at("total").get<int>();
    for (const auto& entry : doc.at("class_mix"))
        r.class_mix.emplace_back(entry.at("class").get<std::string>(),
                                 entry.at("fraction").get<double>());
    r.coast_enabled = doc.value("coast", false);
    r.template_sea_enabled = doc.value("template_sea", false);
    r.tidal_turbines_enabled = doc.value("tidal_turbines", false);
    r.seed = doc.value("seed", uint64_t{0});
    r.scene_size = doc.value("scene_size", 20480.0);
    r.sensor_resolution = doc.value("sensor_resolution", 10.0);
    r.export_size = doc.value("export_size", 0);
    validate_recipe(r);
    return r;
}

std::string recipe_to_json(const DatasetRecipe& r) {
    nlohmann::json mix = nlohmann::json::array();
    for (const auto& [cls, frac] : r.class_mix)
        mix.push_back({{"class", cls}, {"fraction", frac}});
    nlohmann::json doc = {{"name", r.name},
                          {"total", r.total_examples},
                          {"class_mix", mix},
                          {"coast", r.coast_enabled},
                          {"template_sea", r.template_sea_enabled},
                          {"tidal_turbines", r.tidal_turbines_enabled},
                          {"seed", r.seed},
                          {"scene_size", r.scene_size},
                          {"sensor_resolution", r.sensor_resolution},
                          {"export_size", r.export_size}};
    return doc.dump(2) + "\n";
}

std::map<std::string, int> class_counts(const DatasetRecipe& r) {
    validate_recipe(r);
    struct Share {
        std::string cls;
        int base;
        double frac_part;
    };
    std::vector<Share> shares;
    int assigned = 0;
    for (const auto& [cls, frac] : r.class_mix) {
        const double exact = frac * r.total_examples;
        const int base = static_cast<int>(std::floor(exact + 1e-9));
        shares.push_back({cls, base, exact - base});
        assigned += base;
    }
    std::stable_sort(shares.begin(), shares.end(), [](const Share& a, const Share& b) {
        if (a.frac_part != b.frac_part) return a.frac_part > b.frac_part;
        return a.cls < b.cls;
    });
    for (int i = 0; i < r.total_examples - assigned; ++i)
        ++shares[static_cast<size_t>(i) % shares.size()].base;

    std::map<std::string, int> out;
    for (const auto& s : shares) out[s.cls] = s.base;
    return out;
}

std::vector<AnnotationBox> derive_annotation(const scene::SceneComposition& c) {
    std::vector<AnnotationBox> boxes;
    const double res = c.extent.sensor_resolution;
    for (const auto& e : c.elements) {
        if (e.role != scene::Role::Target || e.points.empty()) continue;
        if (!e.point_spec || !e.point_spec->find("kernel-radius"))
            throw std::runtime_error(e.entity + ": target without a kernel radius");
        const int radius =
            static_cast<int>(std::llround(e.point_spec->find("kernel-radius")->value));
        int xmin = c.extent.image_size, ymin = c.extent.image_size;
        int xmax = -1, ymax = -1;
        for (const auto& p : e.points) {
            const int px = static_cast<int>(std::floor(p.x / res));
            const int py = static_cast<int>(std::floor(p.y / res));
            xmin = std::min(xmin, px);
            ymin = std::min(ymin, py);
            xmax = std::max(xmax, px);
            ymax = std::max(ymax, py);
        }
        boxes.push_back({xmin - radius, ymin - radius, xmax + radius, ymax + radius,
                         "owf"});
    }
    return boxes;
}

std::string export_annotation(const std::string& example_id, int width, int height,
                              const std::vector<AnnotationBox>& boxes) {
    using xml::Node;
    auto leaf = [](std::string name, std::string text) {
        Node n;
        n.name = std::move(name);
        n.text = std::move(text);
        return n;
    };
    Node root;
    root.name = "annotation";
    root.children.push_back(leaf("folder", "images"));
    root.children.push_back(leaf("filename", example_id + ".png"));
    Node size;
    size.name = "size";
    size.children.push_back(leaf("width", std::to_string(width)));
    size.children.push_back(leaf("height", std::to_string(height)));
    size.children.push_back(leaf("depth", "1"));
    root.children.push_back(std::move(size));
    for (const auto& b : boxes) {
        Node object;
        object.name = "object";
        object.children.push_back(leaf("name", b.label));
        object.children.push_back(leaf("difficult", "0"));
        Node bndbox;
        bndbox.name = "bndbox";
        bndbox.children.push_back(leaf("xmin", std::to_string(b.xmin)));
        bndbox.children.push_back(leaf("ymin", std::to_string(b.ymin)));
        bndbox.children.push_back(leaf("xmax", std::to_string(b.xmax)));
        bndbox.children.push_back(leaf("ymax", std::to_string(b.ymax)));
        object.children.push_back(std::move(bndbox));
        root.children.push_back(std::move(object));
    }
    return xml::serialize(root);
}

ParsedAnnotation parse_annotation(const std::string& document) {
    const xml::Node root = xml::parse(document);
    if (root.name != "annotation")
        throw std::runtime_error("expected <annotation>, got <" + root.name + ">");
    ParsedAnnotation out;
    if (const auto* f = root.find_child("filename")) out.filename = f->text;
    if (const auto* size = root.find_child("size")) {
        if (const auto* w = size->find_child("width")) out.width = std::stoi(w->text);
        if (const auto* h = size->find_child("height")) out.height = std::stoi(h->text);
    }
    for (const auto* object : root.children_named("object")) {
        const auto* bb = object->find_child("bndbox");
        if (!bb) continue;
        AnnotationBox box;
        box.xmin = std::stoi(bb->find_child("xmin")->text);
        box.ymin = std::stoi(bb->find_child("ymin")->text);
        box.xmax = std::stoi(bb->find_child("xmax")->text);
        box.ymax = std::stoi(bb->find_child("ymax")->text);
        if (const auto* name = object->find_child("name")) box.label = name->text;
        out.boxes.push_back(box);
    }
    return out;
}

RasterImage rescale_for_training(const RasterImage& img, int target_size) {
    if (img.width != img.height)
        throw std::runtime_error("rescale expects a square image");
    if (target_size <= 0) throw std::runtime_error("rescale: bad target size");
    if (target_size == img.width) return img;

    if (target_size < img.width) {
        if (img.width % target_size != 0)
            throw std::runtime_error("downscale target must divide the source size");
        const int f = img.width / target_size;
        RasterImage out(target_size, target_size, 0, img.pixel_size * f);
        for (int y = 0; y < target_size; ++y) {
            for (int x = 0; x < target_size; ++x) {
                long sum = 0;
                for (int dy = 0; dy < f; ++dy)
                    for (int dx = 0; dx < f; ++dx) sum += img.at(x * f + dx, y * f + dy);
                // block mean, round half away from zero
                out.at(x, y) = static_cast<uint8_t>(
                    std::lround(static_cast<double>(sum) / (f * f)));
            }
        }
        return out;
    }
    if (target_size % img.width != 0)
        throw std::runtime_error("upscale target must be a multiple of the source size");
    const int f = target_size / img.width;
    RasterImage out(target_size, target_size, 0, img.pixel_size / f);
    for (int y = 0; y < target_size; ++y)
        for (int x = 0; x < target_size; ++x) out.at(x, y) = img.at(x / f, y / f);
    return out;
}

AnnotationBox rescale_box(const AnnotationBox& b, double factor) {
    auto scale = [factor](int v) { return static_cast<int>(std::lround(v * factor)); };
    return {scale(b.xmin), scale(b.ymin), scale(b.xmax), scale(b.ymax), b.label};
}

std::vector<onto::SceneElementSpecification> snapshot_specs(
    const scene::SceneComposition& c) {
    std::vector<onto::SceneElementSpecification> specs;
    specs.push_back(c.scene_spec);
    for (const auto& e : c.elements) {
        specs.push_back(e.spec);
        if (e.point_spec) specs.push_back(*e.point_spec);
    }
    return specs;
}

namespace {

struct ExamplePlan {
    size_t index;
    std::string id;
    std::string composition_class;
    std::string role;
    int shard;
};

std::vector<ExamplePlan> plan_examples(const DatasetRecipe& recipe,
                                       const BuildOptions& options) {
    const auto counts = class_counts(recipe);
    const auto total = static_cast<size_t>(recipe.total_examples);

    std::vector<std::string> classes;
    classes.reserve(total);
    for (const auto& [cls, frac] : recipe.class_mix) {
        (void)frac;
        for (int i = 0; i < counts.at(cls); ++i) classes.push_back(cls);
    }
    Rng shuffle_rng(Rng::derive_seed(recipe.seed, kClassShuffleSalt));
    for (size_t i = total; i > 1; --i)
        std::swap(classes[i - 1], classes[shuffle_rng.bounded(i)]);

    // exact seeded validation split
    std::vector<size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    Rng split_rng(Rng::derive_seed(recipe.seed, kSplitSalt));
    for (size_t i = total; i > 1; --i)
        std::swap(order[i - 1], order[split_rng.bounded(i)]);
    const auto val_count = static_cast<size_t>(
        std::llround((1.0 - options.train_fraction) * static_cast<double>(total)));
    std::vector<bool> is_val(total, false);
    for (size_t i = 0; i < val_count; ++i) is_val[order[i]] = true;

    int id_width = 6;
    while (total > static_cast<size_t>(std::pow(10, id_width))) ++id_width;

    std::vector<ExamplePlan> plan(total);
    for (size_t i = 0; i < total; ++i) {
        std::string id = std::to_string(i);
        if (static_cast<int>(id.size()) < id_width)
            id.insert(0, static_cast<size_t>(id_width) - id.size(), '0');
        plan[i] = {i, id, classes[i], is_val[i] ? "val" : "train",
                   static_cast<int>(fnv1a(id) %
                                    static_cast<uint64_t>(options.shard_count))};
    }
    return plan;
}

}  // namespace

std::string manifest_to_json(const BuildReport& report, const BuildOptions& options) {
    nlohmann::json examples = nlohmann::json::array();
    for (const auto& e : report.examples)
        examples.push_back({{"id", e.id},
                            {"class", e.composition_class},
                            {"seed", e.seed},
                            {"role", e.role},
                            {"shard", e.shard},
                            {"attempts", e.attempts}});
    nlohmann::json counts;
    for (const auto& [cls, n] : report.counts) counts[cls] = n;
    nlohmann::json doc = {
        {"recipe", report.recipe.name},
        {"seed", report.recipe.seed},
        {"total", report.recipe.total_examples},
        {"scene_size", report.recipe.scene_size},
        {"sensor_resolution", report.recipe.sensor_resolution},
        {"export_size", report.recipe.export_size},
        {"class_counts", counts},
        {"split", {{"train", options.train_fraction},
                   {"val", 1.0 - options.train_fraction}}},
        {"shard_count", options.shard_count},
        {"failures", report.failures},
        {"examples", examples}};
    return doc.dump(2) + "\n";
}

BuildReport build_dataset(const onto::Ontology& o, const DatasetRecipe& recipe,
                          const BuildOptions& options) {
    validate_recipe(recipe);
    const auto plan = plan_examples(recipe, options);

    BuildReport report;
    report.recipe = recipe;
    report.counts = class_counts(recipe);
    report.examples.resize(plan.size());
    for (const auto& p : plan)
        report.examples[p.index] = {p.id, p.composition_class, 0, p.role, p.shard, 0};
    if (options.dry_run) return report;

    const auto extent =
        scene::SceneExtentConfig::create(recipe.scene_size, recipe.sensor_resolution);
    const int export_size =
        recipe.export_size > 0 ? recipe.export_size : extent.image_size;
    const double factor =
        static_cast<double>(export_size) / static_cast<double>(extent.image_size);

    std::filesystem::create_directories(options.output_dir / "images");
    std::filesystem::create_directories(options.output_dir / "annotations");
    std::filesystem::create_directories(options.output_dir / "snapshots");

    std::atomic<size_t> next{0};
    std::atomic<int> failures{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::atomic<bool> abort{false};

    auto worker = [&] {
        while (!abort.load()) {
            const size_t i = next.fetch_add(1);
            if (i >= plan.size()) return;
            const ExamplePlan& p = plan[i];

            scene::GenerationRequest request;
            request.composition_class = p.composition_class;
            request.coast_enabled = recipe.coast_enabled;
            request.template_sea = recipe.template_sea_enabled;
            request.tidal_turbines = recipe.tidal_turbines_enabled;
            request.extent = extent;

            const uint64_t base_seed = recipe.seed ^ static_cast<uint64_t>(p.index);
            bool done = false;
            try {
                for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
                    const uint64_t seed =
                        attempt == 0
                            ? base_seed
                            : Rng::derive_seed(base_seed,
                                               static_cast<uint64_t>(attempt));
                    try {
                        auto composition = scene::compose_scene(o, request, seed);
                        RasterImage image =
                            tex::render_scene(composition, options.templates);
                        auto boxes = derive_annotation(composition);
                        if (export_size != extent.image_size) {
                            image = rescale_for_training(image, export_size);
                            for (auto& b : boxes) b = rescale_box(b, factor);
                        }
                        write_png((options.output_dir / "images" / (p.id + ".png"))
                                      .string(),
                                  image);
                        write_file(options.output_dir / "annotations" / (p.id + ".xml"),
                                   export_annotation(p.id, export_size, export_size,
                                                     boxes));
                        write_file(
                            options.output_dir / "snapshots" /
                                (p.id + ".snapshot.xml"),
                            onto::write_snapshot(snapshot_specs(composition), p.id,
                                                 seed, composition.composition_class));
                        report.examples[p.index].seed = seed;
                        report.examples[p.index].attempts = attempt + 1;
                        done = true;
                    } catch (const scene::ResampleSignal&) {
                    } catch (const scene::GenerationError&) {
                    }
                }
                if (!done) {
                    report.examples[p.index].role = "failed";
                    report.examples[p.index].attempts = kMaxAttempts;
                    failures.fetch_add(1);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                abort.store(true);
                return;
            }
        }
    };

    const int n_workers = std::max(1, options.workers);
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);

    report.failures = failures.load();
    if (report.failures * 100 > recipe.total_examples)
        throw std::runtime_error(
            "dataset build failed: " + std::to_string(report.failures) + " of " +
            std::to_string(recipe.total_examples) +
            " examples could not be generated (limit is 1%)");

    write_file(options.output_dir / "manifest.json",
               manifest_to_json(report, options));
    return report;
}

ReplayedExample regenerate_from_snapshot(const onto::Ontology& o,
                                         const onto::OntologySnapshot& snapshot,
                                         const store::TileIndex* templates) {
    const onto::SceneElementSpecification* scene_spec = nullptr;
    for (const auto& spec : snapshot.specifications)
        if (spec.entity == "Scene") scene_spec = &spec;
    if (!scene_spec)
        throw std::runtime_error("snapshot " + snapshot.example_id +
                                 ": missing Scene specification");

    auto key_of = [&](std::string_view name) -> std::string {
        const auto* v = scene_spec->find(name);
        return v ? v->key : "";
    };
    auto value_of = [&](std::string_view name, double fallback) {
        const auto* v = scene_spec->find(name);
        return v ? v->value : fallback;
    };

    scene::GenerationRequest request;
    request.composition_class = snapshot.composition_class;
    request.coast_enabled = key_of("coast") == "on";
    request.template_sea = key_of("sea-mode") == "template";
    request.tidal_turbines = key_of("texture-mode") == "tidal";
    request.extent = scene::SceneExtentConfig::create(
        value_of("scene-size", o.scene_defaults.scene_size),
        value_of("sensor-resolution", o.scene_defaults.sensor_resolution));

    ReplayedExample out;
    out.composition = scene::compose_scene(o, request, snapshot.rng_seed);
    if (snapshot_specs(out.composition) != snapshot.specifications)
        throw std::runtime_error("snapshot " + snapshot.example_id +
                                 ": replayed specifications disagree with the stored "
                                 "ones (ontology or code drift)");
    out.image = tex::render_scene(out.composition, templates);
    out.boxes = derive_annotation(out.composition);
    return out;
}

}  // namespace synteo::data
