#include "synteo/template_store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "synteo/noise.hpp"
#include "synteo/rng.hpp"

namespace synteo::store {

namespace {

uint64_t fnv1a(std::string_view s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::shared_ptr<const RasterImage> TileIndex::load(const TileMeta& tile) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->entries.find(tile.path);
    if (it != cache_->entries.end()) return it->second;
    auto img = std::make_shared<RasterImage>(read_png(tile.path));
    img->pixel_size = tile.pixel_size;
    cache_->entries.emplace(tile.path, img);
    return img;
}

TileIndex build_index(const std::filesystem::path& root) {
    TileIndex idx;
    if (!std::filesystem::is_directory(root)) {
        idx.diagnostics.push_back({"MISSING_ROOT", "not a directory: " + root.string()});
        return idx;
    }
    std::vector<std::filesystem::path> sidecars;
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
        if (entry.path().extension() == ".json" &&
            entry.path().filename() != "index.json")
            sidecars.push_back(entry.path());
    }
    std::sort(sidecars.begin(), sidecars.end());

    for (const auto& sidecar : sidecars) {
        try {
            auto doc = nlohmann::json::parse(read_file(sidecar));
            TileMeta meta;
            meta.tile_id = doc.at("tile_id").get<std::string>();
            meta.class_tag = doc.at("class").get<std::string>();
            auto b = doc.at("bounds");
            meta.bounds = {b.at(0).get<double>(), b.at(1).get<double>(),
                           b.at(2).get<double>(), b.at(3).get<double>()};
            meta.pixel_size = doc.at("pixel_size").get<double>();
            auto image_path = root / doc.at("image").get<std::string>();
            meta.path = image_path.string();
            if (!meta.bounds.valid() || meta.pixel_size <= 0)
                throw std::runtime_error("degenerate bounds or pixel size");
            RasterImage img = read_png(meta.path);
            meta.width = img.width;
            meta.height = img.height;
            const auto expect_w =
                static_cast<int>(std::llround(meta.bounds.width() / meta.pixel_size));
            const auto expect_h =
                static_cast<int>(std::llround(meta.bounds.height() / meta.pixel_size));
            if (expect_w != meta.width || expect_h != meta.height)
                throw std::runtime_error("bounds disagree with image dimensions");
            idx.tiles.push_back(std::move(meta));
        } catch (const std::exception& e) {
            idx.diagnostics.push_back(
                {"BAD_TILE", sidecar.filename().string() + ": " + e.what()});
        }
    }
    std::sort(idx.tiles.begin(), idx.tiles.end(),
              [](const TileMeta& a, const TileMeta& b) { return a.tile_id < b.tile_id; });
    return idx;
}

std::string index_to_json(const TileIndex& idx) {
    nlohmann::json doc;
    doc["tiles"] = nlohmann::json::array();
    for (const auto& t : idx.tiles) {
        doc["tiles"].push_back({{"tile_id", t.tile_id},
                                {"class", t.class_tag},
                                {"bounds", {t.bounds.x0, t.bounds.y0, t.bounds.x1,
                                            t.bounds.y1}},
                                {"pixel_size", t.pixel_size},
                                {"width", t.width},
                                {"height", t.height},
                                {"path", t.path}});
    }
    doc["diagnostics"] = nlohmann::json::array();
    for (const auto& d : idx.diagnostics)
        doc["diagnostics"].push_back({{"code", d.code}, {"message", d.message}});
    return doc.dump(2) + "\n";
}

TemplateWindow query_by_geometry(const TileIndex& idx, const geom::Polygon& geometry,
                                 const std::string& class_tag, uint64_t seed) {
    const geom::Box want = geometry.bounding_box();
    std::vector<const TileMeta*> candidates;
    for (const auto& t : idx.tiles) {
        if (t.class_tag != class_tag) continue;
        if (t.bounds.x0 <= want.x0 && t.bounds.y0 <= want.y0 &&
            t.bounds.x1 >= want.x1 && t.bounds.y1 >= want.y1)
            candidates.push_back(&t);
    }
    if (candidates.empty())
        throw NoTemplateError("no template tile of class '" + class_tag +
                              "' covers the requested geometry");

    Rng rng(Rng::derive_seed(seed, fnv1a(class_tag)));
    const TileMeta& tile = *candidates[rng.bounded(candidates.size())];

    TemplateWindow win;
    win.tile = tile;
    win.x0 = std::clamp(
        static_cast<int>(std::floor((want.x0 - tile.bounds.x0) / tile.pixel_size)), 0,
        tile.width - 1);
    win.y0 = std::clamp(
        static_cast<int>(std::floor((want.y0 - tile.bounds.y0) / tile.pixel_size)), 0,
        tile.height - 1);
    const int x1 = std::clamp(
        static_cast<int>(std::ceil((want.x1 - tile.bounds.x0) / tile.pixel_size)), win.x0 + 1,
        tile.width);
    const int y1 = std::clamp(
        static_cast<int>(std::ceil((want.y1 - tile.bounds.y0) / tile.pixel_size)), win.y0 + 1,
        tile.height);

    auto img = idx.load(tile);
    win.pixels = RasterImage(x1 - win.x0, y1 - win.y0, 0, tile.pixel_size);
    for (int y = win.y0; y < y1; ++y)
        for (int x = win.x0; x < x1; ++x)
            win.pixels.at(x - win.x0, y - win.y0) = img->at(x, y);
    return win;
}

namespace {

void write_fixture_tile(const std::filesystem::path& root, const std::string& tile_id,
                        const std::string& class_tag, double frame_size,
                        double pixel_size, const RasterImage& img) {
    const auto png_name = tile_id + ".png";
    write_png((root / png_name).string(), img);
    nlohmann::json doc = {{"tile_id", tile_id},
                          {"class", class_tag},
                          {"bounds", {0.0, 0.0, frame_size, frame_size}},
                          {"pixel_size", pixel_size},
                          {"image", png_name}};
    std::ofstream out(root / (tile_id + ".json"), std::ios::binary);
    out << doc.dump(2) << "\n";
}

uint8_t clamp8(double v) {
    return static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

void make_fixtures(const std::filesystem::path& root, uint64_t seed, double frame_size,
                   double pixel_size, int sea_variants) {
    std::filesystem::create_directories(root);
    const int n = static_cast<int>(std::llround(frame_size / pixel_size));
    if (n <= 0) throw std::runtime_error("make_fixtures: empty frame");

    auto textured = [&](uint64_t tile_seed, double base, double amplitude,
                        double frequency) {
        noise::GradientNoise2D field(tile_seed, frequency);
        RasterImage img(n, n, 0, pixel_size);
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                img.at(x, y) = clamp8(base + amplitude * field.at(x + 0.5, y + 0.5));
        return img;
    };

    for (int v = 0; v < sea_variants; ++v) {
        const auto tile_seed = Rng::derive_seed(seed, 0x5EA0 + static_cast<uint64_t>(v));
        char name[32];
        std::snprintf(name, sizeof(name), "sea-%03d", v);
        write_fixture_tile(root, name, "sea", frame_size, pixel_size,
                           textured(tile_seed, 40 + 4 * v, 16, 1.0 / 48));
    }
    write_fixture_tile(root, "land-000", "land", frame_size, pixel_size,
                       textured(Rng::derive_seed(seed, 0x1A4D), 118, 26, 1.0 / 24));

    // coast-mix: sea-like on the east edge blending to land-like on the west
    {
        noise::GradientNoise2D field(Rng::derive_seed(seed, 0xC0A57), 1.0 / 32);
        RasterImage img(n, n, 0, pixel_size);
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                const double t = static_cast<double>(x) / (n - 1);  // 0 = west/land
                const double base = 110 * (1 - t) + 45 * t;
                img.at(x, y) = clamp8(base + 20 * field.at(x + 0.5, y + 0.5));
            }
        }
        write_fixture_tile(root, "coast-000", "coast-mix", frame_size, pixel_size, img);
    }

    TileIndex idx = build_index(root);
    std::ofstream out(root / "index.json", std::ios::binary);
    out << index_to_json(idx);
}

}  // namespace synteo::store
