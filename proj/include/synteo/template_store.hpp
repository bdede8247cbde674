#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "synteo/geometry.hpp"
#include "synteo/ontology.hpp"
#include "synteo/raster.hpp"

namespace synteo::store {

struct TileMeta {
    std::string tile_id;
    geom::Box bounds;       // planar scene-frame meters
    std::string class_tag;  // sea | coast-mix | land
    std::string path;
    int width = 0;
    int height = 0;
    double pixel_size = 0;  // meters per pixel
};

struct NoTemplateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class TileIndex {
public:
    std::vector<TileMeta> tiles;
    std::vector<onto::Diagnostic> diagnostics;  // invalid tiles, not indexed

    bool empty() const { return tiles.empty(); }

    // Shared read-only tile cache; safe for concurrent readers.
    std::shared_ptr<const RasterImage> load(const TileMeta& tile) const;

private:
    struct Cache {
        std::mutex mutex;
        std::map<std::string, std::shared_ptr<const RasterImage>> entries;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

TileIndex build_index(const std::filesystem::path& root);

std::string index_to_json(const TileIndex& idx);

struct TemplateWindow {
    TileMeta tile;
    RasterImage pixels;  // the window contents
    int x0 = 0;          // window origin in tile pixel coordinates
    int y0 = 0;
};

// Deterministic (seeded) choice among tiles of `class_tag` whose bounds
// contain the geometry's bounding box; returns the pixel window covering it.
TemplateWindow query_by_geometry(const TileIndex& idx, const geom::Polygon& geometry,
                                 const std::string& class_tag, uint64_t seed);

// Synthesizes stand-in tiles (noise-textured sea, brighter land, mixed
// coast) so the full pipeline runs without external data.
void make_fixtures(const std::filesystem::path& root, uint64_t seed,
                   double frame_size = 20480, double pixel_size = 10,
                   int sea_variants = 3);

}  // namespace synteo::store
