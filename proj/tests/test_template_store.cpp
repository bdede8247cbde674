#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "synteo/template_store.hpp"

using namespace synteo;
namespace fs = std::filesystem;

namespace {

fs::path fresh_root(const char* name) {
    const fs::path root = fs::temp_directory_path() / name;
    fs::remove_all(root);
    return root;
}

}  // namespace

TEST_CASE("fixtures index cleanly with expected tiles") {
    const auto root = fresh_root("synteo_store_fixtures");
    store::make_fixtures(root, 42, 512, 2, 3);
    const auto idx = store::build_index(root);
    CHECK(idx.diagnostics.empty());
    REQUIRE(idx.tiles.size() == 5);

    std::set<std::string> ids, tags;
    for (const auto& t : idx.tiles) {
        ids.insert(t.tile_id);
        tags.insert(t.class_tag);
        CHECK(t.width == 256);
        CHECK(t.height == 256);
        CHECK(t.pixel_size == 2.0);
        CHECK(t.bounds.x0 == 0);
        CHECK(t.bounds.x1 == 512);
    }
    CHECK(ids == std::set<std::string>{"sea-000", "sea-001", "sea-002", "land-000",
                                       "coast-000"});
    CHECK(tags == std::set<std::string>{"sea", "land", "coast-mix"});
    // tiles come back sorted by id
    CHECK(std::is_sorted(idx.tiles.begin(), idx.tiles.end(),
                         [](const auto& a, const auto& b) { return a.tile_id < b.tile_id; }));
    CHECK(fs::exists(root / "index.json"));
    fs::remove_all(root);
}

TEST_CASE("missing root and corrupt sidecars become diagnostics") {
    const auto missing = store::build_index("/nonexistent/synteo/store");
    CHECK(missing.empty());
    REQUIRE(missing.diagnostics.size() == 1);
    CHECK(missing.diagnostics[0].code == "MISSING_ROOT");

    const auto root = fresh_root("synteo_store_bad");
    store::make_fixtures(root, 1, 128, 1, 1);
    {
        std::ofstream bad(root / "broken.json");
        bad << "{ not json";
    }
    {
        // sidecar whose bounds disagree with the image dimensions
        std::ofstream bad(root / "liar.json");
        bad << R"({"tile_id":"liar","class":"sea","bounds":[0,0,999,999],)"
            << R"("pixel_size":1,"image":"sea-000.png"})";
    }
    {
        // sidecar pointing at a missing image
        std::ofstream bad(root / "ghost.json");
        bad << R"({"tile_id":"ghost","class":"sea","bounds":[0,0,128,128],)"
            << R"("pixel_size":1,"image":"ghost.png"})";
    }
    const auto idx = store::build_index(root);
    CHECK(idx.tiles.size() == 3);  // the valid fixtures survive
    CHECK(idx.diagnostics.size() == 3);
    for (const auto& d : idx.diagnostics) CHECK(d.code == "BAD_TILE");
    fs::remove_all(root);
}

TEST_CASE("query is deterministic per seed and covers the geometry") {
    const auto root = fresh_root("synteo_store_query");
    store::make_fixtures(root, 7, 256, 1, 3);
    const auto idx = store::build_index(root);

    const auto shape = geom::Polygon::from_box({30.3, 40.7, 100.9, 90.2});
    const auto a = store::query_by_geometry(idx, shape, "sea", 55);
    const auto b = store::query_by_geometry(idx, shape, "sea", 55);
    CHECK(a.tile.tile_id == b.tile.tile_id);
    CHECK(a.pixels == b.pixels);
    CHECK(a.x0 == b.x0);
    CHECK(a.y0 == b.y0);

    // window spans the bounding box in tile pixels
    CHECK(a.x0 <= 30);
    CHECK(a.y0 <= 40);
    CHECK(a.x0 + a.pixels.width >= 101);
    CHECK(a.y0 + a.pixels.height >= 91);

    // window pixels are a verbatim crop of the tile
    const auto tile = read_png(a.tile.path);
    for (int y = 0; y < a.pixels.height; y += 5)
        for (int x = 0; x < a.pixels.width; x += 5)
            CHECK(a.pixels.at(x, y) == tile.at(a.x0 + x, a.y0 + y));

    // different seeds eventually pick different variants
    std::set<std::string> seen;
    for (uint64_t s = 0; s < 32; ++s)
        seen.insert(store::query_by_geometry(idx, shape, "sea", s).tile.tile_id);
    CHECK(seen.size() > 1);
    fs::remove_all(root);
}

TEST_CASE("query failures raise NoTemplateError") {
    const auto root = fresh_root("synteo_store_none");
    store::make_fixtures(root, 3, 128, 1, 1);
    const auto idx = store::build_index(root);

    // unknown class
    CHECK_THROWS_AS(store::query_by_geometry(
                        idx, geom::Polygon::from_box({0, 0, 10, 10}), "lava", 1),
                    store::NoTemplateError);
    // geometry larger than any tile
    CHECK_THROWS_AS(store::query_by_geometry(
                        idx, geom::Polygon::from_box({0, 0, 500, 500}), "sea", 1),
                    store::NoTemplateError);
    fs::remove_all(root);
}

TEST_CASE("tile cache returns the same image object") {
    const auto root = fresh_root("synteo_store_cache");
    store::make_fixtures(root, 5, 128, 1, 1);
    const auto idx = store::build_index(root);
    REQUIRE(!idx.tiles.empty());
    const auto first = idx.load(idx.tiles[0]);
    const auto second = idx.load(idx.tiles[0]);
    CHECK(first.get() == second.get());
    CHECK(first->width == 128);
    fs::remove_all(root);
}

TEST_CASE("index json lists tiles and diagnostics") {
    const auto root = fresh_root("synteo_store_json");
    store::make_fixtures(root, 11, 128, 1, 2);
    const auto idx = store::build_index(root);
    const std::string json = store::index_to_json(idx);
    CHECK(json.find("\"sea-000\"") != std::string::npos);
    CHECK(json.find("\"sea-001\"") != std::string::npos);
    CHECK(json.find("\"coast-mix\"") != std::string::npos);
    CHECK(json.find("\"diagnostics\"") != std::string::npos);
    fs::remove_all(root);
}
