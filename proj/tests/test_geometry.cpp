#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "synteo/geometry.hpp"
#include "synteo/rng.hpp"

using namespace synteo;
using geom::Box;
using geom::GeometrySet;
using geom::Polygon;
using geom::Vec2;

namespace {

// independent even-odd test: count ray crossings edge by edge
bool oracle_contains(const Polygon& poly, Vec2 p) {
    bool inside = false;
    const size_t n = poly.vertices.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = poly.vertices[i];
        const Vec2 b = poly.vertices[j];
        if ((a.y > p.y) != (b.y > p.y) &&
            p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
            inside = !inside;
    }
    return inside;
}

Polygon random_polygon(Rng& rng, int n) {
    Polygon p;
    for (int i = 0; i < n; ++i)
        p.vertices.push_back({rng.uniform_real(0, 10), rng.uniform_real(0, 10)});
    return p;
}

// brute-force simplicity: test every non-adjacent edge pair
bool oracle_simple(const Polygon& poly) {
    const size_t n = poly.vertices.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const size_t i2 = (i + 1) % n;
            const size_t j2 = (j + 1) % n;
            if (i == j || i2 == j || i == j2) continue;
            if (geom::segments_intersect(poly.vertices[i], poly.vertices[i2],
                                         poly.vertices[j], poly.vertices[j2]))
                return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("box intersection and IoU") {
    const Box a{0, 0, 10, 10};
    const Box b{5, 5, 15, 15};
    const auto inter = geom::intersect(a, b);
    REQUIRE(inter.has_value());
    CHECK(inter->area() == 25.0);
    CHECK(geom::iou(a, b) == doctest::Approx(25.0 / 175.0).epsilon(1e-12));
    CHECK(geom::iou(a, a) == 1.0);
    CHECK(geom::iou(a, Box{20, 20, 30, 30}) == 0.0);
    CHECK(!geom::intersect(a, Box{10, 10, 20, 20}).has_value());  // touching edges
}

TEST_CASE("polygon area via shoelace") {
    Polygon square = Polygon::from_box({0, 0, 4, 3});
    CHECK(square.area() == 12.0);
    Polygon triangle;
    triangle.vertices = {{0, 0}, {4, 0}, {0, 3}};
    CHECK(triangle.area() == 6.0);
    // reversed winding, same absolute area
    std::reverse(triangle.vertices.begin(), triangle.vertices.end());
    CHECK(triangle.area() == 6.0);
}

TEST_CASE("contains matches an independent ray-casting oracle") {
    Rng rng(101);
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        const Polygon poly = random_polygon(rng, 3 + static_cast<int>(rng.bounded(6)));
        for (int q = 0; q < 50; ++q) {
            const Vec2 p{rng.uniform_real(-1, 11), rng.uniform_real(-1, 11)};
            CHECK(poly.contains(p) == oracle_contains(poly, p));
            ++checked;
        }
    }
    CHECK(checked == 10000);
}

TEST_CASE("boundary points are strictly outside") {
    const Polygon square = Polygon::from_box({0, 0, 10, 10});
    CHECK(!square.contains({0, 5}));    // on an edge
    CHECK(!square.contains({0, 0}));    // on a vertex
    CHECK(!square.contains({5, 10}));   // top edge
    CHECK(square.contains({5, 5}));
    CHECK(!square.contains({-1, 5}));
}

TEST_CASE("is_simple matches brute-force segment-pair checking") {
    Rng rng(202);
    int simple = 0, tangled = 0;
    for (int t = 0; t < 400; ++t) {
        const Polygon poly = random_polygon(rng, 4 + static_cast<int>(rng.bounded(4)));
        const bool expect = oracle_simple(poly);
        CHECK(poly.is_simple() == expect);
        expect ? ++simple : ++tangled;
    }
    CHECK(simple > 20);   // both outcomes exercised
    CHECK(tangled > 20);
}

TEST_CASE("segments_intersect handles collinear overlap and touching") {
    CHECK(geom::segments_intersect({0, 0}, {4, 0}, {2, -1}, {2, 1}));
    CHECK(geom::segments_intersect({0, 0}, {4, 0}, {4, 0}, {6, 2}));   // endpoint touch
    CHECK(geom::segments_intersect({0, 0}, {4, 0}, {2, 0}, {6, 0}));   // collinear overlap
    CHECK(!geom::segments_intersect({0, 0}, {4, 0}, {5, 0}, {6, 0}));  // collinear apart
    CHECK(!geom::segments_intersect({0, 0}, {4, 0}, {0, 1}, {4, 1}));
}

TEST_CASE("point_segment_distance") {
    CHECK(geom::point_segment_distance({0, 1}, {-1, 0}, {1, 0}) == 1.0);
    CHECK(geom::point_segment_distance({3, 0}, {-1, 0}, {1, 0}) == 2.0);
    CHECK(geom::point_segment_distance({0, 0}, {-1, 0}, {1, 0}) == 0.0);
}

TEST_CASE("polygon distance and overlap") {
    const Polygon a = Polygon::from_box({0, 0, 2, 2});
    const Polygon b = Polygon::from_box({5, 0, 7, 2});
    const Polygon c = Polygon::from_box({1, 1, 3, 3});
    CHECK(geom::polygon_distance(a, b) == 3.0);
    CHECK(geom::polygon_distance(a, c) == 0.0);
    CHECK(geom::polygons_overlap(a, c));
    CHECK(!geom::polygons_overlap(a, b));
}

TEST_CASE("box-only union area is exact against unit-cell counting") {
    Rng rng(303);
    for (int t = 0; t < 100; ++t) {
        GeometrySet set;
        std::vector<Box> boxes;
        const int count = 1 + static_cast<int>(rng.bounded(6));
        for (int i = 0; i < count; ++i) {
            const double x0 = static_cast<double>(rng.bounded(20));
            const double y0 = static_cast<double>(rng.bounded(20));
            const Box b{x0, y0, x0 + 1 + static_cast<double>(rng.bounded(8)),
                        y0 + 1 + static_cast<double>(rng.bounded(8))};
            boxes.push_back(b);
            set.add_box(b);
        }
        // integer-aligned boxes: count covered unit cells
        int cells = 0;
        for (int x = 0; x < 30; ++x)
            for (int y = 0; y < 30; ++y)
                for (const Box& b : boxes)
                    if (x + 0.5 > b.x0 && x + 0.5 < b.x1 && y + 0.5 > b.y0 &&
                        y + 0.5 < b.y1) {
                        ++cells;
                        break;
                    }
        CHECK(set.union_area() == static_cast<double>(cells));
    }
}

TEST_CASE("box-set IoU is exact") {
    GeometrySet a, b;
    a.add_box({0, 0, 10, 10});
    b.add_box({5, 0, 15, 10});
    CHECK(GeometrySet::iou(a, b) == doctest::Approx(50.0 / 150.0).epsilon(1e-12));

    GeometrySet two;
    two.add_box({0, 0, 10, 10});
    two.add_box({5, 0, 15, 10});  // overlapping members, union 150
    GeometrySet one;
    one.add_box({0, 0, 15, 10});
    CHECK(GeometrySet::iou(two, one) == 1.0);
}

TEST_CASE("general polygons fall back to a close raster estimate") {
    GeometrySet a, b;
    Polygon diamond;
    diamond.vertices = {{50, 0}, {100, 50}, {50, 100}, {0, 50}};
    a.add(diamond, false);
    b.add_box({0, 0, 100, 100});
    CHECK(!a.boxes_only());
    // diamond area is half the square
    CHECK(GeometrySet::iou(a, b) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("geometry set contains means inside any member") {
    GeometrySet set;
    set.add_box({0, 0, 10, 10});
    set.add_box({4, 4, 6, 6});  // nested member: union semantics, still inside
    CHECK(set.contains({1, 1}));
    CHECK(set.contains({5, 5}));
    CHECK(!set.contains({20, 20}));
}

TEST_CASE("bounding box of a set spans all members") {
    GeometrySet set;
    set.add_box({0, 0, 1, 1});
    set.add_box({5, 7, 9, 11});
    const Box bb = set.bounding_box();
    CHECK(bb.x0 == 0);
    CHECK(bb.y0 == 0);
    CHECK(bb.x1 == 9);
    CHECK(bb.y1 == 11);
}
