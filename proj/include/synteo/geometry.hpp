#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace synteo::geom {

struct Vec2 {
    double x = 0;
    double y = 0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

struct Box {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    bool valid() const { return x1 > x0 && y1 > y0; }
    bool contains(Vec2 p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
    Box expanded(double margin) const {
        return {x0 - margin, y0 - margin, x1 + margin, y1 + margin};
    }
};

std::optional<Box> intersect(const Box& a, const Box& b);
double iou(const Box& a, const Box& b);

// Simple polygon, vertices in order (either winding), not closed explicitly.
struct Polygon {
    std::vector<Vec2> vertices;

    double area() const;  // absolute shoelace area
    Box bounding_box() const;
    // Even-odd rule, strictly inside: boundary points are outside.
    bool contains(Vec2 p) const;
    bool is_simple() const;

    static Polygon from_box(const Box& b);
};

// Proper or endpoint-touching intersection of segments ab and cd.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);
double polygon_distance(const Polygon& a, const Polygon& b);  // 0 if overlapping

// True if the interiors intersect (vertex containment or edge crossing).
bool polygons_overlap(const Polygon& a, const Polygon& b);

// A detection geometry: one or more simple polygons, treated as a union.
// Axis-aligned members are tracked so box-only sets use exact arithmetic;
// general polygons fall back to area sampling on a unit grid.
class GeometrySet {
public:
    void add(Polygon p, bool axis_aligned_box);
    void add_box(const Box& b) { add(Polygon::from_box(b), true); }
    void merge(const GeometrySet& other);

    bool empty() const { return members_.size() == 0; }
    size_t size() const { return members_.size(); }
    const std::vector<Polygon>& members() const { return members_; }
    bool boxes_only() const { return boxes_only_; }

    Box bounding_box() const;
    double union_area(double raster_resolution = 1.0) const;
    // Union semantics: true when the point is inside any member.
    bool contains(Vec2 p) const;

    static double iou(const GeometrySet& a, const GeometrySet& b,
                      double raster_resolution = 1.0);

private:
    std::vector<Polygon> members_;
    std::vector<Box> boxes_;  // populated only while boxes_only_
    bool boxes_only_ = true;
};

}  // namespace synteo::geom
