#include "synteo/geometry.hpp"

#include <algorithm>
#include <limits>

namespace synteo::geom {

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
    double v = cross(b - a, c - a);
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

bool on_segment(Vec2 p, Vec2 a, Vec2 b) {
    if (orientation(a, b, p) != 0) return false;
    return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
           p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

bool segments_cross_properly(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    int o1 = orientation(a, b, c);
    int o2 = orientation(a, b, d);
    int o3 = orientation(c, d, a);
    int o4 = orientation(c, d, b);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

// Exact union area of axis-aligned boxes by coordinate compression.
double boxes_union_area(const std::vector<Box>& boxes) {
    if (boxes.empty()) return 0;
    std::vector<double> xs, ys;
    for (const Box& b : boxes) {
        xs.push_back(b.x0);
        xs.push_back(b.x1);
        ys.push_back(b.y0);
        ys.push_back(b.y1);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    double total = 0;
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        for (size_t j = 0; j + 1 < ys.size(); ++j) {
            double cx = (xs[i] + xs[i + 1]) / 2;
            double cy = (ys[j] + ys[j + 1]) / 2;
            for (const Box& b : boxes) {
                if (cx > b.x0 && cx < b.x1 && cy > b.y0 && cy < b.y1) {
                    total += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
                    break;
                }
            }
        }
    }
    return total;
}

}  // namespace

std::optional<Box> intersect(const Box& a, const Box& b) {
    Box r{std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1),
          std::min(a.y1, b.y1)};
    if (!r.valid()) return std::nullopt;
    return r;
}

double iou(const Box& a, const Box& b) {
    auto inter = intersect(a, b);
    if (!inter) return 0;
    double i = inter->area();
    double u = a.area() + b.area() - i;
    return u > 0 ? i / u : 0;
}

double Polygon::area() const {
    double acc = 0;
    const size_t n = vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = vertices[i];
        const Vec2& q = vertices[(i + 1) % n];
        acc += cross(p, q);
    }
    return std::abs(acc) / 2;
}

Box Polygon::bounding_box() const {
    Box b{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
          std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (const Vec2& v : vertices) {
        b.x0 = std::min(b.x0, v.x);
        b.y0 = std::min(b.y0, v.y);
        b.x1 = std::max(b.x1, v.x);
        b.y1 = std::max(b.y1, v.y);
    }
    return b;
}

bool Polygon::contains(Vec2 p) const {
    const size_t n = vertices.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i)
        if (on_segment(p, vertices[i], vertices[(i + 1) % n])) return false;
    bool inside = false;
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = vertices[i];
        const Vec2& b = vertices[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

bool Polygon::is_simple() const {
    const size_t n = vertices.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            // skip adjacent edges (they share an endpoint)
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j],
                                   vertices[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

Polygon Polygon::from_box(const Box& b) {
    return Polygon{{{b.x0, b.y0}, {b.x1, b.y0}, {b.x1, b.y1}, {b.x0, b.y1}}};
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    int o1 = orientation(a, b, c);
    int o2 = orientation(a, b, d);
    int o3 = orientation(c, d, a);
    int o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    return on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) ||
           on_segment(b, c, d);
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = dot(ab, ab);
    if (len2 == 0) return distance(p, a);
    double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + ab * t);
}

double polygon_distance(const Polygon& a, const Polygon& b) {
    if (polygons_overlap(a, b)) return 0;
    double best = std::numeric_limits<double>::max();
    const size_t na = a.vertices.size();
    const size_t nb = b.vertices.size();
    for (size_t i = 0; i < na; ++i)
        for (size_t j = 0; j < nb; ++j) {
            best = std::min(best, point_segment_distance(a.vertices[i], b.vertices[j],
                                                         b.vertices[(j + 1) % nb]));
            best = std::min(best, point_segment_distance(b.vertices[j], a.vertices[i],
                                                         a.vertices[(i + 1) % na]));
        }
    return best;
}

bool polygons_overlap(const Polygon& a, const Polygon& b) {
    for (const Vec2& v : a.vertices)
        if (b.contains(v)) return true;
    for (const Vec2& v : b.vertices)
        if (a.contains(v)) return true;
    const size_t na = a.vertices.size();
    const size_t nb = b.vertices.size();
    for (size_t i = 0; i < na; ++i)
        for (size_t j = 0; j < nb; ++j)
            if (segments_cross_properly(a.vertices[i], a.vertices[(i + 1) % na],
                                        b.vertices[j], b.vertices[(j + 1) % nb]))
                return true;
    return false;
}

void GeometrySet::add(Polygon p, bool axis_aligned_box) {
    if (axis_aligned_box && boxes_only_) {
        boxes_.push_back(p.bounding_box());
    } else if (!axis_aligned_box) {
        boxes_only_ = false;
        boxes_.clear();
    }
    members_.push_back(std::move(p));
}

void GeometrySet::merge(const GeometrySet& other) {
    for (size_t i = 0; i < other.members_.size(); ++i)
        add(other.members_[i], other.boxes_only_);
}

Box GeometrySet::bounding_box() const {
    Box b{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
          std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (const Polygon& p : members_) {
        Box pb = p.bounding_box();
        b.x0 = std::min(b.x0, pb.x0);
        b.y0 = std::min(b.y0, pb.y0);
        b.x1 = std::max(b.x1, pb.x1);
        b.y1 = std::max(b.y1, pb.y1);
    }
    return b;
}

bool GeometrySet::contains(Vec2 p) const {
    for (const Polygon& m : members_)
        if (m.contains(p)) return true;
    return false;
}

double GeometrySet::union_area(double raster_resolution) const {
    if (empty()) return 0;
    if (boxes_only_) return boxes_union_area(boxes_);
    // Raster fallback: sample cell centers over the joint bounding box. The
    // grid is capped at 1024 cells per axis; resolution degrades gracefully
    // for very large extents.
    Box bb = bounding_box();
    double res = std::max({raster_resolution, bb.width() / 1024.0, bb.height() / 1024.0});
    int nx = std::max(1, static_cast<int>(std::ceil(bb.width() / res)));
    int ny = std::max(1, static_cast<int>(std::ceil(bb.height() / res)));
    long covered = 0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (contains({bb.x0 + (i + 0.5) * res, bb.y0 + (j + 0.5) * res})) ++covered;
    return static_cast<double>(covered) * res * res;
}

double GeometrySet::iou(const GeometrySet& a, const GeometrySet& b,
                        double raster_resolution) {
    if (a.empty() || b.empty()) return 0;
    if (a.boxes_only_ && b.boxes_only_) {
        std::vector<Box> all = a.boxes_;
        all.insert(all.end(), b.boxes_.begin(), b.boxes_.end());
        double area_a = boxes_union_area(a.boxes_);
        double area_b = boxes_union_area(b.boxes_);
        double area_union = boxes_union_area(all);
        double area_inter = area_a + area_b - area_union;
        return area_union > 0 ? std::max(0.0, area_inter) / area_union : 0;
    }
    Box ba = a.bounding_box();
    Box bb = b.bounding_box();
    Box joint{std::min(ba.x0, bb.x0), std::min(ba.y0, bb.y0), std::max(ba.x1, bb.x1),
              std::max(ba.y1, bb.y1)};
    double res = std::max({raster_resolution, joint.width() / 1024.0,
                           joint.height() / 1024.0});
    int nx = std::max(1, static_cast<int>(std::ceil(joint.width() / res)));
    int ny = std::max(1, static_cast<int>(std::ceil(joint.height() / res)));
    long inter = 0, uni = 0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            Vec2 p{joint.x0 + (i + 0.5) * res, joint.y0 + (j + 0.5) * res};
            bool ia = a.contains(p);
            bool ib = b.contains(p);
            if (ia && ib) ++inter;
            if (ia || ib) ++uni;
        }
    return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0;
}

}  // namespace synteo::geom
