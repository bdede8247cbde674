#include "synteo/noise.hpp"

#include <cmath>
#include <map>

namespace synteo::noise {

namespace {

uint64_t hash_mix(uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

uint64_t lattice_hash(uint64_t seed, int64_t ix, int64_t iy) {
    uint64_t h = seed;
    h = hash_mix(h ^ static_cast<uint64_t>(ix) * 0x9E3779B97F4A7C15ULL);
    h = hash_mix(h ^ static_cast<uint64_t>(iy) * 0xC2B2AE3D27D4EB4FULL);
    return h;
}

double fade(double t) { return t * t * t * (t * (t * 6 - 15) + 10); }

double lerp(double a, double b, double t) { return a + (b - a) * t; }

}  // namespace

geom::Vec2 GradientNoise2D::gradient(int64_t ix, int64_t iy) const {
    uint64_t h = lattice_hash(seed_, ix, iy);
    double angle = static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 * M_PI;
    return {std::cos(angle), std::sin(angle)};
}

double GradientNoise2D::at(double x, double y) const {
    x *= frequency_;
    y *= frequency_;
    int64_t ix = static_cast<int64_t>(std::floor(x));
    int64_t iy = static_cast<int64_t>(std::floor(y));
    double fx = x - static_cast<double>(ix);
    double fy = y - static_cast<double>(iy);
    auto corner = [&](int64_t dx, int64_t dy) {
        geom::Vec2 g = gradient(ix + dx, iy + dy);
        return g.x * (fx - static_cast<double>(dx)) + g.y * (fy - static_cast<double>(dy));
    };
    double u = fade(fx);
    double v = fade(fy);
    double value = lerp(lerp(corner(0, 0), corner(1, 0), u),
                        lerp(corner(0, 1), corner(1, 1), u), v);
    // unit gradients give a theoretical range of +-sqrt(2)/2
    return std::clamp(value * std::sqrt(2.0), -1.0, 1.0);
}

double GradientNoise1D::at(double t) const {
    t *= frequency_;
    int64_t i = static_cast<int64_t>(std::floor(t));
    double f = t - static_cast<double>(i);
    auto slope = [&](int64_t k) {
        uint64_t h = lattice_hash(seed_, k, 0);
        return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    };
    double a = slope(i) * f;
    double b = slope(i + 1) * (f - 1.0);
    return std::clamp(lerp(a, b, fade(f)) * 2.0, -1.0, 1.0);
}

std::vector<geom::Polygon> threshold_contours(const std::vector<double>& samples,
                                              int n, double threshold) {
    auto inside = [&](int i, int j) {
        if (i < 0 || j < 0 || i >= n || j >= n) return false;
        return samples[static_cast<size_t>(j) * static_cast<size_t>(n) +
                       static_cast<size_t>(i)] >= threshold;
    };

    // Directed boundary edges between lattice corners, region kept on the left.
    struct Pt {
        int x, y;
        bool operator<(const Pt& o) const { return x != o.x ? x < o.x : y < o.y; }
        bool operator==(const Pt& o) const { return x == o.x && y == o.y; }
    };
    std::multimap<Pt, Pt> edges;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!inside(i, j)) continue;
            if (!inside(i, j - 1)) edges.insert({{i, j}, {i + 1, j}});
            if (!inside(i + 1, j)) edges.insert({{i + 1, j}, {i + 1, j + 1}});
            if (!inside(i, j + 1)) edges.insert({{i + 1, j + 1}, {i, j + 1}});
            if (!inside(i - 1, j)) edges.insert({{i, j + 1}, {i, j}});
        }
    }

    std::vector<geom::Polygon> polygons;
    while (!edges.empty()) {
        auto first = edges.begin();
        Pt start = first->first;
        Pt cur = first->second;
        std::vector<Pt> ring{start};
        edges.erase(first);
        while (!(cur == start)) {
            ring.push_back(cur);
            auto it = edges.find(cur);
            if (it == edges.end()) break;  // defensive; loops always close
            cur = it->second;
            edges.erase(it);
        }
        // drop collinear run midpoints
        geom::Polygon poly;
        const size_t m = ring.size();
        for (size_t k = 0; k < m; ++k) {
            const Pt& prev = ring[(k + m - 1) % m];
            const Pt& here = ring[k];
            const Pt& next = ring[(k + 1) % m];
            bool collinear = (prev.x == here.x && here.x == next.x) ||
                             (prev.y == here.y && here.y == next.y);
            if (!collinear)
                poly.vertices.push_back({static_cast<double>(here.x),
                                         static_cast<double>(here.y)});
        }
        if (poly.vertices.size() >= 3) polygons.push_back(std::move(poly));
    }
    return polygons;
}

}  // namespace synteo::noise
