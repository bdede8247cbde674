#pragma once

#include <cstdint>
#include <vector>

#include "synteo/geometry.hpp"

namespace synteo::noise {

// Seeded 2D gradient (Perlin-style lattice) noise, values in [-1, 1].
class GradientNoise2D {
public:
    GradientNoise2D(uint64_t seed, double frequency)
        : seed_(seed), frequency_(frequency) {}

    double at(double x, double y) const;

private:
    geom::Vec2 gradient(int64_t ix, int64_t iy) const;
    uint64_t seed_;
    double frequency_;
};

// Seeded 1D gradient noise, values in [-1, 1].
class GradientNoise1D {
public:
    GradientNoise1D(uint64_t seed, double frequency)
        : seed_(seed), frequency_(frequency) {}

    double at(double t) const;

private:
    uint64_t seed_;
    double frequency_;
};

// Thresholds `samples` (an n x n grid, row-major) and traces the boundary of
// the >= threshold region into closed polygons in grid units [0, n]^2.
// Outer rings and hole rings are both returned; together they bound the
// region exactly, so even-odd parity over the full list reproduces the mask.
std::vector<geom::Polygon> threshold_contours(const std::vector<double>& samples,
                                              int n, double threshold);

}  // namespace synteo::noise
