#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace synteo {

// Single-band 8-bit raster.
struct RasterImage {
    int width = 0;
    int height = 0;
    double pixel_size = 1.0;  // meters per pixel
    std::vector<uint8_t> pixels;  // row-major, top row first

    RasterImage() = default;
    RasterImage(int w, int h, uint8_t fill = 0, double px_size = 1.0)
        : width(w), height(h), pixel_size(px_size),
          pixels(static_cast<size_t>(w) * static_cast<size_t>(h), fill) {}

    uint8_t& at(int x, int y) {
        return pixels[static_cast<size_t>(y) * static_cast<size_t>(width) +
                      static_cast<size_t>(x)];
    }
    uint8_t at(int x, int y) const {
        return pixels[static_cast<size_t>(y) * static_cast<size_t>(width) +
                      static_cast<size_t>(x)];
    }
    bool in_bounds(int x, int y) const {
        return x >= 0 && y >= 0 && x < width && y < height;
    }

    bool operator==(const RasterImage&) const = default;
};

// 8-bit grayscale PNG, fixed encoder settings so identical pixels produce
// identical files.
void write_png(const std::string& path, const RasterImage& img);
RasterImage read_png(const std::string& path);

}  // namespace synteo
