#include "synteo/texture.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace synteo::tex {

namespace {

constexpr double kSqrt1_2 = 0.7071067811865476;

// Even-odd scanline fill over pixel centers: visit(px, py) for every pixel
// whose center lies strictly inside the polygon.
void scan_polygon(const geom::Polygon& poly, double res, int width, int height,
                  const std::function<void(int, int)>& visit) {
    const geom::Box bb = poly.bounding_box();
    const int y_lo = std::max(0, static_cast<int>(std::floor(bb.y0 / res - 0.5)));
    const int y_hi = std::min(height - 1, static_cast<int>(std::ceil(bb.y1 / res)));
    const size_t n = poly.vertices.size();
    std::vector<double> crossings;
    for (int py = y_lo; py <= y_hi; ++py) {
        const double y = (py + 0.5) * res;
        crossings.clear();
        for (size_t i = 0; i < n; ++i) {
            const geom::Vec2 a = poly.vertices[i];
            const geom::Vec2 b = poly.vertices[(i + 1) % n];
            if ((a.y > y) == (b.y > y)) continue;
            crossings.push_back(a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x));
        }
        std::sort(crossings.begin(), crossings.end());
        for (size_t k = 0; k + 1 < crossings.size(); k += 2) {
            // centers with crossings[k] < (px + 0.5) * res < crossings[k + 1]
            int x_lo = static_cast<int>(std::floor(crossings[k] / res - 0.5)) + 1;
            int x_hi = static_cast<int>(std::ceil(crossings[k + 1] / res - 0.5)) - 1;
            x_lo = std::max(x_lo, 0);
            x_hi = std::min(x_hi, width - 1);
            for (int px = x_lo; px <= x_hi; ++px) visit(px, py);
        }
    }
}

uint8_t template_pixel(const store::TemplateWindow& win, double gx, double gy) {
    int tx = static_cast<int>(std::floor((gx - win.tile.bounds.x0) /
                                         win.tile.pixel_size)) - win.x0;
    int ty = static_cast<int>(std::floor((gy - win.tile.bounds.y0) /
                                         win.tile.pixel_size)) - win.y0;
    tx = std::clamp(tx, 0, win.pixels.width - 1);
    ty = std::clamp(ty, 0, win.pixels.height - 1);
    return win.pixels.at(tx, ty);
}

}  // namespace

KernelKind kernel_kind_from_key(std::string_view key) {
    if (key == "gaussian" || key.empty()) return KernelKind::Gaussian;
    if (key == "x-pattern") return KernelKind::XPattern;
    if (key == "tidal-damped") return KernelKind::TidalDamped;
    throw TextureError("unknown kernel kind '" + std::string(key) + "'");
}

KernelSpec kernel_from_spec(const onto::SceneElementSpecification& spec) {
    KernelSpec k;
    if (const auto* v = spec.find("kernel-kind")) k.kind = kernel_kind_from_key(v->key);
    if (const auto* v = spec.find("kernel-radius"))
        k.radius = static_cast<int>(std::llround(v->value));
    if (const auto* v = spec.find("amplitude")) k.amplitude = v->value;
    if (const auto* v = spec.find("sigma-frac")) k.sigma_frac = v->value;
    if (const auto* v = spec.find("damping")) k.damping = v->value;
    if (k.radius <= 0) throw TextureError("kernel radius must be positive");
    return k;
}

double kernel_value(const KernelSpec& spec, double dx, double dy) {
    const double d2 = dx * dx + dy * dy;
    const double r = spec.radius;
    if (d2 > r * r) return 0;

    const double sigma_long = spec.sigma_frac * r;
    auto gaussian = [&](double sigma) { return std::exp(-d2 / (2 * sigma * sigma)); };
    // two orthogonal anisotropic lobes along the pixel diagonals
    auto arms = [&] {
        const double u = (dx + dy) * kSqrt1_2;
        const double v = (dx - dy) * kSqrt1_2;
        const double sl2 = 2 * sigma_long * sigma_long;
        const double sigma_short = 0.35 * sigma_long;
        const double ss2 = 2 * sigma_short * sigma_short;
        return 0.5 * (std::exp(-(u * u / sl2 + v * v / ss2)) +
                      std::exp(-(v * v / sl2 + u * u / ss2)));
    };

    double shape = 0;
    switch (spec.kind) {
        case KernelKind::Gaussian:
            shape = gaussian(sigma_long);
            break;
        case KernelKind::XPattern:
            shape = arms();
            break;
        case KernelKind::TidalDamped:
            // bright core at full height, arms attenuated by the damping factor
            shape = std::max(gaussian(0.5 * sigma_long), spec.damping * arms());
            break;
    }
    return spec.amplitude * shape;
}

RasterImage fill_partition(const scene::SceneComposition& c,
                           const store::TileIndex* templates) {
    const double res = c.extent.sensor_resolution;
    const int size = c.extent.image_size;
    RasterImage img(size, size, 0, res);

    auto fill_source = [&](const scene::SceneElement& e, bool whole_image) {
        const auto* texture = e.spec.find("texture");
        if (!texture)
            throw TextureError(e.entity + ": specification has no texture");
        if (texture->key.empty()) {
            const auto value = static_cast<uint8_t>(
                std::clamp(std::lround(texture->value), 0L, 255L));
            if (whole_image) {
                std::fill(img.pixels.begin(), img.pixels.end(), value);
            } else {
                for (const auto& shape : e.shapes)
                    scan_polygon(shape, res, size, size,
                                 [&](int px, int py) { img.at(px, py) = value; });
            }
            return;
        }
        if (!templates)
            throw TextureError(e.entity + ": template texture '" + texture->key +
                               "' requested but no template store is configured");
        const geom::Polygon query_shape =
            whole_image ? geom::Polygon::from_box(
                              {0, 0, c.extent.scene_size, c.extent.scene_size})
                        : e.shapes.front();
        geom::Box bb = query_shape.bounding_box();
        for (const auto& shape : e.shapes) {
            const geom::Box sb = shape.bounding_box();
            bb = {std::min(bb.x0, sb.x0), std::min(bb.y0, sb.y0),
                  std::max(bb.x1, sb.x1), std::max(bb.y1, sb.y1)};
        }
        const auto win = store::query_by_geometry(*templates,
                                                  geom::Polygon::from_box(bb),
                                                  texture->key, c.seed);
        auto copy_px = [&](int px, int py) {
            img.at(px, py) = template_pixel(win, (px + 0.5) * res, (py + 0.5) * res);
        };
        if (whole_image) {
            for (int py = 0; py < size; ++py)
                for (int px = 0; px < size; ++px) copy_px(px, py);
        } else {
            for (const auto& shape : e.shapes)
                scan_polygon(shape, res, size, size, copy_px);
        }
    };

    // sea under everything, then coast, then land on top
    const scene::SceneElement* sea = c.find_element("Sea");
    if (!sea) throw TextureError("composition has no Sea element");
    fill_source(*sea, true);
    for (const char* name : {"Coast", "Land"})
        if (const auto* e = c.find_element(name)) fill_source(*e, false);
    return img;
}

void render_point_kernel(RasterImage& img, const RasterImage& base, int cx, int cy,
                         const KernelSpec& spec) {
    if (!img.in_bounds(cx, cy))
        throw TextureError("kernel center outside the image");

    // local base level from a (4r)^2 window, in-bounds portion only
    const int half = 2 * spec.radius;
    long sum = 0;
    long count = 0;
    for (int y = std::max(0, cy - half); y <= std::min(base.height - 1, cy + half); ++y)
        for (int x = std::max(0, cx - half); x <= std::min(base.width - 1, cx + half); ++x) {
            sum += base.at(x, y);
            ++count;
        }
    const double local_mean = count ? static_cast<double>(sum) / count : 0;

    KernelSpec capped = spec;
    capped.amplitude = std::min(spec.amplitude, 255.0 - local_mean);
    if (capped.amplitude <= 0) return;

    for (int dy = -spec.radius; dy <= spec.radius; ++dy) {
        for (int dx = -spec.radius; dx <= spec.radius; ++dx) {
            const int x = cx + dx;
            const int y = cy + dy;
            if (!img.in_bounds(x, y)) continue;
            const long add = std::lround(kernel_value(capped, dx, dy));
            if (add == 0) continue;
            img.at(x, y) = static_cast<uint8_t>(std::min(255L, img.at(x, y) + add));
        }
    }
}

RasterImage render_scene(const scene::SceneComposition& c,
                         const store::TileIndex* templates) {
    const RasterImage base = fill_partition(c, templates);
    RasterImage out = base;
    const double res = c.extent.sensor_resolution;
    for (const auto& e : c.elements) {
        if (e.points.empty()) continue;
        if (!e.point_spec)
            throw TextureError(e.entity + ": points without a point specification");
        const KernelSpec kernel = kernel_from_spec(*e.point_spec);
        for (const auto& p : e.points)
            render_point_kernel(out, base,
                                static_cast<int>(std::floor(p.x / res)),
                                static_cast<int>(std::floor(p.y / res)), kernel);
    }
    return out;
}

}  // namespace synteo::tex
