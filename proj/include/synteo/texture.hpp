#pragma once

#include <string>

#include "synteo/raster.hpp"
#include "synteo/scene.hpp"
#include "synteo/template_store.hpp"

namespace synteo::tex {

enum class KernelKind { Gaussian, XPattern, TidalDamped };

KernelKind kernel_kind_from_key(std::string_view key);

struct KernelSpec {
    KernelKind kind = KernelKind::Gaussian;
    int radius = 6;          // px, hard footprint cutoff
    double amplitude = 180;  // brightness above the local base level
    double sigma_frac = 0.28;
    double damping = 1.0;    // arm attenuation for tidal-damped
};

// Built from a WindTurbine / Rig specification; missing characteristics keep
// their defaults (rigs have no kernel-kind and render as gaussians).
KernelSpec kernel_from_spec(const onto::SceneElementSpecification& spec);

// Kernel height at offset (dx, dy) px from the center, in [0, amplitude];
// zero beyond `radius`, so the footprint is a closed disk.
double kernel_value(const KernelSpec& spec, double dx, double dy);

struct TextureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Background image from the scene partition. Constant-texture elements fill
// with their sampled gray value; template-texture elements copy pixels from a
// deterministically chosen store tile (seeded by the composition seed).
// Throws TextureError when a template query cannot be satisfied.
RasterImage fill_partition(const scene::SceneComposition& c,
                           const store::TileIndex* templates);

// Composites the kernel additively with saturation at 0/255. The amplitude
// is capped at 255 minus the local base mean (window of side 4*radius around
// the center, sampled from `base`), so bright backgrounds never plateau.
void render_point_kernel(RasterImage& img, const RasterImage& base, int cx, int cy,
                         const KernelSpec& spec);

// fill_partition + every per-point element composited over it.
RasterImage render_scene(const scene::SceneComposition& c,
                         const store::TileIndex* templates);

}  // namespace synteo::tex
