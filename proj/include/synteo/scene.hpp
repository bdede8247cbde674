#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "synteo/geometry.hpp"
#include "synteo/ontology.hpp"
#include "synteo/rng.hpp"

namespace synteo::scene {

struct SceneExtentConfig {
    double scene_size = 20480;       // meters per side
    double sensor_resolution = 10;   // meters per pixel
    int image_size = 2048;           // pixels per side

    static SceneExtentConfig create(double scene_size, double sensor_resolution);
};

enum class DeformationFamily { Identity, Rotation, Shear, SineWarp, Projective };

std::string_view to_string(DeformationFamily f);
DeformationFamily deformation_family_from_key(std::string_view key);

struct Deformation {
    DeformationFamily family = DeformationFamily::Identity;
    double p0 = 0;
    double p1 = 0;

    geom::Vec2 apply(geom::Vec2 p) const;  // raw transform, before renormalization
};

struct GridLayout {
    int nx = 0;
    int ny = 0;
    std::vector<geom::Vec2> points;  // unit-square coordinates
    Deformation deformation;
};

struct BoundaryPolygon {
    geom::Polygon polygon;  // unit-square coordinates
    double min_vertex_distance = 0;
};

struct GenerationError : std::runtime_error {
    int attempts;
    GenerationError(const std::string& msg, int attempts_)
        : std::runtime_error(msg), attempts(attempts_) {}
};

// Non-fatal: the caller should retry with fresh draws or a fresh seed.
struct ResampleSignal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

GridLayout generate_grid_layout(int lower_x, int upper_x, int lower_y, int upper_y,
                                Rng& rng);

Deformation sample_deformation(DeformationFamily family, Rng& rng);

// Applies the parametric transform to every point, then renormalizes
// isotropically (uniform scale + translation) back into the unit square.
GridLayout apply_deformation(const GridLayout& grid, const Deformation& deformation);

BoundaryPolygon generate_boundary_polygon(int n_vertices, double min_vertex_distance,
                                          Rng& rng);

// Points strictly inside the polygon, input order preserved.
std::vector<geom::Vec2> clip_layout(const GridLayout& grid, const geom::Polygon& boundary);

enum class Role { Target, NoneTarget };

struct SceneElement {
    std::string entity;
    Role role = Role::NoneTarget;
    std::vector<geom::Polygon> shapes;   // scene coordinates, meters
    std::vector<geom::Vec2> points;      // turbine / rig locations, meters
    onto::SceneElementSpecification spec;
    // texture spec of the per-point entity (WindTurbine, Rig), when any
    std::optional<onto::SceneElementSpecification> point_spec;

    bool contains(geom::Vec2 p) const;  // even-odd parity across shapes
};

struct SceneComposition {
    SceneExtentConfig extent;
    std::vector<SceneElement> elements;
    uint64_t seed = 0;
    std::string composition_class;
    onto::SceneElementSpecification scene_spec;  // resolved Scene keys

    const SceneElement* find_element(std::string_view entity) const;
};

struct GenerationRequest {
    std::string composition_class;  // owf-small|owf-medium|owf-large|none-target-rigs|none-target-land
    bool coast_enabled = false;
    bool template_sea = false;
    bool tidal_turbines = false;
    SceneExtentConfig extent;
};

// Partition input when real coastline vectors are supplied instead of the
// procedural stand-in: (entity name, polygon in scene-local meters).
using PartitionTemplate = std::vector<std::pair<std::string, geom::Polygon>>;

std::vector<SceneElement> generate_partition(const onto::Ontology& o,
                                             const GenerationRequest& request,
                                             bool with_land, const onto::Context& context,
                                             Rng& rng,
                                             const PartitionTemplate* templates = nullptr);

SceneElement generate_windfarm(const onto::Ontology& o,
                               const SceneComposition& composition_so_far,
                               const onto::Context& context, Rng& rng);

SceneElement generate_rig_field(const onto::Ontology& o,
                                const SceneComposition& composition_so_far,
                                const onto::Context& context, Rng& rng);

struct TopologyViolation {
    std::string subject;
    onto::TopologyPredicate predicate;
    std::string object;
    std::string detail;
};

std::vector<TopologyViolation> check_topology(const onto::Ontology& o,
                                              const SceneComposition& c);

// End-to-end: partition, then the class-specific target or none-target.
SceneComposition compose_scene(const onto::Ontology& o, const GenerationRequest& request,
                               uint64_t seed, const PartitionTemplate* templates = nullptr);

// GeoJSON FeatureCollection dump of a composition, for debugging.
std::string composition_to_geojson(const SceneComposition& c);

}  // namespace synteo::scene
