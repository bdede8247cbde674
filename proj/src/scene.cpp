#include "synteo/scene.hpp"

#include <algorithm>
#include <cmath>

#include "synteo/noise.hpp"
#include "json.hpp"

namespace synteo::scene {

using geom::Polygon;
using geom::Vec2;
using onto::Context;
using onto::Ontology;
using onto::SceneElementSpecification;
using onto::TopologyPredicate;

namespace {

constexpr int kBoundaryRetries = 1000;
constexpr int kClipRetries = 50;
constexpr int kPlacementAttempts = 500;
constexpr int kRigFieldRetries = 20;
constexpr int kRigNoiseGrid = 64;

double spec_value(const SceneElementSpecification& spec, std::string_view name) {
    const onto::SampledValue* v = spec.find(name);
    if (!v)
        throw std::runtime_error("specification of '" + spec.entity +
                                 "' lacks characteristic '" + std::string(name) + "'");
    return v->value;
}

std::string spec_key(const SceneElementSpecification& spec, std::string_view name) {
    const onto::SampledValue* v = spec.find(name);
    if (!v)
        throw std::runtime_error("specification of '" + spec.entity +
                                 "' lacks characteristic '" + std::string(name) + "'");
    return v->key;
}

Polygon scene_rect(double x0, double y0, double x1, double y1) {
    return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

bool element_overlaps_shape(const SceneElement& e, const Polygon& shape) {
    for (const Polygon& s : e.shapes)
        if (geom::polygons_overlap(s, shape)) return true;
    for (const Vec2& p : e.points)
        if (shape.contains(p)) return true;
    return false;
}

// Evaluates one topology predicate between concrete elements.
bool relation_holds(const onto::TopologyRelation& rel, const SceneElement& subject,
                    const SceneElement& object) {
    switch (rel.predicate) {
        case TopologyPredicate::MustNotOverlap: {
            for (const Polygon& s : subject.shapes)
                if (element_overlaps_shape(object, s)) return false;
            for (const Vec2& p : subject.points)
                if (object.contains(p)) return false;
            return true;
        }
        case TopologyPredicate::MustBeInside: {
            for (const Polygon& s : subject.shapes) {
                bool inside_some = false;
                for (const Polygon& o : object.shapes) {
                    bool all_in = true;
                    for (const Vec2& v : s.vertices)
                        if (!o.contains(v)) all_in = false;
                    if (all_in) inside_some = true;
                }
                if (!inside_some) return false;
            }
            for (const Vec2& p : subject.points)
                if (!object.contains(p)) return false;
            return true;
        }
        case TopologyPredicate::MustBeCoincidentWith: {
            for (const Polygon& s : subject.shapes)
                for (const Polygon& o : object.shapes)
                    if (geom::polygons_overlap(s, o)) return true;
            for (const Vec2& p : subject.points)
                if (object.contains(p)) return true;
            return false;
        }
        case TopologyPredicate::MustBeWithinDistance: {
            for (const Polygon& s : subject.shapes)
                for (const Polygon& o : object.shapes)
                    if (geom::polygon_distance(s, o) <= rel.distance) return true;
            return false;
        }
    }
    return true;
}

// Checks every relation whose subject is `candidate.entity` against the
// composition built so far. Used during placement search.
bool placement_valid(const Ontology& o, const SceneComposition& composition,
                     const SceneElement& candidate) {
    const onto::Entity* entity = o.find_entity(candidate.entity);
    if (!entity) return true;
    for (const onto::TopologyRelation& rel : entity->relations) {
        bool any_object = false;
        bool ok_with_all = true;
        bool ok_with_any = false;
        for (const SceneElement& other : composition.elements) {
            if (other.entity != rel.object) continue;
            any_object = true;
            bool holds = relation_holds(rel, candidate, other);
            ok_with_all = ok_with_all && holds;
            ok_with_any = ok_with_any || holds;
        }
        if (!any_object) continue;  // vacuously true
        bool needs_any = rel.predicate == TopologyPredicate::MustBeWithinDistance ||
                         rel.predicate == TopologyPredicate::MustBeInside ||
                         rel.predicate == TopologyPredicate::MustBeCoincidentWith;
        if (needs_any ? !ok_with_any : !ok_with_all) return false;
    }
    return true;
}

SceneElementSpecification make_scene_spec(const Ontology& o, const Context& context) {
    SceneElementSpecification spec;
    spec.entity = "Scene";
    const onto::Entity* scene_entity = o.find_entity("Scene");
    for (const auto& [full_name, key] : context) {
        if (full_name.rfind("Scene.", 0) != 0) continue;
        std::string characteristic = full_name.substr(6);
        onto::SampledValue v;
        v.key = key;
        if (scene_entity) {
            if (const onto::Characteristic* c =
                    scene_entity->find_characteristic(characteristic)) {
                for (const onto::Choice& choice : c->dimension.choices)
                    if (choice.key == key) v.value = choice.value;
            }
        }
        spec.sampled.emplace_back(std::move(characteristic), std::move(v));
    }
    return spec;
}

}  // namespace

SceneExtentConfig SceneExtentConfig::create(double scene_size, double sensor_resolution) {
    if (scene_size <= 0 || sensor_resolution <= 0)
        throw std::runtime_error("scene size and resolution must be positive");
    double ratio = scene_size / sensor_resolution;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw std::runtime_error("scene size must be divisible by sensor resolution");
    SceneExtentConfig cfg;
    cfg.scene_size = scene_size;
    cfg.sensor_resolution = sensor_resolution;
    cfg.image_size = static_cast<int>(std::llround(ratio));
    return cfg;
}

std::string_view to_string(DeformationFamily f) {
    switch (f) {
        case DeformationFamily::Identity: return "identity";
        case DeformationFamily::Rotation: return "rotation";
        case DeformationFamily::Shear: return "shear";
        case DeformationFamily::SineWarp: return "sine-warp";
        case DeformationFamily::Projective: return "projective";
    }
    return "?";
}

DeformationFamily deformation_family_from_key(std::string_view key) {
    if (key == "identity") return DeformationFamily::Identity;
    if (key == "rotation") return DeformationFamily::Rotation;
    if (key == "shear") return DeformationFamily::Shear;
    if (key == "sine-warp") return DeformationFamily::SineWarp;
    if (key == "projective") return DeformationFamily::Projective;
    throw std::runtime_error("unknown deformation '" + std::string(key) + "'");
}

Vec2 Deformation::apply(Vec2 p) const {
    switch (family) {
        case DeformationFamily::Identity:
            return p;
        case DeformationFamily::Rotation: {
            Vec2 c{0.5, 0.5};
            Vec2 d = p - c;
            double cs = std::cos(p0), sn = std::sin(p0);
            return {c.x + d.x * cs - d.y * sn, c.y + d.x * sn + d.y * cs};
        }
        case DeformationFamily::Shear:
            return {p.x + p0 * p.y, p.y + p1 * p.x};
        case DeformationFamily::SineWarp:
            return {p.x + p0 * std::sin(2 * M_PI * p.y + p1), p.y};
        case DeformationFamily::Projective: {
            double w = 1.0 + p0 * p.x + p1 * p.y;
            return {p.x / w, p.y / w};
        }
    }
    return p;
}

GridLayout generate_grid_layout(int lower_x, int upper_x, int lower_y, int upper_y,
                                Rng& rng) {
    if (lower_x < 2 || lower_y < 2 || lower_x > upper_x || lower_y > upper_y)
        throw std::runtime_error("grid density bounds must be >= 2 per axis");
    GridLayout grid;
    grid.nx = static_cast<int>(rng.uniform_int(lower_x, upper_x));
    grid.ny = static_cast<int>(rng.uniform_int(lower_y, upper_y));
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            grid.points.push_back({static_cast<double>(i) / (grid.nx - 1),
                                   static_cast<double>(j) / (grid.ny - 1)});
    return grid;
}

Deformation sample_deformation(DeformationFamily family, Rng& rng) {
    Deformation d;
    d.family = family;
    switch (family) {
        case DeformationFamily::Identity:
            break;
        case DeformationFamily::Rotation:
            d.p0 = rng.uniform_real(-M_PI / 4, M_PI / 4);
            break;
        case DeformationFamily::Shear:
            d.p0 = rng.uniform_real(-0.4, 0.4);
            d.p1 = rng.uniform_real(-0.4, 0.4);
            break;
        case DeformationFamily::SineWarp:
            d.p0 = rng.uniform_real(0.02, 0.08);
            d.p1 = rng.uniform_real(0, 2 * M_PI);
            break;
        case DeformationFamily::Projective:
            d.p0 = rng.uniform_real(-0.2, 0.2);
            d.p1 = rng.uniform_real(-0.2, 0.2);
            break;
    }
    return d;
}

GridLayout apply_deformation(const GridLayout& grid, const Deformation& deformation) {
    GridLayout out = grid;
    out.deformation = deformation;
    for (Vec2& p : out.points) p = deformation.apply(p);
    // isotropic renormalization keeps pairwise-distance rank order intact
    double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
    for (const Vec2& p : out.points) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    double span = std::max(max_x - min_x, max_y - min_y);
    double scale = span > 0 ? 1.0 / span : 1.0;
    for (Vec2& p : out.points) p = {(p.x - min_x) * scale, (p.y - min_y) * scale};
    return out;
}

BoundaryPolygon generate_boundary_polygon(int n_vertices, double min_vertex_distance,
                                          Rng& rng) {
    if (n_vertices < 3)
        throw std::runtime_error("boundary polygon needs at least 3 vertices");
    for (int attempt = 0; attempt < kBoundaryRetries; ++attempt) {
        // star-shaped construction: sorted angles around the square center
        std::vector<double> angles(static_cast<size_t>(n_vertices));
        for (double& a : angles) a = rng.uniform_real(0, 2 * M_PI);
        std::sort(angles.begin(), angles.end());
        Polygon poly;
        for (double a : angles) {
            double r = rng.uniform_real(0.25, 0.5);
            poly.vertices.push_back({0.5 + r * std::cos(a), 0.5 + r * std::sin(a)});
        }
        bool distances_ok = true;
        for (size_t i = 0; i < poly.vertices.size() && distances_ok; ++i)
            for (size_t j = i + 1; j < poly.vertices.size(); ++j)
                if (geom::distance(poly.vertices[i], poly.vertices[j]) <
                    min_vertex_distance) {
                    distances_ok = false;
                    break;
                }
        if (distances_ok && poly.is_simple())
            return BoundaryPolygon{std::move(poly), min_vertex_distance};
    }
    throw GenerationError(
        "boundary polygon infeasible after " + std::to_string(kBoundaryRetries) +
            " attempts; reduce min vertex distance (" +
            onto::format_number(min_vertex_distance) + ") or vertex count",
        kBoundaryRetries);
}

std::vector<Vec2> clip_layout(const GridLayout& grid, const Polygon& boundary) {
    std::vector<Vec2> kept;
    for (const Vec2& p : grid.points)
        if (boundary.contains(p)) kept.push_back(p);
    return kept;
}

bool SceneElement::contains(Vec2 p) const {
    int parity = 0;
    for (const Polygon& s : shapes)
        if (s.contains(p)) ++parity;
    return parity % 2 == 1;
}

const SceneElement* SceneComposition::find_element(std::string_view entity) const {
    for (const SceneElement& e : elements)
        if (e.entity == entity) return &e;
    return nullptr;
}

std::vector<SceneElement> generate_partition(const Ontology& o,
                                             const GenerationRequest& request,
                                             bool with_land, const Context& context,
                                             Rng& rng, const PartitionTemplate* templates) {
    const double extent = request.extent.scene_size;
    std::vector<SceneElement> elements;

    if (templates) {
        for (const auto& [entity, polygon] : *templates) {
            if (polygon.vertices.size() < 3 || polygon.area() <= 0 || !polygon.is_simple())
                throw std::runtime_error("degenerate partition template for '" + entity +
                                         "'");
            SceneElement e;
            e.entity = entity;
            e.role = Role::NoneTarget;
            e.shapes.push_back(polygon);
            e.spec = onto::sample_specification(o, entity, context, rng);
            elements.push_back(std::move(e));
        }
        return elements;
    }

    SceneElement sea;
    sea.entity = "Sea";
    sea.role = Role::NoneTarget;
    sea.spec = onto::sample_specification(o, "Sea", context, rng);

    if (!with_land) {
        sea.shapes.push_back(scene_rect(0, 0, extent, extent));
        elements.push_back(std::move(sea));
        return elements;
    }

    SceneElement land;
    land.entity = "Land";
    land.role = Role::NoneTarget;
    land.spec = onto::sample_specification(o, "Land", context, rng);

    double coast_width = 0;
    SceneElement coast;
    if (request.coast_enabled) {
        coast.entity = "Coast";
        coast.role = Role::NoneTarget;
        coast.spec = onto::sample_specification(o, "Coast", context, rng);
        coast_width = spec_value(coast.spec, "width");
    }

    // procedural coastline: a noise-displaced curve x = c(y), land to the west
    const double base = rng.uniform_real(0.15, 0.3) * extent;
    const double amplitude = rng.uniform_real(0.05, 0.1) * extent;
    noise::GradientNoise1D displacement(rng.next_u64(), 1.0);
    const int rows = 128;
    std::vector<double> curve(static_cast<size_t>(rows) + 1);
    for (int k = 0; k <= rows; ++k) {
        double t = static_cast<double>(k) / rows;
        double c = base + amplitude * displacement.at(t * 4.0);
        curve[static_cast<size_t>(k)] =
            std::clamp(c, 0.05 * extent, 0.95 * extent - coast_width);
    }

    auto curve_points = [&](double offset) {
        std::vector<Vec2> pts;
        for (int k = 0; k <= rows; ++k)
            pts.push_back({curve[static_cast<size_t>(k)] + offset, extent * k / rows});
        return pts;
    };

    {  // land: west of the curve
        Polygon poly;
        poly.vertices.push_back({0, 0});
        for (const Vec2& p : curve_points(0)) poly.vertices.push_back(p);
        poly.vertices.push_back({0, extent});
        land.shapes.push_back(std::move(poly));
    }
    if (request.coast_enabled) {  // coast: band of sampled width east of the curve
        Polygon poly;
        for (const Vec2& p : curve_points(0)) poly.vertices.push_back(p);
        std::vector<Vec2> outer = curve_points(coast_width);
        poly.vertices.insert(poly.vertices.end(), outer.rbegin(), outer.rend());
        coast.shapes.push_back(std::move(poly));
    }
    {  // sea: remainder to the east edge
        Polygon poly;
        for (const Vec2& p : curve_points(coast_width)) poly.vertices.push_back(p);
        poly.vertices.push_back({extent, extent});
        poly.vertices.push_back({extent, 0});
        sea.shapes.push_back(std::move(poly));
    }
    elements.push_back(std::move(sea));
    if (request.coast_enabled) elements.push_back(std::move(coast));
    elements.push_back(std::move(land));
    return elements;
}

SceneElement generate_windfarm(const Ontology& o, const SceneComposition& composition,
                               const Context& context, Rng& rng) {
    SceneElementSpecification farm_spec =
        onto::sample_specification(o, "WindFarm", context, rng);
    const double size = spec_value(farm_spec, "size");
    const int lines_x = static_cast<int>(spec_value(farm_spec, "grid-lines-x"));
    const int lines_y = static_cast<int>(spec_value(farm_spec, "grid-lines-y"));
    const int n_vertices = static_cast<int>(spec_value(farm_spec, "boundary-vertices"));
    const double min_vertex_distance = spec_value(farm_spec, "min-vertex-distance");
    const DeformationFamily family =
        deformation_family_from_key(spec_key(farm_spec, "deformation"));

    GridLayout grid = generate_grid_layout(lines_x, lines_x, lines_y, lines_y, rng);
    grid = apply_deformation(grid, sample_deformation(family, rng));

    std::vector<Vec2> turbines_unit;
    for (int attempt = 0; attempt < kClipRetries; ++attempt) {
        BoundaryPolygon boundary = generate_boundary_polygon(n_vertices,
                                                             min_vertex_distance, rng);
        turbines_unit = clip_layout(grid, boundary.polygon);
        if (!turbines_unit.empty()) {
            SceneElementSpecification turbine_spec =
                onto::sample_specification(o, "WindTurbine", context, rng);
            const double kernel_radius = spec_value(turbine_spec, "kernel-radius");
            const SceneExtentConfig& extent = composition.extent;
            const double margin =
                (kernel_radius + 1.0) * extent.sensor_resolution;
            const double available = extent.scene_size - size - 2 * margin;
            if (available < 0)
                throw GenerationError("wind farm of size " + onto::format_number(size) +
                                          " m does not fit the scene extent",
                                      0);
            for (int place = 0; place < kPlacementAttempts; ++place) {
                Vec2 offset{margin + rng.uniform_real(0, available),
                            margin + rng.uniform_real(0, available)};
                SceneElement candidate;
                candidate.entity = "WindFarm";
                candidate.role = Role::Target;
                Polygon scaled;
                for (const Vec2& v : boundary.polygon.vertices)
                    scaled.vertices.push_back(offset + v * size);
                candidate.shapes.push_back(std::move(scaled));
                for (const Vec2& p : turbines_unit)
                    candidate.points.push_back(offset + p * size);
                candidate.spec = farm_spec;
                candidate.point_spec = turbine_spec;
                if (placement_valid(o, composition, candidate)) return candidate;
            }
            throw GenerationError("no valid wind farm placement after " +
                                      std::to_string(kPlacementAttempts) + " attempts",
                                  kPlacementAttempts);
        }
    }
    throw ResampleSignal("grid layout never intersected the boundary polygon");
}

SceneElement generate_rig_field(const Ontology& o, const SceneComposition& composition,
                                const Context& context, Rng& rng) {
    if (!composition.find_element("Sea"))
        throw std::runtime_error("rig field generation requires a sea element");
    SceneElementSpecification field_spec =
        onto::sample_specification(o, "RigField", context, rng);
    SceneElementSpecification rig_spec = onto::sample_specification(o, "Rig", context, rng);
    const int rig_count = static_cast<int>(spec_value(field_spec, "rig-count"));
    const double threshold = spec_value(field_spec, "noise-threshold");
    const double diameter = spec_value(field_spec, "diameter");
    const double extent = composition.extent.scene_size;
    const double kernel_radius = spec_value(rig_spec, "kernel-radius");
    const double margin = (kernel_radius + 1.0) * composition.extent.sensor_resolution;

    for (int attempt = 0; attempt < kRigFieldRetries; ++attempt) {
        const double available = extent - diameter - 2 * margin;
        Vec2 origin{margin + rng.uniform_real(0, std::max(0.0, available)),
                    margin + rng.uniform_real(0, std::max(0.0, available))};
        const int n = kRigNoiseGrid;
        noise::GradientNoise2D field_noise(rng.next_u64(), 1.0 / 12.0);
        std::vector<double> samples(static_cast<size_t>(n) * n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                samples[static_cast<size_t>(j) * n + i] =
                    field_noise.at(i + 0.5, j + 0.5);
        std::vector<Polygon> contours = noise::threshold_contours(samples, n, threshold);
        if (contours.empty()) continue;  // threshold above the realized noise range

        const double cell = diameter / n;
        std::vector<Vec2> candidates;
        for (int k = 0; k < rig_count; ++k)
            candidates.push_back({rng.uniform_real(0, n), rng.uniform_real(0, n)});
        SceneElement candidate;
        candidate.entity = "RigField";
        candidate.role = Role::NoneTarget;
        for (const Polygon& c : contours) {
            Polygon scaled;
            for (const Vec2& v : c.vertices)
                scaled.vertices.push_back(origin + v * cell);
            candidate.shapes.push_back(std::move(scaled));
        }
        for (const Vec2& p : candidates) {
            int parity = 0;
            for (const Polygon& c : contours)
                if (c.contains(p)) ++parity;
            if (parity % 2 == 1) candidate.points.push_back(origin + p * cell);
        }
        if (candidate.points.empty()) continue;
        candidate.spec = field_spec;
        candidate.point_spec = rig_spec;
        if (placement_valid(o, composition, candidate)) return candidate;
    }
    throw ResampleSignal("rig field generation exhausted retries");
}

std::vector<TopologyViolation> check_topology(const Ontology& o,
                                              const SceneComposition& c) {
    std::vector<TopologyViolation> violations;
    for (const onto::Entity& entity : o.entities) {
        for (const onto::TopologyRelation& rel : entity.relations) {
            // point-entity subjects live as point sets of a carrier element
            bool point_subject = false;
            for (const SceneElement& e : c.elements)
                if (e.point_spec && e.point_spec->entity == rel.subject) point_subject = true;
            if (point_subject && rel.predicate == TopologyPredicate::MustBeCoincidentWith) {
                for (const SceneElement& e : c.elements) {
                    if (!e.point_spec || e.point_spec->entity != rel.subject ||
                        e.entity != rel.object)
                        continue;
                    for (const Vec2& p : e.points)
                        if (!e.contains(p))
                            violations.push_back({rel.subject, rel.predicate, rel.object,
                                                  "point (" + onto::format_number(p.x) +
                                                      ", " + onto::format_number(p.y) +
                                                      ") outside carrier shape"});
                }
                continue;
            }
            for (const SceneElement& subject : c.elements) {
                if (subject.entity != rel.subject) continue;
                for (const SceneElement& object : c.elements) {
                    if (object.entity != rel.object) continue;
                    if (!relation_holds(rel, subject, object))
                        violations.push_back({rel.subject, rel.predicate, rel.object,
                                              "between elements '" + subject.entity +
                                                  "' and '" + object.entity + "'"});
                }
            }
        }
    }
    return violations;
}

SceneComposition compose_scene(const Ontology& o, const GenerationRequest& request,
                               uint64_t seed, const PartitionTemplate* templates) {
    Rng rng(seed);
    const std::string& cls = request.composition_class;
    const bool is_farm = cls.rfind("owf-", 0) == 0;
    const bool with_land = cls == "owf-small" || cls == "none-target-land";

    Context context;
    context["Scene.sea-mode"] = request.template_sea ? "template" : "constant";
    context["Scene.texture-mode"] = request.tidal_turbines ? "tidal" : "standard";
    context["Scene.coast"] = request.coast_enabled ? "on" : "off";
    context["Scene.land-proximity"] = with_land ? "near" : "far";
    if (is_farm) context["Scene.owf-class"] = cls.substr(4);

    SceneComposition composition;
    composition.extent = request.extent;
    composition.seed = seed;
    composition.composition_class = cls;
    composition.scene_spec = make_scene_spec(o, context);
    // extent travels with the spec so a snapshot alone can replay the example
    composition.scene_spec.sampled.emplace_back(
        "scene-size", onto::SampledValue{request.extent.scene_size, ""});
    composition.scene_spec.sampled.emplace_back(
        "sensor-resolution", onto::SampledValue{request.extent.sensor_resolution, ""});

    for (SceneElement& e : generate_partition(o, request, with_land, context, rng,
                                              templates))
        composition.elements.push_back(std::move(e));

    if (is_farm) {
        composition.elements.push_back(generate_windfarm(o, composition, context, rng));
    } else if (cls == "none-target-rigs") {
        composition.elements.push_back(generate_rig_field(o, composition, context, rng));
    } else if (cls != "none-target-land") {
        throw std::runtime_error("unknown composition class '" + cls + "'");
    }

    if (!check_topology(o, composition).empty())
        throw ResampleSignal("composed scene violates a topology relation");
    return composition;
}

std::string composition_to_geojson(const SceneComposition& c) {
    nlohmann::json features = nlohmann::json::array();
    for (const SceneElement& e : c.elements) {
        for (const Polygon& s : e.shapes) {
            nlohmann::json ring = nlohmann::json::array();
            for (const Vec2& v : s.vertices) ring.push_back({v.x, v.y});
            if (!s.vertices.empty()) ring.push_back({s.vertices[0].x, s.vertices[0].y});
            features.push_back({{"type", "Feature"},
                                {"properties",
                                 {{"entity", e.entity},
                                  {"role", e.role == Role::Target ? "target" : "none-target"}}},
                                {"geometry",
                                 {{"type", "Polygon"},
                                  {"coordinates", nlohmann::json::array({ring})}}}});
        }
        for (const Vec2& p : e.points)
            features.push_back({{"type", "Feature"},
                                {"properties", {{"entity", e.entity}, {"kind", "point"}}},
                                {"geometry",
                                 {{"type", "Point"}, {"coordinates", {p.x, p.y}}}}});
    }
    nlohmann::json doc{{"type", "FeatureCollection"},
                       {"properties",
                        {{"class", c.composition_class},
                         {"seed", c.seed},
                         {"scene_size", c.extent.scene_size}}},
                       {"features", features}};
    return doc.dump(2);
}

}  // namespace synteo::scene
