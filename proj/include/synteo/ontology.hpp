#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "synteo/rng.hpp"

namespace synteo::onto {

enum class DimensionKind {
    ChoiceSet,
    UniformRange,
    DiscreteUniformRange,
    Constant,
    TemplateQuery,
};

std::string_view to_string(DimensionKind kind);
DimensionKind dimension_kind_from_string(std::string_view s);

struct Choice {
    std::string key;
    double value = 0;
    double weight = 1.0;
};

struct Dimension {
    DimensionKind kind = DimensionKind::Constant;
    std::vector<Choice> choices;  // ChoiceSet
    double lower = 0;             // ranges
    double upper = 0;
    double constant = 0;
    std::string query;  // TemplateQuery class tag
    std::string unit;

    bool operator==(const Dimension&) const = default;
};

struct Characteristic {
    std::string name;
    Dimension dimension;
};

enum class TopologyPredicate {
    MustBeInside,
    MustBeCoincidentWith,
    MustNotOverlap,
    MustBeWithinDistance,
};

std::string_view to_string(TopologyPredicate p);

struct TopologyRelation {
    std::string subject;
    TopologyPredicate predicate = TopologyPredicate::MustNotOverlap;
    std::string object;
    double distance = 0;  // MustBeWithinDistance, meters
};

// One reactive binding: when the source characteristic samples `key`, the
// target characteristic's dimension payload is replaced by `substitution`.
struct ContextLink {
    std::string source_entity;
    std::string source_characteristic;
    std::string key;
    std::string target_entity;
    std::string target_characteristic;
    Dimension substitution;
};

struct Entity {
    std::string name;
    std::vector<Characteristic> characteristics;
    std::vector<TopologyRelation> relations;  // subject is this entity
    std::vector<ContextLink> contexts;        // source is this entity

    const Characteristic* find_characteristic(std::string_view name) const;
};

struct SceneDefaults {
    double scene_size = 20480;        // meters per side
    double sensor_resolution = 10;    // meters per pixel
};

struct Diagnostic {
    std::string code;
    std::string message;
};

struct Ontology {
    std::string version;
    SceneDefaults scene_defaults;
    std::vector<Entity> entities;

    const Entity* find_entity(std::string_view name) const;
    std::vector<const ContextLink*> links_targeting(std::string_view entity,
                                                    std::string_view characteristic) const;
};

struct SampledValue {
    double value = 0;
    std::string key;  // semantic key (choice) or template query tag

    bool operator==(const SampledValue&) const = default;
};

struct SceneElementSpecification {
    std::string entity;
    std::vector<std::pair<std::string, SampledValue>> sampled;  // declaration order

    const SampledValue* find(std::string_view characteristic) const;
    bool operator==(const SceneElementSpecification&) const = default;
};

struct OntologySnapshot {
    std::string example_id;
    uint64_t rng_seed = 0;
    std::string composition_class;
    std::vector<SceneElementSpecification> specifications;

    bool operator==(const OntologySnapshot&) const = default;
};

// Resolved semantic keys, addressed as "Entity.characteristic".
using Context = std::map<std::string, std::string>;

struct ValidationError : std::runtime_error {
    std::vector<Diagnostic> diagnostics;
    explicit ValidationError(std::vector<Diagnostic> diags);
};

// Parses and validates; throws xml::ParseError on malformed input and
// ValidationError when any invariant is violated.
Ontology parse_ontology(const std::string& document);

// Diagnostics only, never throws. Codes are stable identifiers such as
// DUPLICATE_ENTITY, DUPLICATE_CHARACTERISTIC, DANGLING_REFERENCE,
// CONTEXT_CYCLE, BAD_DIMENSION, BAD_TOPOLOGY.
std::vector<Diagnostic> validate_ontology(const Ontology& o);

SceneElementSpecification sample_specification(const Ontology& o,
                                               std::string_view entity,
                                               const Context& context, Rng& rng);

// True when `v` is a member of `dim` (choice key+value match, value within
// range bounds, equals the constant, or query tag match).
bool value_in_dimension(const SampledValue& v, const Dimension& dim);

std::string write_snapshot(const std::vector<SceneElementSpecification>& specs,
                           const std::string& example_id, uint64_t seed,
                           const std::string& composition_class = "");
OntologySnapshot parse_snapshot(const std::string& document);

// The shipped offshore-wind-farm ontology.
const std::string& builtin_ontology_xml();

// Stable shortest round-trip decimal rendering for doubles.
std::string format_number(double v);

}  // namespace synteo::onto
