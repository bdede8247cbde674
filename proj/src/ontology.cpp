#include "synteo/ontology.hpp"

#include <cmath>

#include <algorithm>
#include <charconv>
#include <set>

#include "synteo/xml.hpp"

namespace synteo::onto {

namespace {

std::string ref(std::string_view entity, std::string_view characteristic) {
    return std::string(entity) + "." + std::string(characteristic);
}

Dimension parse_dimension(const xml::Node& node) {
    Dimension dim;
    dim.kind = dimension_kind_from_string(node.attribute("kind"));
    dim.unit = node.attribute_or("unit", "");
    switch (dim.kind) {
        case DimensionKind::ChoiceSet:
            for (const xml::Node* c : node.children_named("choice")) {
                Choice choice;
                choice.key = c->attribute("key");
                choice.value = c->number_attribute("value");
                if (c->find_attribute("weight")) choice.weight = c->number_attribute("weight");
                dim.choices.push_back(std::move(choice));
            }
            break;
        case DimensionKind::UniformRange:
        case DimensionKind::DiscreteUniformRange:
            dim.lower = node.number_attribute("lower");
            dim.upper = node.number_attribute("upper");
            break;
        case DimensionKind::Constant:
            dim.constant = node.number_attribute("value");
            break;
        case DimensionKind::TemplateQuery:
            dim.query = node.attribute("query");
            break;
    }
    return dim;
}

xml::Node dimension_to_xml(const Dimension& dim) {
    xml::Node node;
    node.name = "dimension";
    node.set_attribute("kind", std::string(to_string(dim.kind)));
    if (!dim.unit.empty()) node.set_attribute("unit", dim.unit);
    switch (dim.kind) {
        case DimensionKind::ChoiceSet:
            for (const Choice& c : dim.choices) {
                xml::Node choice;
                choice.name = "choice";
                choice.set_attribute("key", c.key);
                choice.set_attribute("value", format_number(c.value));
                if (c.weight != 1.0) choice.set_attribute("weight", format_number(c.weight));
                node.children.push_back(std::move(choice));
            }
            break;
        case DimensionKind::UniformRange:
        case DimensionKind::DiscreteUniformRange:
            node.set_attribute("lower", format_number(dim.lower));
            node.set_attribute("upper", format_number(dim.upper));
            break;
        case DimensionKind::Constant:
            node.set_attribute("value", format_number(dim.constant));
            break;
        case DimensionKind::TemplateQuery:
            node.set_attribute("query", dim.query);
            break;
    }
    return node;
}

TopologyPredicate predicate_from_string(const std::string& s) {
    if (s == "MustBeInside") return TopologyPredicate::MustBeInside;
    if (s == "MustBeCoincidentWith") return TopologyPredicate::MustBeCoincidentWith;
    if (s == "MustNotOverlap") return TopologyPredicate::MustNotOverlap;
    if (s == "MustBeWithinDistance") return TopologyPredicate::MustBeWithinDistance;
    throw std::runtime_error("unknown topology predicate '" + s + "'");
}

struct CharNode {
    std::string entity;
    std::string characteristic;
    bool operator<(const CharNode& o) const {
        return entity != o.entity ? entity < o.entity : characteristic < o.characteristic;
    }
};

// DFS cycle search over the context-link graph; returns one cycle as a list
// of "Entity.characteristic" names when present.
std::optional<std::vector<std::string>> find_context_cycle(const Ontology& o) {
    std::map<CharNode, std::vector<CharNode>> graph;
    for (const Entity& e : o.entities)
        for (const ContextLink& link : e.contexts)
            graph[{link.source_entity, link.source_characteristic}].push_back(
                {link.target_entity, link.target_characteristic});

    std::map<CharNode, int> state;  // 0 new, 1 on stack, 2 done
    std::vector<CharNode> stack;
    std::optional<std::vector<std::string>> cycle;

    auto dfs = [&](auto&& self, const CharNode& n) -> bool {
        state[n] = 1;
        stack.push_back(n);
        for (const CharNode& next : graph[n]) {
            int s = state.count(next) ? state[next] : 0;
            if (s == 1) {
                std::vector<std::string> names;
                auto it = std::find_if(stack.begin(), stack.end(), [&](const CharNode& c) {
                    return !(c < next) && !(next < c);
                });
                for (; it != stack.end(); ++it) names.push_back(ref(it->entity, it->characteristic));
                names.push_back(ref(next.entity, next.characteristic));
                cycle = names;
                return true;
            }
            if (s == 0 && self(self, next)) return true;
        }
        stack.pop_back();
        state[n] = 2;
        return false;
    };

    for (const auto& [node, _] : graph) {
        if ((state.count(node) ? state[node] : 0) == 0 && dfs(dfs, node)) break;
    }
    return cycle;
}

void check_dimension(const Dimension& dim, const std::string& where,
                     std::vector<Diagnostic>& out) {
    switch (dim.kind) {
        case DimensionKind::ChoiceSet: {
            if (dim.choices.empty())
                out.push_back({"BAD_DIMENSION", where + ": choice-set has no items"});
            std::set<std::string> keys;
            for (const Choice& c : dim.choices)
                if (!keys.insert(c.key).second)
                    out.push_back({"BAD_DIMENSION",
                                   where + ": duplicate choice key '" + c.key + "'"});
            break;
        }
        case DimensionKind::UniformRange:
        case DimensionKind::DiscreteUniformRange:
            if (dim.lower > dim.upper)
                out.push_back({"BAD_DIMENSION", where + ": range lower > upper"});
            break;
        case DimensionKind::Constant:
            break;
        case DimensionKind::TemplateQuery:
            if (dim.query.empty())
                out.push_back({"BAD_DIMENSION", where + ": empty template query"});
            break;
    }
}

SampledValue sample_dimension(const Dimension& dim, Rng& rng) {
    SampledValue v;
    switch (dim.kind) {
        case DimensionKind::Constant:
            v.value = dim.constant;
            break;
        case DimensionKind::UniformRange:
            v.value = rng.uniform_real(dim.lower, dim.upper);
            break;
        case DimensionKind::DiscreteUniformRange:
            v.value = static_cast<double>(rng.uniform_int(
                static_cast<int64_t>(dim.lower), static_cast<int64_t>(dim.upper)));
            break;
        case DimensionKind::ChoiceSet: {
            double total = 0;
            for (const Choice& c : dim.choices) total += c.weight;
            double u = rng.uniform_real(0, total);
            double acc = 0;
            const Choice* picked = &dim.choices.back();
            for (const Choice& c : dim.choices) {
                acc += c.weight;
                if (u < acc) {
                    picked = &c;
                    break;
                }
            }
            v.value = picked->value;
            v.key = picked->key;
            break;
        }
        case DimensionKind::TemplateQuery:
            v.key = dim.query;
            break;
    }
    return v;
}

}  // namespace

std::string_view to_string(DimensionKind kind) {
    switch (kind) {
        case DimensionKind::ChoiceSet: return "choice-set";
        case DimensionKind::UniformRange: return "uniform-range";
        case DimensionKind::DiscreteUniformRange: return "discrete-uniform-range";
        case DimensionKind::Constant: return "constant";
        case DimensionKind::TemplateQuery: return "template-query";
    }
    return "?";
}

DimensionKind dimension_kind_from_string(std::string_view s) {
    if (s == "choice-set") return DimensionKind::ChoiceSet;
    if (s == "uniform-range") return DimensionKind::UniformRange;
    if (s == "discrete-uniform-range") return DimensionKind::DiscreteUniformRange;
    if (s == "constant") return DimensionKind::Constant;
    if (s == "template-query") return DimensionKind::TemplateQuery;
    throw std::runtime_error("unknown dimension kind '" + std::string(s) + "'");
}

std::string_view to_string(TopologyPredicate p) {
    switch (p) {
        case TopologyPredicate::MustBeInside: return "MustBeInside";
        case TopologyPredicate::MustBeCoincidentWith: return "MustBeCoincidentWith";
        case TopologyPredicate::MustNotOverlap: return "MustNotOverlap";
        case TopologyPredicate::MustBeWithinDistance: return "MustBeWithinDistance";
    }
    return "?";
}

const Characteristic* Entity::find_characteristic(std::string_view n) const {
    for (const Characteristic& c : characteristics)
        if (c.name == n) return &c;
    return nullptr;
}

const Entity* Ontology::find_entity(std::string_view name) const {
    for (const Entity& e : entities)
        if (e.name == name) return &e;
    return nullptr;
}

std::vector<const ContextLink*> Ontology::links_targeting(
    std::string_view entity, std::string_view characteristic) const {
    std::vector<const ContextLink*> out;
    for (const Entity& e : entities)
        for (const ContextLink& link : e.contexts)
            if (link.target_entity == entity && link.target_characteristic == characteristic)
                out.push_back(&link);
    return out;
}

const SampledValue* SceneElementSpecification::find(std::string_view characteristic) const {
    for (const auto& [name, value] : sampled)
        if (name == characteristic) return &value;
    return nullptr;
}

ValidationError::ValidationError(std::vector<Diagnostic> diags)
    : std::runtime_error([&] {
          std::string msg = "ontology validation failed:";
          for (const Diagnostic& d : diags) msg += "\n  [" + d.code + "] " + d.message;
          return msg;
      }()),
      diagnostics(std::move(diags)) {}

Ontology parse_ontology(const std::string& document) {
    xml::Node root = xml::parse(document);
    if (root.name != "ontology")
        throw std::runtime_error("expected <ontology> root, got <" + root.name + ">");

    Ontology o;
    o.version = root.attribute_or("version", "1");
    if (const xml::Node* defaults = root.find_child("scene-defaults")) {
        o.scene_defaults.scene_size = defaults->number_attribute("scene-size");
        o.scene_defaults.sensor_resolution = defaults->number_attribute("sensor-resolution");
    }
    for (const xml::Node* entity_node : root.children_named("entity")) {
        Entity entity;
        entity.name = entity_node->attribute("name");
        for (const xml::Node& child : entity_node->children) {
            if (child.name == "characteristic") {
                Characteristic c;
                c.name = child.attribute("name");
                const xml::Node* dim = child.find_child("dimension");
                if (!dim)
                    throw std::runtime_error("characteristic '" + c.name +
                                             "' has no <dimension>");
                c.dimension = parse_dimension(*dim);
                entity.characteristics.push_back(std::move(c));
            } else if (child.name == "relation") {
                TopologyRelation rel;
                rel.subject = entity.name;
                rel.predicate = predicate_from_string(child.attribute("predicate"));
                rel.object = child.attribute("object");
                if (rel.predicate == TopologyPredicate::MustBeWithinDistance)
                    rel.distance = child.number_attribute("distance");
                entity.relations.push_back(std::move(rel));
            } else if (child.name == "context") {
                std::string source_char = child.attribute("characteristic");
                std::string target_entity = child.attribute("target-entity");
                std::string target_char = child.attribute("target-characteristic");
                for (const xml::Node* case_node : child.children_named("case")) {
                    ContextLink link;
                    link.source_entity = entity.name;
                    link.source_characteristic = source_char;
                    link.key = case_node->attribute("key");
                    link.target_entity = target_entity;
                    link.target_characteristic = target_char;
                    const xml::Node* dim = case_node->find_child("dimension");
                    if (!dim)
                        throw std::runtime_error("context case '" + link.key +
                                                 "' has no <dimension>");
                    link.substitution = parse_dimension(*dim);
                    entity.contexts.push_back(std::move(link));
                }
            }
        }
        o.entities.push_back(std::move(entity));
    }

    std::vector<Diagnostic> diags = validate_ontology(o);
    if (!diags.empty()) throw ValidationError(std::move(diags));
    return o;
}

std::vector<Diagnostic> validate_ontology(const Ontology& o) {
    std::vector<Diagnostic> out;
    std::set<std::string> entity_names;
    for (const Entity& e : o.entities)
        if (!entity_names.insert(e.name).second)
            out.push_back({"DUPLICATE_ENTITY", "duplicate entity '" + e.name + "'"});

    for (const Entity& e : o.entities) {
        std::set<std::string> char_names;
        for (const Characteristic& c : e.characteristics) {
            if (!char_names.insert(c.name).second)
                out.push_back({"DUPLICATE_CHARACTERISTIC",
                               "duplicate characteristic '" + ref(e.name, c.name) + "'"});
            check_dimension(c.dimension, ref(e.name, c.name), out);
        }
        for (const TopologyRelation& rel : e.relations) {
            if (rel.subject == rel.object)
                out.push_back({"BAD_TOPOLOGY", "relation of '" + rel.subject +
                                                   "' with itself"});
            if (!entity_names.count(rel.object))
                out.push_back({"DANGLING_REFERENCE",
                               "relation " + rel.subject + " " +
                                   std::string(to_string(rel.predicate)) + " '" +
                                   rel.object + "': no such entity"});
        }
        for (const ContextLink& link : e.contexts) {
            std::string where = "context " + ref(link.source_entity, link.source_characteristic) +
                                "[" + link.key + "] -> " +
                                ref(link.target_entity, link.target_characteristic);
            const Characteristic* src = e.find_characteristic(link.source_characteristic);
            if (!src) {
                out.push_back({"DANGLING_REFERENCE",
                               where + ": no such source characteristic"});
            } else if (src->dimension.kind != DimensionKind::ChoiceSet) {
                out.push_back({"BAD_CONTEXT_KEY", where + ": source is not a choice-set"});
            } else {
                bool found = false;
                for (const Choice& c : src->dimension.choices)
                    if (c.key == link.key) found = true;
                if (!found)
                    out.push_back({"BAD_CONTEXT_KEY",
                                   where + ": key not in source choice-set"});
            }
            const Entity* target = o.find_entity(link.target_entity);
            if (!target) {
                out.push_back({"DANGLING_REFERENCE",
                               where + ": no such entity '" + link.target_entity + "'"});
            } else if (!target->find_characteristic(link.target_characteristic)) {
                out.push_back({"DANGLING_REFERENCE",
                               where + ": no such characteristic '" +
                                   link.target_characteristic + "'"});
            }
            check_dimension(link.substitution, where, out);
        }
    }

    if (auto cycle = find_context_cycle(o)) {
        std::string msg = "context cycle:";
        for (const std::string& n : *cycle) msg += " " + n;
        out.push_back({"CONTEXT_CYCLE", msg});
    }
    return out;
}

SceneElementSpecification sample_specification(const Ontology& o,
                                               std::string_view entity_name,
                                               const Context& context, Rng& rng) {
    const Entity* entity = o.find_entity(entity_name);
    if (!entity)
        throw std::runtime_error("no such entity '" + std::string(entity_name) + "'");

    // Characteristics are sampled in declaration order; an intra-entity link
    // source must therefore be declared before its target. Cross-entity keys
    // come from the caller's context map.
    SceneElementSpecification spec;
    spec.entity = entity->name;
    std::map<std::string, std::string> local_keys;

    for (const Characteristic& c : entity->characteristics) {
        Dimension effective = c.dimension;
        for (const ContextLink* link : o.links_targeting(entity->name, c.name)) {
            std::string source_key;
            if (link->source_entity == entity->name &&
                local_keys.count(link->source_characteristic)) {
                source_key = local_keys[link->source_characteristic];
            } else {
                auto it = context.find(ref(link->source_entity, link->source_characteristic));
                if (it == context.end())
                    throw std::runtime_error(
                        "unresolved context link " +
                        ref(link->source_entity, link->source_characteristic) + "[" +
                        link->key + "] -> " + ref(entity->name, c.name));
                source_key = it->second;
            }
            if (source_key == link->key) effective = link->substitution;
        }
        SampledValue v = sample_dimension(effective, rng);
        if (!v.key.empty() && effective.kind == DimensionKind::ChoiceSet)
            local_keys[c.name] = v.key;
        spec.sampled.emplace_back(c.name, std::move(v));
    }
    return spec;
}

bool value_in_dimension(const SampledValue& v, const Dimension& dim) {
    switch (dim.kind) {
        case DimensionKind::Constant:
            return v.value == dim.constant;
        case DimensionKind::UniformRange:
            return v.value >= dim.lower && v.value <= dim.upper;
        case DimensionKind::DiscreteUniformRange:
            return v.value >= dim.lower && v.value <= dim.upper &&
                   v.value == std::floor(v.value);
        case DimensionKind::ChoiceSet:
            for (const Choice& c : dim.choices)
                if (c.key == v.key && c.value == v.value) return true;
            return false;
        case DimensionKind::TemplateQuery:
            return v.key == dim.query;
    }
    return false;
}

std::string write_snapshot(const std::vector<SceneElementSpecification>& specs,
                           const std::string& example_id, uint64_t seed,
                           const std::string& composition_class) {
    xml::Node root;
    root.name = "snapshot";
    root.set_attribute("example-id", example_id);
    root.set_attribute("seed", std::to_string(seed));
    if (!composition_class.empty()) root.set_attribute("class", composition_class);
    for (const SceneElementSpecification& spec : specs) {
        xml::Node spec_node;
        spec_node.name = "specification";
        spec_node.set_attribute("entity", spec.entity);
        for (const auto& [name, value] : spec.sampled) {
            xml::Node sampled;
            sampled.name = "sampled";
            sampled.set_attribute("characteristic", name);
            sampled.set_attribute("value", format_number(value.value));
            if (!value.key.empty()) sampled.set_attribute("key", value.key);
            spec_node.children.push_back(std::move(sampled));
        }
        root.children.push_back(std::move(spec_node));
    }
    return xml::serialize(root);
}

OntologySnapshot parse_snapshot(const std::string& document) {
    xml::Node root = xml::parse(document);
    if (root.name != "snapshot")
        throw std::runtime_error("expected <snapshot> root, got <" + root.name + ">");
    OntologySnapshot snap;
    snap.example_id = root.attribute("example-id");
    snap.rng_seed = std::stoull(root.attribute("seed"));
    snap.composition_class = root.attribute_or("class", "");
    for (const xml::Node* spec_node : root.children_named("specification")) {
        SceneElementSpecification spec;
        spec.entity = spec_node->attribute("entity");
        for (const xml::Node* s : spec_node->children_named("sampled")) {
            SampledValue v;
            v.value = s->number_attribute("value");
            v.key = s->attribute_or("key", "");
            spec.sampled.emplace_back(s->attribute("characteristic"), std::move(v));
        }
        snap.specifications.push_back(std::move(spec));
    }
    return snap;
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace synteo::onto
