#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "synteo/ontology.hpp"

using namespace synteo;
using onto::Context;
using onto::Dimension;
using onto::DimensionKind;
using onto::Ontology;

namespace {

bool has_code(const std::vector<onto::Diagnostic>& diags, const std::string& code) {
    return std::any_of(diags.begin(), diags.end(),
                       [&](const onto::Diagnostic& d) { return d.code == code; });
}

std::vector<onto::Diagnostic> diagnose(const std::string& doc) {
    try {
        onto::parse_ontology(doc);
        return {};
    } catch (const onto::ValidationError& e) {
        return e.diagnostics;
    }
}

}  // namespace

TEST_CASE("builtin ontology parses clean") {
    const Ontology o = onto::parse_ontology(onto::builtin_ontology_xml());
    CHECK(o.scene_defaults.scene_size == 20480);
    CHECK(o.scene_defaults.sensor_resolution == 10);
    CHECK(o.find_entity("WindFarm") != nullptr);
    CHECK(o.find_entity("WindTurbine") != nullptr);
    CHECK(o.find_entity("Nope") == nullptr);
    CHECK(onto::validate_ontology(o).empty());
}

TEST_CASE("diagnostics: duplicates") {
    CHECK(has_code(diagnose(R"(<ontology>
<entity name="A"/><entity name="A"/>
</ontology>)"),
                   "DUPLICATE_ENTITY"));
    CHECK(has_code(diagnose(R"(<ontology><entity name="A">
<characteristic name="x"><dimension kind="constant" value="1"/></characteristic>
<characteristic name="x"><dimension kind="constant" value="2"/></characteristic>
</entity></ontology>)"),
                   "DUPLICATE_CHARACTERISTIC"));
}

TEST_CASE("diagnostics: bad dimensions") {
    CHECK(has_code(diagnose(R"(<ontology><entity name="A">
<characteristic name="x"><dimension kind="uniform-range" lower="5" upper="1"/></characteristic>
</entity></ontology>)"),
                   "BAD_DIMENSION"));
    CHECK(has_code(diagnose(R"(<ontology><entity name="A">
<characteristic name="x"><dimension kind="choice-set"/></characteristic>
</entity></ontology>)"),
                   "BAD_DIMENSION"));
    CHECK(has_code(diagnose(R"(<ontology><entity name="A">
<characteristic name="x"><dimension kind="choice-set">
<choice key="k" value="1"/><choice key="k" value="2"/>
</dimension></characteristic>
</entity></ontology>)"),
                   "BAD_DIMENSION"));
}

TEST_CASE("diagnostics: topology") {
    CHECK(has_code(diagnose(R"(<ontology><entity name="A">
<relation predicate="MustNotOverlap" object="A"/>
</entity></ontology>)"),
                   "BAD_TOPOLOGY"));
    CHECK(has_code(diagnose(R"(<ontology><entity name="A">
<relation predicate="MustNotOverlap" object="Ghost"/>
</entity></ontology>)"),
                   "DANGLING_REFERENCE"));
}

TEST_CASE("diagnostics: context links") {
    // key not present in the source choice set
    CHECK(has_code(diagnose(R"(<ontology><entity name="A">
<characteristic name="mode"><dimension kind="choice-set">
<choice key="on" value="1"/></dimension></characteristic>
<characteristic name="x"><dimension kind="constant" value="1"/></characteristic>
<context characteristic="mode" target-entity="A" target-characteristic="x">
<case key="off"><dimension kind="constant" value="2"/></case>
</context>
</entity></ontology>)"),
                   "BAD_CONTEXT_KEY"));
    // dangling target
    CHECK(has_code(diagnose(R"(<ontology><entity name="A">
<characteristic name="mode"><dimension kind="choice-set">
<choice key="on" value="1"/></dimension></characteristic>
<context characteristic="mode" target-entity="B" target-characteristic="x">
<case key="on"><dimension kind="constant" value="2"/></case>
</context>
</entity></ontology>)"),
                   "DANGLING_REFERENCE"));
}

TEST_CASE("diagnostics: context cycle is reported with its path") {
    const auto diags = diagnose(R"(<ontology><entity name="A">
<characteristic name="x"><dimension kind="choice-set">
<choice key="k" value="1"/></dimension></characteristic>
<characteristic name="y"><dimension kind="choice-set">
<choice key="k" value="1"/></dimension></characteristic>
<context characteristic="x" target-entity="A" target-characteristic="y">
<case key="k"><dimension kind="choice-set"><choice key="k" value="2"/></dimension></case>
</context>
<context characteristic="y" target-entity="A" target-characteristic="x">
<case key="k"><dimension kind="choice-set"><choice key="k" value="2"/></dimension></case>
</context>
</entity></ontology>)");
    REQUIRE(has_code(diags, "CONTEXT_CYCLE"));
    for (const auto& d : diags)
        if (d.code == "CONTEXT_CYCLE") {
            CHECK(d.message.find("A.x") != std::string::npos);
            CHECK(d.message.find("A.y") != std::string::npos);
        }
}

TEST_CASE("sampled values are members of their dimensions") {
    const Ontology o = onto::parse_ontology(onto::builtin_ontology_xml());
    Context context{{"Scene.owf-class", "medium"},
                    {"Scene.land-proximity", "far"},
                    {"Scene.sea-mode", "constant"},
                    {"Scene.texture-mode", "standard"},
                    {"Scene.coast", "off"}};
    Rng rng(5);
    for (int t = 0; t < 300; ++t) {
        for (const char* name : {"WindFarm", "WindTurbine", "RigField", "Rig"}) {
            const auto spec = onto::sample_specification(o, name, context, rng);
            const onto::Entity* e = o.find_entity(name);
            CHECK(spec.sampled.size() == e->characteristics.size());
            for (const auto& [characteristic, value] : spec.sampled) {
                // membership is checked against the substituted dimension when
                // a link applies; the base dimension must hold when none does
                const auto* c = e->find_characteristic(characteristic);
                REQUIRE(c != nullptr);
                bool ok = onto::value_in_dimension(value, c->dimension);
                for (const auto* link : o.links_targeting(name, characteristic))
                    ok = ok || onto::value_in_dimension(value, link->substitution);
                CHECK(ok);
            }
        }
    }
}

TEST_CASE("context substitution reacts to scene keys") {
    const Ontology o = onto::parse_ontology(onto::builtin_ontology_xml());
    Rng rng(9);
    Context context{{"Scene.owf-class", "small"},
                    {"Scene.land-proximity", "far"},
                    {"Scene.sea-mode", "constant"},
                    {"Scene.texture-mode", "standard"},
                    {"Scene.coast", "off"}};
    for (int t = 0; t < 100; ++t) {
        const auto spec = onto::sample_specification(o, "WindFarm", context, rng);
        CHECK(spec.find("size")->value == 5000);
        CHECK(spec.find("size")->key == "small");
        CHECK(spec.find("grid-lines-x")->value >= 6);
        CHECK(spec.find("grid-lines-x")->value <= 10);
    }

    context["Scene.owf-class"] = "large";
    for (int t = 0; t < 100; ++t) {
        const auto spec = onto::sample_specification(o, "WindFarm", context, rng);
        CHECK(spec.find("size")->value == 17000);
        CHECK(spec.find("grid-lines-x")->value >= 4);
        CHECK(spec.find("grid-lines-x")->value <= 6);
    }

    // when several links target the same characteristic, the last declared
    // one wins: owf-class links are declared after land-proximity links
    context["Scene.land-proximity"] = "near";
    for (int t = 0; t < 50; ++t) {
        const auto spec = onto::sample_specification(o, "WindFarm", context, rng);
        CHECK(spec.find("size")->value == 17000);
    }
    // dropping a key any targeting link depends on makes sampling fail loudly
    context.erase("Scene.owf-class");
    CHECK_THROWS(onto::sample_specification(o, "WindFarm", context, rng));
}

TEST_CASE("sea texture switches between template query and constant") {
    const Ontology o = onto::parse_ontology(onto::builtin_ontology_xml());
    Rng rng(3);
    Context constant_sea{{"Scene.sea-mode", "constant"}};
    const auto c = onto::sample_specification(o, "Sea", constant_sea, rng);
    CHECK(c.find("texture")->key.empty());
    CHECK(c.find("texture")->value >= 25);
    CHECK(c.find("texture")->value <= 55);

    Context template_sea{{"Scene.sea-mode", "template"}};
    const auto t = onto::sample_specification(o, "Sea", template_sea, rng);
    CHECK(t.find("texture")->key == "sea");
}

TEST_CASE("missing context keys are an error, not a silent default") {
    const Ontology o = onto::parse_ontology(onto::builtin_ontology_xml());
    Rng rng(1);
    Context empty;
    CHECK_THROWS_WITH_AS(onto::sample_specification(o, "WindFarm", empty, rng),
                         doctest::Contains("unresolved context link"),
                         std::runtime_error);
}

TEST_CASE("weighted choice frequencies follow the weights") {
    const auto o = onto::parse_ontology(R"(<ontology><entity name="A">
<characteristic name="pick"><dimension kind="choice-set">
<choice key="rare" value="0" weight="1"/>
<choice key="common" value="1" weight="3"/>
</dimension></characteristic>
</entity></ontology>)");
    Rng rng(21);
    int common = 0;
    const int n = 40000;
    for (int i = 0; i < n; ++i)
        if (onto::sample_specification(o, "A", {}, rng).find("pick")->key == "common")
            ++common;
    CHECK(common > n * 3 / 4 - 600);
    CHECK(common < n * 3 / 4 + 600);
}

TEST_CASE("value_in_dimension") {
    Dimension range{DimensionKind::UniformRange, {}, 1, 2, 0, "", ""};
    CHECK(onto::value_in_dimension({1.5, ""}, range));
    CHECK(!onto::value_in_dimension({2.5, ""}, range));

    Dimension discrete{DimensionKind::DiscreteUniformRange, {}, 1, 5, 0, "", ""};
    CHECK(onto::value_in_dimension({3, ""}, discrete));
    CHECK(!onto::value_in_dimension({3.5, ""}, discrete));

    Dimension constant{DimensionKind::Constant, {}, 0, 0, 7, "", ""};
    CHECK(onto::value_in_dimension({7, ""}, constant));
    CHECK(!onto::value_in_dimension({8, ""}, constant));

    Dimension choices{DimensionKind::ChoiceSet, {{"a", 1, 1}, {"b", 2, 1}}, 0, 0, 0,
                      "", ""};
    CHECK(onto::value_in_dimension({2, "b"}, choices));
    CHECK(!onto::value_in_dimension({2, "a"}, choices));

    Dimension query{DimensionKind::TemplateQuery, {}, 0, 0, 0, "sea", ""};
    CHECK(onto::value_in_dimension({0, "sea"}, query));
    CHECK(!onto::value_in_dimension({0, "land"}, query));
}

TEST_CASE("snapshot round trip preserves every byte of meaning") {
    onto::SceneElementSpecification scene;
    scene.entity = "Scene";
    scene.sampled = {{"sea-mode", {0, "constant"}}, {"scene-size", {20480, ""}}};
    onto::SceneElementSpecification farm;
    farm.entity = "WindFarm";
    farm.sampled = {{"size", {5000, "small"}}, {"min-vertex-distance", {0.2751234567890123, ""}}};

    const std::string doc = onto::write_snapshot({scene, farm}, "000042", 1234567890123456789ULL,
                                                 "owf-small");
    const onto::OntologySnapshot snap = onto::parse_snapshot(doc);
    CHECK(snap.example_id == "000042");
    CHECK(snap.rng_seed == 1234567890123456789ULL);
    CHECK(snap.composition_class == "owf-small");
    REQUIRE(snap.specifications.size() == 2);
    CHECK(snap.specifications[0] == scene);
    CHECK(snap.specifications[1] == farm);

    // serialization is canonical: write(parse(write)) is byte-identical
    CHECK(onto::write_snapshot(snap.specifications, snap.example_id, snap.rng_seed,
                               snap.composition_class) == doc);
}

TEST_CASE("format_number renders shortest round-trip decimals") {
    CHECK(onto::format_number(1.0) == "1");
    CHECK(onto::format_number(0.5) == "0.5");
    CHECK(onto::format_number(20480) == "20480");
    const double v = 0.1234567890123456789;
    CHECK(std::stod(onto::format_number(v)) == v);
}
