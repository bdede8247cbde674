#include "synteo/ontology.hpp"

namespace synteo::onto {

// Offshore wind farm ontology shipped with the toolkit. The Scene entity
// carries the keys the composer resolves from the recipe and the composed
// geometry; everything downstream reacts to them through context links.
const std::string& builtin_ontology_xml() {
    static const std::string text = R"ONTO(<?xml version="1.0" encoding="UTF-8"?>
<ontology version="1">
  <scene-defaults scene-size="20480" sensor-resolution="10"/>
  <entity name="Scene">
    <characteristic name="owf-class">
      <dimension kind="choice-set">
        <choice key="small" value="0"/>
        <choice key="medium" value="1"/>
        <choice key="large" value="2"/>
      </dimension>
    </characteristic>
    <characteristic name="land-proximity">
      <dimension kind="choice-set">
        <choice key="far" value="0"/>
        <choice key="near" value="1"/>
      </dimension>
    </characteristic>
    <characteristic name="sea-mode">
      <dimension kind="choice-set">
        <choice key="constant" value="0"/>
        <choice key="template" value="1"/>
      </dimension>
    </characteristic>
    <characteristic name="texture-mode">
      <dimension kind="choice-set">
        <choice key="standard" value="0"/>
        <choice key="tidal" value="1"/>
      </dimension>
    </characteristic>
    <characteristic name="coast">
      <dimension kind="choice-set">
        <choice key="off" value="0"/>
        <choice key="on" value="1"/>
      </dimension>
    </characteristic>
    <context characteristic="land-proximity" target-entity="WindFarm" target-characteristic="size">
      <case key="near">
        <dimension kind="choice-set" unit="m">
          <choice key="small" value="5000"/>
        </dimension>
      </case>
    </context>
    <context characteristic="owf-class" target-entity="WindFarm" target-characteristic="size">
      <case key="small">
        <dimension kind="choice-set" unit="m">
          <choice key="small" value="5000"/>
        </dimension>
      </case>
      <case key="medium">
        <dimension kind="choice-set" unit="m">
          <choice key="medium" value="10000"/>
        </dimension>
      </case>
      <case key="large">
        <dimension kind="choice-set" unit="m">
          <choice key="large" value="17000"/>
        </dimension>
      </case>
    </context>
    <context characteristic="texture-mode" target-entity="WindTurbine" target-characteristic="kernel-kind">
      <case key="tidal">
        <dimension kind="choice-set">
          <choice key="gaussian" value="0"/>
          <choice key="x-pattern" value="1"/>
          <choice key="tidal-damped" value="2"/>
        </dimension>
      </case>
    </context>
    <context characteristic="sea-mode" target-entity="Sea" target-characteristic="texture">
      <case key="constant">
        <dimension kind="uniform-range" lower="25" upper="55"/>
      </case>
    </context>
    <context characteristic="sea-mode" target-entity="Land" target-characteristic="texture">
      <case key="constant">
        <dimension kind="uniform-range" lower="90" upper="140"/>
      </case>
    </context>
    <context characteristic="sea-mode" target-entity="Coast" target-characteristic="texture">
      <case key="constant">
        <dimension kind="uniform-range" lower="60" upper="90"/>
      </case>
    </context>
  </entity>
  <entity name="WindFarm">
    <characteristic name="size">
      <dimension kind="choice-set" unit="m">
        <choice key="small" value="5000"/>
        <choice key="medium" value="10000"/>
        <choice key="large" value="17000"/>
      </dimension>
    </characteristic>
    <characteristic name="grid-lines-x">
      <dimension kind="discrete-uniform-range" lower="4" upper="10"/>
    </characteristic>
    <characteristic name="grid-lines-y">
      <dimension kind="discrete-uniform-range" lower="4" upper="10"/>
    </characteristic>
    <characteristic name="boundary-vertices">
      <dimension kind="discrete-uniform-range" lower="4" upper="5"/>
    </characteristic>
    <characteristic name="min-vertex-distance">
      <dimension kind="uniform-range" lower="0.2" upper="0.35"/>
    </characteristic>
    <characteristic name="deformation">
      <dimension kind="choice-set">
        <choice key="identity" value="0"/>
        <choice key="rotation" value="1"/>
        <choice key="shear" value="2"/>
        <choice key="sine-warp" value="3"/>
        <choice key="projective" value="4"/>
      </dimension>
    </characteristic>
    <relation predicate="MustNotOverlap" object="Land"/>
    <context characteristic="size" target-entity="WindFarm" target-characteristic="grid-lines-x">
      <case key="small">
        <dimension kind="discrete-uniform-range" lower="6" upper="10"/>
      </case>
      <case key="medium">
        <dimension kind="discrete-uniform-range" lower="5" upper="8"/>
      </case>
      <case key="large">
        <dimension kind="discrete-uniform-range" lower="4" upper="6"/>
      </case>
    </context>
    <context characteristic="size" target-entity="WindFarm" target-characteristic="grid-lines-y">
      <case key="small">
        <dimension kind="discrete-uniform-range" lower="6" upper="10"/>
      </case>
      <case key="medium">
        <dimension kind="discrete-uniform-range" lower="5" upper="8"/>
      </case>
      <case key="large">
        <dimension kind="discrete-uniform-range" lower="4" upper="6"/>
      </case>
    </context>
    <context characteristic="size" target-entity="WindFarm" target-characteristic="min-vertex-distance">
      <case key="small">
        <dimension kind="uniform-range" lower="0.25" upper="0.35"/>
      </case>
      <case key="medium">
        <dimension kind="uniform-range" lower="0.22" upper="0.3"/>
      </case>
      <case key="large">
        <dimension kind="uniform-range" lower="0.2" upper="0.28"/>
      </case>
    </context>
  </entity>
  <entity name="WindTurbine">
    <characteristic name="kernel-kind">
      <dimension kind="choice-set">
        <choice key="gaussian" value="0"/>
        <choice key="x-pattern" value="1"/>
      </dimension>
    </characteristic>
    <characteristic name="kernel-radius">
      <dimension kind="constant" unit="px" value="6"/>
    </characteristic>
    <characteristic name="amplitude">
      <dimension kind="uniform-range" lower="140" upper="200"/>
    </characteristic>
    <characteristic name="sigma-frac">
      <dimension kind="constant" value="0.28"/>
    </characteristic>
    <characteristic name="damping">
      <dimension kind="uniform-range" lower="0.1" upper="0.4"/>
    </characteristic>
    <relation predicate="MustBeCoincidentWith" object="WindFarm"/>
  </entity>
  <entity name="RigField">
    <characteristic name="rig-count">
      <dimension kind="discrete-uniform-range" lower="5" upper="60"/>
    </characteristic>
    <characteristic name="noise-threshold">
      <dimension kind="uniform-range" lower="0.15" upper="0.45"/>
    </characteristic>
    <characteristic name="diameter">
      <dimension kind="uniform-range" unit="m" lower="200" upper="20000"/>
    </characteristic>
    <relation predicate="MustNotOverlap" object="Land"/>
  </entity>
  <entity name="Rig">
    <characteristic name="kernel-radius">
      <dimension kind="constant" unit="px" value="4"/>
    </characteristic>
    <characteristic name="amplitude">
      <dimension kind="uniform-range" lower="110" upper="180"/>
    </characteristic>
    <characteristic name="sigma-frac">
      <dimension kind="constant" value="0.3"/>
    </characteristic>
    <relation predicate="MustBeCoincidentWith" object="RigField"/>
  </entity>
  <entity name="Sea">
    <characteristic name="texture">
      <dimension kind="template-query" query="sea"/>
    </characteristic>
  </entity>
  <entity name="Land">
    <characteristic name="texture">
      <dimension kind="template-query" query="land"/>
    </characteristic>
  </entity>
  <entity name="Coast">
    <characteristic name="width">
      <dimension kind="uniform-range" unit="m" lower="200" upper="2000"/>
    </characteristic>
    <characteristic name="texture">
      <dimension kind="template-query" query="coast-mix"/>
    </characteristic>
  </entity>
</ontology>
)ONTO";
    return text;
}

}  // namespace synteo::onto
