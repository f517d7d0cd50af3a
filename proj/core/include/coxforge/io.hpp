#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "coxforge/cn_construction.hpp"
#include "coxforge/diagram.hpp"
#include "coxforge/free_construction.hpp"
#include "coxforge/geometry.hpp"

namespace coxforge {

// Parse a JSON file; Error names the path on IO or syntax failure.
nlohmann::json load_json(const std::string& path);

// Write with two-space indentation, sorted keys and a trailing newline, so
// equal values produce byte-identical files.
void save_json(const std::string& path, const nlohmann::json& j);

Geometry load_geometry(const std::string& path);
void save_geometry(const std::string& path, const Geometry& g);

CoxeterDiagram load_diagram(const std::string& path);
void save_diagram(const std::string& path, const CoxeterDiagram& d);

ConstructionState load_free_state(const std::string& path);
void save_free_state(const std::string& path, const ConstructionState& s);

CnState load_cn_state(const std::string& path);
void save_cn_state(const std::string& path, const CnState& s);

// 57-vertex point/line/plane geometry: 7 points, the 35 point triples as
// lines, and the 15 Fano plane structures of one alternating-group orbit as
// planes. Incidence is containment; every point lies in every plane.
Geometry fixture_neumaier();

// Deterministic DOT text: vertices in id order with type-based shapes and
// colors, one edge per incidence, pairs ascending.
std::string export_dot(const Geometry& g);

}  // namespace coxforge
