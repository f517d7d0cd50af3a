#include "coxforge/io.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "coxforge/error.hpp"

namespace coxforge {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
  return j;
}

void save_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw Error("write failed for " + path);
}

Geometry load_geometry(const std::string& path) {
  return Geometry::from_json(load_json(path));
}

void save_geometry(const std::string& path, const Geometry& g) {
  save_json(path, g.to_json());
}

CoxeterDiagram load_diagram(const std::string& path) {
  return CoxeterDiagram::from_json(load_json(path));
}

void save_diagram(const std::string& path, const CoxeterDiagram& d) {
  save_json(path, d.to_json());
}

ConstructionState load_free_state(const std::string& path) {
  return ConstructionState::from_json(load_json(path));
}

void save_free_state(const std::string& path, const ConstructionState& s) {
  save_json(path, s.to_json());
}

CnState load_cn_state(const std::string& path) {
  return CnState::from_json(load_json(path));
}

void save_cn_state(const std::string& path, const CnState& s) {
  save_json(path, s.to_json());
}

namespace {

using Triple = std::array<int, 3>;
// A plane structure: its 7 lines as sorted triples, sorted.
using Plane = std::vector<Triple>;

Plane permute_plane(const std::vector<int>& perm, const Plane& p) {
  Plane out;
  out.reserve(p.size());
  for (const Triple& t : p) {
    Triple u{perm[t[0]], perm[t[1]], perm[t[2]]};
    std::sort(u.begin(), u.end());
    out.push_back(u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_even(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 == 0;
}

}  // namespace

Geometry fixture_neumaier() {
  // base plane from the difference set {0,1,3} mod 7
  Plane base;
  for (int i = 0; i < 7; ++i) {
    Triple t{i, (i + 1) % 7, (i + 3) % 7};
    std::sort(t.begin(), t.end());
    base.push_back(t);
  }
  std::sort(base.begin(), base.end());

  std::set<Plane> planes;
  std::vector<int> perm(7);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (is_even(perm)) planes.insert(permute_plane(perm, base));
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<Triple> lines;
  for (int a = 0; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b)
      for (int c = b + 1; c < 7; ++c) lines.push_back({a, b, c});

  Geometry g({"point", "line", "plane"});
  for (int p = 0; p < 7; ++p) g.add_vertex(0);
  std::map<Triple, VertexId> line_id;
  for (const Triple& t : lines) {
    VertexId v = g.add_vertex(1);
    line_id[t] = v;
    for (int p : t) g.add_incidence(p, v);
  }
  for (const Plane& pl : planes) {
    VertexId v = g.add_vertex(2);
    for (int p = 0; p < 7; ++p) g.add_incidence(p, v);
    for (const Triple& t : pl) g.add_incidence(line_id.at(t), v);
  }
  return g;
}

std::string export_dot(const Geometry& g) {
  static const char* kShapes[] = {"ellipse", "box",     "diamond",
                                  "hexagon", "octagon", "trapezium"};
  static const char* kColors[] = {"#cfe2f3", "#d9ead3", "#fce5cd",
                                  "#ead1dc", "#fff2cc", "#d9d2e9"};
  constexpr int kStyles = 6;
  std::ostringstream out;
  out << "graph geometry {\n";
  if (g.vertex_count() > 0) out << "  node [style=filled];\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    int t = g.type_of(v);
    out << "  v" << v << " [label=\"" << g.type_label(t) << " " << v
        << "\", shape=" << kShapes[t % kStyles] << ", fillcolor=\""
        << kColors[t % kStyles] << "\"];\n";
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    for (VertexId w : g.neighbors(v))
      if (v < w) out << "  v" << v << " -- v" << w << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace coxforge
