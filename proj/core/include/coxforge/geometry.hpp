#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coxforge/diagram.hpp"
#include "coxforge/extint.hpp"
#include "coxforge/verdict.hpp"

namespace coxforge {

using VertexId = int;

// A flag: vertex ids sorted ascending, pairwise incident, at most one
// vertex per type.
using Flag = std::vector<VertexId>;

// Typed vertex set with a symmetric incidence relation. Vertices of equal
// type are never incident; ids are dense and assigned in creation order.
class Geometry {
 public:
  explicit Geometry(std::vector<std::string> types);

  VertexId add_vertex(int type);
  void add_incidence(VertexId a, VertexId b);

  int vertex_count() const { return static_cast<int>(vertex_type_.size()); }
  int type_count() const { return static_cast<int>(types_.size()); }
  const std::vector<std::string>& types() const { return types_; }
  const std::string& type_label(int t) const { return types_.at(t); }
  int type_index(const std::string& label) const;  // throws on unknown
  int type_of(VertexId v) const;
  const std::vector<VertexId>& neighbors(VertexId v) const;  // ascending
  const std::vector<VertexId>& vertices_of_type(int t) const;
  bool incident(VertexId a, VertexId b) const;
  long long incidence_count() const;

  bool is_flag(std::span<const VertexId> xs) const;
  std::vector<int> flag_types(std::span<const VertexId> xs) const;   // sorted
  std::vector<int> missing_types(std::span<const VertexId> xs) const;
  // Vertices incident with every member of xs, ascending. xs = {} yields all.
  std::vector<VertexId> common_neighbors(std::span<const VertexId> xs) const;

  nlohmann::json to_json() const;
  static Geometry from_json(const nlohmann::json& j);

  bool operator==(const Geometry&) const = default;

 private:
  std::vector<std::string> types_;
  std::vector<int> vertex_type_;
  std::vector<std::vector<VertexId>> adj_;
  std::vector<std::vector<VertexId>> by_type_;
};

// Residue of a flag: the geometry induced on vertices incident with every
// member of the flag, over the flag's missing types. Vertices are re-indexed
// densely; to_parent maps back (ascending in parent ids).
struct Residue {
  Geometry geometry;
  std::vector<VertexId> to_parent;

  std::optional<VertexId> from_parent(VertexId parent) const;
};

Residue make_residue(const Geometry& g, std::span<const VertexId> flag);

// Bipartite restriction to two types of the residue of a flag (empty flag =
// the whole geometry). Vertices keep their original ids.
class Rank2View {
 public:
  static Rank2View build(const Geometry& g, std::span<const VertexId> flag,
                         int type_i, int type_j);

  int size() const { return static_cast<int>(verts_.size()); }
  int left_size() const { return left_count_; }
  int right_size() const { return size() - left_count_; }
  VertexId vertex(int k) const { return verts_.at(k); }
  bool on_left(int k) const { return k < left_count_; }
  std::optional<int> index_of(VertexId v) const;
  const std::vector<int>& adj(int k) const { return adj_.at(k); }

  ExtInt girth() const;
  // A shortest cycle as original vertex ids, canonical rotation; nullopt
  // when acyclic.
  std::optional<std::vector<VertexId>> shortest_cycle() const;
  ExtInt distance(VertexId a, VertexId b) const;
  ExtInt diameter() const;  // infinity when disconnected; 0 on <= 1 vertex
  int min_degree() const;   // 0 on the empty view
  bool thick() const;       // every vertex has degree >= 3
  bool connected() const;
  bool acyclic() const;

 private:
  std::vector<VertexId> verts_;  // left block then right block, each ascending
  int left_count_ = 0;
  std::vector<std::vector<int>> adj_;
};

Rank2View rank2_restriction(const Geometry& g, int type_i, int type_j);

// At least 3 vertices of the single missing type complete the flag.
bool is_thick_corank1(const Geometry& g, std::span<const VertexId> flag);

struct NgonCheck {
  bool pass = true;
  std::string clause;  // "thickness" | "girth" | "diameter" | "connectivity" | "acyclicity"
  ExtInt girth = ExtInt::infinity();
  ExtInt diameter = 0;
  std::vector<VertexId> cycle;  // shortest cycle when relevant
};

// Generalized n-gon test: thick, girth 2n, diameter n. For n = infinity:
// thick, connected and acyclic.
NgonCheck check_generalized_ngon(const Rank2View& view, ExtInt n);
bool is_generalized_ngon(const Rank2View& view, ExtInt n);

// Every flag of corank 2 has a connected residue.
bool is_residually_connected(const Geometry& g);

// Full verification against a diagram: thickness at every corank-1 flag,
// residual connectedness, and every cotype-{i,j} residue a generalized
// m_ij-gon. The witness names the first offending flag and clause.
CheckResult is_geometry_of_type_M(const Geometry& g, const CoxeterDiagram& d);

// Flags of exactly the given (sorted) type set, enumerated by backtracking
// over the types in the given order, vertices ascending. Return false from
// the visitor to stop.
void for_each_flag_of_type(const Geometry& g, std::span<const int> type_set,
                           const std::function<bool(const Flag&)>& visit);

// All flags (including the empty one) ordered by rank, then lexicographically
// on the sorted id vector. Optional rank cap (inclusive); -1 = no cap.
void for_each_flag(const Geometry& g, const std::function<bool(const Flag&)>& visit,
                   int max_rank = -1);

}  // namespace coxforge
