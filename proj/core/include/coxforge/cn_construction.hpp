#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coxforge/substrate.hpp"
#include "coxforge/verdict.hpp"

namespace coxforge {

using VertexId = int;

// Vertex provenance in a chain-diagram state over the subspace substrate.
//  substrate: a subspace of Q^n, type = its dimension.
//  panel:     a new type-(n-1) vertex carrying a precursor hyperplane; its
//             lower-type incidences are the subspaces inside the precursor.
//  top:       a type-n vertex; incident with every vertex of type <= n-2 and
//             holding one (mostly implicit) panel vertex per hyperplane.
enum class CnKind { substrate, panel, top };

struct CnTriple {
  Subspace z;  // dimension n-2
  VertexId x = -1;
  VertexId y = -1;

  nlohmann::json to_json() const;
};

struct CnStepRecord {
  int step = 0;
  int list = 0;     // schedule list consumed at this step
  int skipped = 0;  // invalidated triples passed over first
  nlohmann::json triple;
  std::vector<VertexId> created;
  // precursor keys picked for the path's type-(n-1) vertices, in path
  // order; endpoint keys are excluded since they are given, not picked
  std::vector<std::string> path_precursors;
};

// Materialized slice of a rank-2 residue: local adjacency over original ids.
struct LocalGraph {
  std::vector<VertexId> ids;  // ascending
  std::vector<std::vector<int>> adj;

  std::optional<int> index_of(VertexId v) const;
};

// Partial geometry over the lazy subspace substrate for a chain diagram of
// rank n whose terminal bond is m. Substrate vertices materialize when
// referenced; top vertices keep their panel maps implicit except for the
// entries realized as explicit edges.
class CnState {
 public:
  CnState(int n, int m);

  int n() const { return n_; }
  int m() const { return m_; }
  const SubstrateHandle& substrate() const { return substrate_; }

  int vertex_count() const { return static_cast<int>(kind_.size()); }
  CnKind kind_of(VertexId v) const;
  int type_of(VertexId v) const;
  // Substrate vertex: its subspace. Panel vertex: its precursor.
  const Subspace& space_of(VertexId v) const;
  std::vector<VertexId> vertices_of_type(int t) const;
  std::vector<VertexId> vertices_of_kind(CnKind k) const;

  // Incidence over materialized vertices: substrate pairs by nesting, panel
  // to low types by precursor containment, top to low types always, and
  // explicit path edges between tops and type-(n-1) vertices.
  bool incident(VertexId a, VertexId b) const;
  const std::vector<VertexId>& explicit_neighbors(VertexId v) const;

  std::optional<VertexId> find_substrate(const Subspace& s) const;
  VertexId ensure_substrate(const Subspace& s);

  // The hyperplane key a type-(n-1) vertex answers to: a panel's precursor,
  // a substrate hyperplane itself.
  const Subspace& key_of(VertexId v) const;
  // Materialized panel entries of a top, keyed by hyperplane. Throws on a
  // duplicate key (a broken panel map).
  std::map<Subspace, VertexId> panel_entries(VertexId top) const;

  // The panel vertex of `top` at exactly the hyperplane `h`, materializing
  // a fresh degree-1 vertex when the entry is still implicit.
  VertexId materialize_panel_at(VertexId top, const Subspace& h);

  // A panel vertex of `top` containing z whose only top is `top`: reuses the
  // least-id such neighbor, otherwise materializes a fresh one whose
  // precursor avoids the top's existing keys and `avoid`.
  VertexId select_fresh_panel_vertex(VertexId top, const Subspace& z,
                                     const std::set<Subspace>& avoid = {});

  int step() const { return step_; }
  long long height() const { return height_; }
  const std::vector<CnStepRecord>& log() const { return log_; }

  nlohmann::json to_json() const;
  static CnState from_json(const nlohmann::json& j);

 private:
  friend struct CnOps;

  CnState(int n, int m, bool seed);

  VertexId add_vertex(CnKind k, int type, std::optional<Subspace> space);
  void add_edge(VertexId a, VertexId b);

  int n_, m_;
  SubstrateHandle substrate_;
  std::vector<CnKind> kind_;
  std::vector<int> type_;
  std::vector<std::optional<Subspace>> space_;
  std::vector<std::vector<VertexId>> adj_;  // explicit edges only, sorted
  std::map<Subspace, VertexId> substrate_index_;
  std::vector<std::vector<VertexId>> by_type_;

  struct ScheduleList {
    std::vector<CnTriple> triples;
    size_t cursor = 0;
    std::vector<VertexId> scope;  // empty: unrestricted
    std::set<std::string> seen;
  };
  std::vector<ScheduleList> lists_;
  int step_ = 0;
  long long height_ = 0;
  std::vector<CnStepRecord> log_;
};

// Initial state: the lazy substrate, one unattached panel vertex whose
// precursor is the span of the first n-1 axes, and one top vertex with a
// fully implicit panel map. Requires n >= 3 and 4 <= m (finite).
CnState init_cn(int n, int m);

// Materialized {n-1, n} residue at a dimension-(n-2) subspace z: the
// type-(n-1) vertices whose key contains z, every top, and the explicit
// edges among them. Implicit panel vertices are degree-1 leaves there, so
// girth and pairwise distances read off this graph exactly.
LocalGraph residue_at(const CnState& s, const Subspace& z);

// Deterministic endpoint-pair sweep: z runs over dimension-(n-2) subspaces
// up to the coordinate height bound in canonical order; candidate endpoints
// are the materialized type-(n-1)/top vertices at z plus the substrate
// hyperplanes through z within the bound (materialized by the sweep);
// pairs need type parity (equal iff m odd) and distance >= m+1 at z.
std::vector<CnTriple> viable_triples(CnState& s, long long height, int limit);

bool triple_viable(const CnState& s, const CnTriple& t);

// Adds a path of m-1 edges from t.x to t.y alternating types n-1 and n.
// Panel vertices adjacent to an endpoint top come from
// select_fresh_panel_vertex; the other new panel vertices take fresh
// pairwise-distinct precursors containing z. Returns created ids.
std::vector<VertexId> extend(CnState& s, const CnTriple& t);

struct CnRunOptions {
  long long height = 3;
  int limit = 100;
  bool check_every_step = false;
  int property_sample = 8;
};

// Executes `steps` scheduler steps. Step j consumes the first still-viable
// triple of list nu2(j) (skipping invalidated ones), extending the geometry;
// exhausted lists refill from sweeps, raising the height bound when stuck.
// After step j a new list is appended holding triples that involve step-j
// vertices. Throws VerificationError if a property fails afterward (or after
// every step with check_every_step).
void run_cn(CnState& s, int steps, const CnRunOptions& opts);

// The six state properties, in order: F (tops incident with all low types),
// I (finite top count), V (new vertices only of types n-1 and n), P (girth
// >= 2m at every referenced dimension-(n-2) subspace), H (panel incidences
// match precursor containment on samples), C (per-top panel keys distinct,
// sampled hyperplanes covered exactly once).
std::vector<CheckResult> check_cn_properties(CnState& s, int sample = 8);

// PASS iff this top's panel map, sampled over `sample` hyperplanes
// (materialized entries first, then canonical order), is a bijection onto
// distinct type-(n-1) vertices and sampled residue incidence equals
// subspace nesting.
CheckResult verify_type_n_residue(CnState& s, VertexId top, int sample);

// Exponent of 2 in j (j >= 1).
int nu2(long long j);

}  // namespace coxforge
