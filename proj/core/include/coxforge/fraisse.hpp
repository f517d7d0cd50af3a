#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "coxforge/diagram.hpp"
#include "coxforge/free_construction.hpp"
#include "coxforge/geometry.hpp"
#include "coxforge/verdict.hpp"

namespace coxforge {

// A geometry together with its diagram, treated as a structure in the
// language with one type predicate per node, the path functions f_k and the
// common-neighbor functions g_{i,j}. Expected to satisfy the F/P/D checkers;
// check_lstructure verifies rather than the constructor, so closures under
// test can be built first and judged afterward.
struct LStructure {
  Geometry geometry;
  CoxeterDiagram diagram;

  nlohmann::json to_json() const;
  static LStructure from_json(const nlohmann::json& j);
};

// Rank-3 chain with terminal bond 4 or 5, or the rank-4 chain with bonds
// 3,4,3: the diagram shapes the amalgamation class is defined over.
bool is_amalgamation_diagram(const CoxeterDiagram& d);

// Diagram shape, type-universe agreement and the F/P/D checkers.
std::vector<CheckResult> check_lstructure(const LStructure& s);

// Vertex map from one structure into another, stored densely by source id.
struct Embedding {
  std::vector<VertexId> map;

  VertexId operator()(VertexId v) const { return map.at(v); }
  nlohmann::json to_json() const;
  static Embedding from_json(const nlohmann::json& j);
};

// Injectivity, type preservation and two-way incidence preservation; with
// check_functions also commutation with every f_k (k up to both structures'
// path bounds) and every g_{i,j} on bonds >= 4, each side evaluated in its
// own geometry.
CheckResult check_embedding(const LStructure& a, const LStructure& b,
                            const Embedding& e, bool check_functions = false);

// k-th vertex of the unique shortest path from y to z inside the residue of
// x, when y and z lie there, exactly one shortest path exists as a vertex
// sequence, and k is within its length; otherwise x. Total.
VertexId eval_f(const LStructure& s, int k, VertexId x, VertexId y, VertexId z);

// The unique common type-j neighbor of the type-i vertices x and y when it
// exists; otherwise x. Requires the {i,j} bond to be at least 4.
VertexId eval_g(const LStructure& s, int i, int j, VertexId x, VertexId y);

// Largest finite distance between two vertices of a common residue: bounds
// the f_k indices that can act nontrivially.
int path_index_bound(const LStructure& s);

// Least superset of seed closed under eval_f (k up to the path bound) and
// eval_g, evaluated in s. Returns sorted ids.
std::vector<VertexId> generated_closure(const LStructure& s,
                                        const std::vector<VertexId>& seed);

struct Substructure {
  LStructure structure;
  std::vector<VertexId> base_vertices;  // ascending ids in the parent
  Embedding inclusion;                  // structure -> parent
};

// Closure of seed with the induced geometry and its inclusion embedding.
Substructure generated_substructure(const LStructure& s,
                                    const std::vector<VertexId>& seed);

struct AmalgamResult {
  LStructure structure;
  Embedding lambda;  // b -> structure
  Embedding mu;      // c -> structure
};

// b and c glued along a (iota(v) identified with kappa(v)), plus the forced
// incidences between the two private parts on non-adjacent distinct types.
// Validates both embeddings including function commutation, asserts F/P/D
// on the result and returns it with the canonical embeddings, which satisfy
// lambda(iota(v)) == mu(kappa(v)).
AmalgamResult free_amalgam(const LStructure& a, const LStructure& b,
                           const LStructure& c, const Embedding& iota,
                           const Embedding& kappa);

// Rounds of the construction driver restricted to path-insertion tasks
// (caps for the other procedures forced to zero).
LStructure close_into_class(const LStructure& s, int rounds, const Caps& caps);

struct ApReport {
  int samples = 0;
  int size_bound = 0;
  unsigned long long seed = 0;
  int ap_pass = 0;
  int ap_fail = 0;
  int hp_pass = 0;
  int hp_fail = 0;
  int jep_samples = 0;       // samples whose base structure was empty
  int fallback_empty_a = 0;  // draws that fell back to an empty base
  int redraws = 0;           // embedding draws rejected before amalgamating
  std::vector<nlohmann::json> failures;

  nlohmann::json to_json() const;
};

// Samples triples (A, B, C) of generated substructures of a small
// constructed geometry with inclusion embeddings, redrawing until the
// embeddings validate, then amalgamates, closes and checks the commuting
// square plus survival of B and C. Hereditary checks run alongside on
// closures of random subsets. A is empty on every fifth sample, covering
// joint embedding.
ApReport check_amalgamation_property(const CoxeterDiagram& diagram, int samples,
                                     int size_bound,
                                     unsigned long long seed = 0);

struct PartialIso {
  std::vector<std::pair<VertexId, VertexId>> pairs;  // sorted by first

  nlohmann::json to_json() const;
};

struct ExtendReport {
  bool extended = false;
  std::string outcome;  // "extended", "no-candidate", "budget-exhausted"
  PartialIso iso;
  long long nodes = 0;

  nlohmann::json to_json() const;
};

// One back-and-forth step: finds an image for target (candidates in id
// order) such that the forced extension between the generated closures of
// domain+target and image+candidate is an isomorphism. Every function
// evaluation costs one node from the budget. Throws if iso is not an
// isomorphism between generated substructures or target is in its domain.
ExtendReport extend_partial_iso(const LStructure& s, const PartialIso& iso,
                                VertexId target, long long budget = 200000);

}  // namespace coxforge
