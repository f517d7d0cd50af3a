#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coxforge/diagram.hpp"
#include "coxforge/geometry.hpp"
#include "coxforge/verdict.hpp"

namespace coxforge {

enum class TaskKind { A, B, C };

// One pending procedure application. A: add a vertex of type_i completing
// flag. B/C: add a path between x and y alternating types {type_i, type_j}.
struct Task {
  TaskKind kind = TaskKind::A;
  Flag flag;
  int type_i = -1;
  int type_j = -1;   // unused for A
  VertexId x = -1;   // unused for A
  VertexId y = -1;   // unused for A

  nlohmann::json to_json(const Geometry& g) const;
};

struct TaskRecord {
  Task task;
  bool applied = false;  // false: invalidated at execution time and skipped
  std::vector<VertexId> created;
};

struct Caps {
  int a = 64;
  int b = 64;
  int c = 64;
};

struct RoundOptions {
  Caps caps;
  bool check_every_task = false;
};

// A construction stage: the geometry so far, its diagram, the stage index
// and the log of every task executed or skipped. The geometry satisfies
// properties F, P, D at every stage boundary.
struct ConstructionState {
  CoxeterDiagram diagram;
  Geometry geometry;
  int stage = 0;
  std::vector<TaskRecord> task_log;

  nlohmann::json to_json() const;
  static ConstructionState from_json(const nlohmann::json& j);
};

// Validates the diagram (no chain i-j-k with bonds 3,3 and i,k non-adjacent)
// and the seed (F, P, D must pass). Throws VerificationError with the
// witness on a seed failure.
ConstructionState make_state(const CoxeterDiagram& d, Geometry seed);

// Adds one vertex of type i incident with every member of X and with every
// existing vertex of a non-adjacent distinct type. Returns the new id.
VertexId procedure_a(ConstructionState& s, const Flag& X, int i);

// Connects x and y by a path of m-1 edges (m the {i,j} bond, finite) whose
// interior vertices are new and alternate between types i and j. Requires
// the flag type set of X to be exactly p_context(i,j), endpoint types in
// {i,j} equal iff m is odd, and distance(x,y) >= m+1 in the {i,j} view of
// the residue of X. New vertices are incident with their path neighbors,
// all of X, and all F-forced vertices. Returns the created ids in path order.
std::vector<VertexId> procedure_b(ConstructionState& s, const Flag& X, int i,
                                  int j, VertexId x, VertexId y);

// Connects two components of the residue of X (corank >= 2) by a path from
// x to y alternating types i,j of length 4 when the endpoint types agree
// and 5 otherwise. Same incidence rule as procedure_b.
std::vector<VertexId> procedure_c(ConstructionState& s, const Flag& X, int i,
                                  int j, VertexId x, VertexId y);

// Checks whether a task's preconditions hold against the current geometry.
bool task_viable(const ConstructionState& s, const Task& t);

// Deterministic task enumeration for one round, ordered by kind (A < B < C),
// then flag rank, flag ids, types, endpoint ids; truncated per kind by caps.
std::vector<Task> enumerate_tasks(const ConstructionState& s, const Caps& caps);

// One stage step: snapshot tasks, apply each in order re-checking viability
// first, then assert F, P, D (after every task when check_every_task).
// Throws VerificationError naming the offending task on a property failure.
void run_round(ConstructionState& s, const RoundOptions& opts);

ConstructionState build_free(const CoxeterDiagram& d, Geometry seed, int rounds,
                             const RoundOptions& opts);

// Convergence counters: flags that cannot be completed in some missing type,
// corank-1 flags with fewer than 3 completions, corank >= 2 flags with a
// disconnected residue, total flag count, and the largest finite diameter
// seen among two-type residue views per bond (capped sample per bond).
nlohmann::json progress_metrics(const ConstructionState& s, int sample_cap = 64);

}  // namespace coxforge
