#include "coxforge/free_construction.hpp"

#include <algorithm>
#include <map>

#include "coxforge/error.hpp"
#include "coxforge/free_properties.hpp"
#include "graphutil.hpp"

namespace coxforge {

namespace {

// Incidences forced on a new vertex of type t: every existing vertex whose
// type is distinct from and non-adjacent to t.
void add_forced_incidences(Geometry& g, const CoxeterDiagram& d, VertexId v,
                           int t) {
  for (int u : non_adjacent_types(d, t))
    for (VertexId w : g.vertices_of_type(u)) g.add_incidence(v, w);
}

void link_vertex(Geometry& g, const CoxeterDiagram& d, VertexId v, int t,
                 VertexId prev, const Flag& X) {
  g.add_incidence(v, prev);
  for (VertexId w : X) g.add_incidence(v, w);
  add_forced_incidences(g, d, v, t);
}

// Component label per residue member, or nullopt when x is not supplied.
// Members are the residue of X; labels index detail::components output.
struct ResidueComponents {
  std::vector<VertexId> members;  // ascending
  std::vector<int> label;        // parallel to members
  int count = 0;

  std::optional<int> label_of(VertexId v) const {
    auto it = std::lower_bound(members.begin(), members.end(), v);
    if (it == members.end() || *it != v) return std::nullopt;
    return label[it - members.begin()];
  }
};

ResidueComponents residue_components(const Geometry& g, const Flag& X) {
  ResidueComponents rc;
  rc.members = g.common_neighbors(X);
  detail::AdjList adj(rc.members.size());
  for (size_t a = 0; a < rc.members.size(); ++a) {
    const auto& nb = g.neighbors(rc.members[a]);
    for (size_t b = a + 1; b < rc.members.size(); ++b)
      if (std::binary_search(nb.begin(), nb.end(), rc.members[b])) {
        adj[a].push_back(static_cast<int>(b));
        adj[b].push_back(static_cast<int>(a));
      }
  }
  rc.label = detail::components(adj);
  rc.count = rc.label.empty() ? 0 : *std::max_element(rc.label.begin(), rc.label.end()) + 1;
  return rc;
}

std::string kind_name(TaskKind k) {
  switch (k) {
    case TaskKind::A: return "A";
    case TaskKind::B: return "B";
    case TaskKind::C: return "C";
  }
  return "?";
}

}  // namespace

nlohmann::json Task::to_json(const Geometry& g) const {
  nlohmann::json j;
  j["kind"] = kind_name(kind);
  j["flag"] = flag;
  if (kind == TaskKind::A) {
    j["type"] = g.type_label(type_i);
  } else {
    j["types"] = {g.type_label(type_i), g.type_label(type_j)};
    j["x"] = x;
    j["y"] = y;
  }
  return j;
}

ConstructionState make_state(const CoxeterDiagram& d, Geometry seed) {
  if (d.has_a3_subdiagram())
    throw Error(
        "free construction: diagram contains a chain of two 3-bonds with "
        "non-adjacent ends; such diagrams are not supported");
  CheckResult r = check_fpd(seed, d);
  if (!r.pass) {
    nlohmann::json w;
    w["property"] = r.property;
    w["witness"] = r.witness;
    throw VerificationError("free construction: seed violates a stage invariant", w);
  }
  return ConstructionState{d, std::move(seed), 0, {}};
}

VertexId procedure_a(ConstructionState& s, const Flag& X, int i) {
  Geometry& g = s.geometry;
  if (!g.is_flag(X)) throw Error("procedure A: not a flag");
  std::vector<int> present = g.flag_types(X);
  if (std::binary_search(present.begin(), present.end(), i))
    throw Error("procedure A: flag already holds the requested type");
  VertexId v = g.add_vertex(i);
  for (VertexId w : X) g.add_incidence(v, w);
  add_forced_incidences(g, s.diagram, v, i);
  return v;
}

std::vector<VertexId> procedure_b(ConstructionState& s, const Flag& X, int i,
                                  int j, VertexId x, VertexId y) {
  Geometry& g = s.geometry;
  const CoxeterDiagram& d = s.diagram;
  if (i == j || !d.adjacent(i, j)) throw Error("procedure B: types must be adjacent");
  ExtInt m = d.bond(i, j);
  if (m.is_infinite()) throw Error("procedure B: infinite bond");
  long long mv = m.value();
  if (!g.is_flag(X)) throw Error("procedure B: not a flag");
  if (g.flag_types(X) != p_context(d, i, j))
    throw Error("procedure B: flag type set must be the bond's context types");
  int tx = g.type_of(x), ty = g.type_of(y);
  if ((tx != i && tx != j) || (ty != i && ty != j))
    throw Error("procedure B: endpoint types outside the bond");
  if ((tx == ty) != (mv % 2 == 1))
    throw Error("procedure B: endpoint types must agree exactly when the bond is odd");
  Rank2View view = Rank2View::build(g, X, i, j);
  if (!view.index_of(x) || !view.index_of(y))
    throw Error("procedure B: endpoint not in the residue");
  if (view.distance(x, y) < ExtInt(mv + 1))
    throw Error("procedure B: endpoints too close");

  std::vector<VertexId> created;
  VertexId prev = x;
  int other = (tx == i) ? j : i;
  for (long long k = 1; k <= mv - 2; ++k) {
    int t = (k % 2 == 0) ? tx : other;
    VertexId v = g.add_vertex(t);
    link_vertex(g, d, v, t, prev, X);
    created.push_back(v);
    prev = v;
  }
  g.add_incidence(prev, y);
  return created;
}

std::vector<VertexId> procedure_c(ConstructionState& s, const Flag& X, int i,
                                  int j, VertexId x, VertexId y) {
  Geometry& g = s.geometry;
  const CoxeterDiagram& d = s.diagram;
  if (!g.is_flag(X)) throw Error("procedure C: not a flag");
  std::vector<int> missing = g.missing_types(X);
  if (missing.size() < 2) throw Error("procedure C: flag corank must be >= 2");
  if (i == j || !std::binary_search(missing.begin(), missing.end(), i) ||
      !std::binary_search(missing.begin(), missing.end(), j))
    throw Error("procedure C: types must be distinct and missing from the flag");
  int tx = g.type_of(x), ty = g.type_of(y);
  if ((tx != i && tx != j) || (ty != i && ty != j))
    throw Error("procedure C: endpoint types outside the selected pair");
  ResidueComponents rc = residue_components(g, X);
  auto cx = rc.label_of(x), cy = rc.label_of(y);
  if (!cx || !cy) throw Error("procedure C: endpoint not in the residue");
  if (*cx == *cy) throw Error("procedure C: endpoints already connected");

  long long len = (tx == ty) ? 4 : 5;
  int other = (tx == i) ? j : i;
  std::vector<VertexId> created;
  VertexId prev = x;
  for (long long k = 1; k <= len - 1; ++k) {
    int t = (k % 2 == 0) ? tx : other;
    VertexId v = g.add_vertex(t);
    link_vertex(g, d, v, t, prev, X);
    created.push_back(v);
    prev = v;
  }
  g.add_incidence(prev, y);
  return created;
}

bool task_viable(const ConstructionState& s, const Task& t) {
  const Geometry& g = s.geometry;
  const CoxeterDiagram& d = s.diagram;
  if (!g.is_flag(t.flag)) return false;
  std::vector<int> present = g.flag_types(t.flag);
  switch (t.kind) {
    case TaskKind::A:
      return t.type_i >= 0 && t.type_i < d.rank() &&
             !std::binary_search(present.begin(), present.end(), t.type_i);
    case TaskKind::B: {
      if (t.type_i == t.type_j || !d.adjacent(t.type_i, t.type_j)) return false;
      ExtInt m = d.bond(t.type_i, t.type_j);
      if (m.is_infinite()) return false;
      if (present != p_context(d, t.type_i, t.type_j)) return false;
      int tx = g.type_of(t.x), ty = g.type_of(t.y);
      if ((tx != t.type_i && tx != t.type_j) || (ty != t.type_i && ty != t.type_j))
        return false;
      if ((tx == ty) != (m.value() % 2 == 1)) return false;
      Rank2View view = Rank2View::build(g, t.flag, t.type_i, t.type_j);
      if (!view.index_of(t.x) || !view.index_of(t.y)) return false;
      return view.distance(t.x, t.y) >= ExtInt(m.value() + 1);
    }
    case TaskKind::C: {
      std::vector<int> missing = g.missing_types(t.flag);
      if (missing.size() < 2) return false;
      if (t.type_i == t.type_j ||
          !std::binary_search(missing.begin(), missing.end(), t.type_i) ||
          !std::binary_search(missing.begin(), missing.end(), t.type_j))
        return false;
      int tx = g.type_of(t.x), ty = g.type_of(t.y);
      if ((tx != t.type_i && tx != t.type_j) || (ty != t.type_i && ty != t.type_j))
        return false;
      ResidueComponents rc = residue_components(g, t.flag);
      auto cx = rc.label_of(t.x), cy = rc.label_of(t.y);
      return cx && cy && *cx != *cy;
    }
  }
  return false;
}

std::vector<Task> enumerate_tasks(const ConstructionState& s, const Caps& caps) {
  const Geometry& g = s.geometry;
  const CoxeterDiagram& d = s.diagram;
  std::vector<Task> out;

  if (caps.a > 0) {
    int taken = 0;
    for_each_flag(g, [&](const Flag& f) {
      for (int t : g.missing_types(f)) {
        out.push_back(Task{TaskKind::A, f, t, -1, -1, -1});
        if (++taken >= caps.a) return false;
      }
      return true;
    });
  }

  if (caps.b > 0) {
    // Bond contexts, grouped by their type set so each flag is matched once.
    std::map<std::vector<int>, std::vector<std::pair<int, int>>> contexts;
    int max_ctx = 0;
    for (int i = 0; i < d.rank(); ++i)
      for (int j = i + 1; j < d.rank(); ++j)
        if (d.adjacent(i, j) && d.bond(i, j).is_finite()) {
          std::vector<int> ctx = p_context(d, i, j);
          max_ctx = std::max(max_ctx, static_cast<int>(ctx.size()));
          contexts[std::move(ctx)].push_back({i, j});
        }
    int taken = 0;
    for_each_flag(
        g,
        [&](const Flag& f) {
          auto it = contexts.find(g.flag_types(f));
          if (it == contexts.end()) return true;
          for (auto [i, j] : it->second) {
            long long m = d.bond(i, j).value();
            Rank2View view = Rank2View::build(g, f, i, j);
            std::vector<VertexId> ids;
            for (int k = 0; k < view.size(); ++k) ids.push_back(view.vertex(k));
            std::sort(ids.begin(), ids.end());
            for (VertexId x : ids) {
              int tx = g.type_of(x);
              for (VertexId y : ids) {
                if (y <= x) continue;
                int ty = g.type_of(y);
                if ((tx == ty) != (m % 2 == 1)) continue;
                if (view.distance(x, y) < ExtInt(m + 1)) continue;
                out.push_back(Task{TaskKind::B, f, i, j, x, y});
                if (++taken >= caps.b) return false;
              }
            }
          }
          return true;
        },
        max_ctx);
  }

  if (caps.c > 0 && d.rank() >= 2) {
    int taken = 0;
    for_each_flag(
        g,
        [&](const Flag& f) {
          ResidueComponents rc = residue_components(g, f);
          if (rc.count < 2) return true;
          std::vector<int> missing = g.missing_types(f);
          // Least member id per component; members ascending makes this the
          // first member seen with each label.
          std::vector<VertexId> rep(rc.count, -1);
          for (size_t k = 0; k < rc.members.size(); ++k)
            if (rep[rc.label[k]] < 0) rep[rc.label[k]] = rc.members[k];
          for (int a = 0; a < rc.count; ++a)
            for (int b = a + 1; b < rc.count; ++b) {
              VertexId x = rep[a], y = rep[b];
              int tx = g.type_of(x), ty = g.type_of(y);
              int i, j;
              if (tx == ty) {
                i = tx;
                j = -1;
                for (int t : missing)
                  if (t != tx) { j = t; break; }
                if (j < 0) continue;  // corank 2 guarantees a second type
                if (j < i) std::swap(i, j);
              } else {
                i = std::min(tx, ty);
                j = std::max(tx, ty);
              }
              out.push_back(Task{TaskKind::C, f, i, j, x, y});
              if (++taken >= caps.c) return false;
            }
          return true;
        },
        d.rank() - 2);
  }

  return out;
}

void run_round(ConstructionState& s, const RoundOptions& opts) {
  std::vector<Task> tasks = enumerate_tasks(s, opts.caps);
  auto assert_invariants = [&](const Task* t) {
    CheckResult r = check_fpd(s.geometry, s.diagram);
    if (r.pass) return;
    nlohmann::json w;
    w["stage"] = s.stage;
    if (t) w["task"] = t->to_json(s.geometry);
    w["property"] = r.property;
    w["witness"] = r.witness;
    throw VerificationError("free construction: stage invariant violated", w);
  };

  for (const Task& t : tasks) {
    TaskRecord rec{t, false, {}};
    if (task_viable(s, t)) {
      rec.applied = true;
      switch (t.kind) {
        case TaskKind::A:
          rec.created.push_back(procedure_a(s, t.flag, t.type_i));
          break;
        case TaskKind::B:
          rec.created = procedure_b(s, t.flag, t.type_i, t.type_j, t.x, t.y);
          break;
        case TaskKind::C:
          rec.created = procedure_c(s, t.flag, t.type_i, t.type_j, t.x, t.y);
          break;
      }
      if (opts.check_every_task) assert_invariants(&t);
    }
    s.task_log.push_back(std::move(rec));
  }
  assert_invariants(nullptr);
  s.stage += 1;
}

ConstructionState build_free(const CoxeterDiagram& d, Geometry seed, int rounds,
                             const RoundOptions& opts) {
  ConstructionState s = make_state(d, std::move(seed));
  for (int r = 0; r < rounds; ++r) run_round(s, opts);
  return s;
}

nlohmann::json progress_metrics(const ConstructionState& s, int sample_cap) {
  const Geometry& g = s.geometry;
  const CoxeterDiagram& d = s.diagram;
  long long total = 0, non_completable = 0, thin = 0, disconnected = 0;
  const int rank = d.rank();

  for_each_flag(g, [&](const Flag& f) {
    ++total;
    int corank = rank - static_cast<int>(f.size());
    if (corank >= 1) {
      std::vector<int> missing = g.missing_types(f);
      std::vector<VertexId> comp = g.common_neighbors(f);
      for (int t : missing) {
        int found = 0;
        for (VertexId v : comp)
          if (g.type_of(v) == t && ++found >= 3) break;
        if (found == 0) {
          ++non_completable;
          break;
        }
      }
      if (corank == 1) {
        int t = g.missing_types(f)[0];
        int found = 0;
        for (VertexId v : comp)
          if (g.type_of(v) == t && ++found >= 3) break;
        if (found < 3) ++thin;
      }
    }
    if (corank >= 2 && residue_components(g, f).count > 1) ++disconnected;
    return true;
  });

  nlohmann::json diam = nlohmann::json::object();
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j) {
      std::vector<int> cotype;
      for (int t = 0; t < rank; ++t)
        if (t != i && t != j) cotype.push_back(t);
      long long best = -1;
      int seen = 0;
      for_each_flag_of_type(g, cotype, [&](const Flag& f) {
        ExtInt dm = Rank2View::build(g, f, i, j).diameter();
        if (dm.is_finite()) best = std::max(best, dm.value());
        return ++seen < sample_cap;
      });
      std::string key = g.type_label(i) + "," + g.type_label(j);
      diam[key] = (best < 0) ? nlohmann::json() : nlohmann::json(best);
    }

  nlohmann::json out;
  out["total_flags"] = total;
  out["non_completable_flags"] = non_completable;
  out["thin_corank1_flags"] = thin;
  out["disconnected_residues"] = disconnected;
  out["max_finite_diameter"] = diam;
  return out;
}

nlohmann::json ConstructionState::to_json() const {
  nlohmann::json j;
  j["version"] = 1;
  j["diagram"] = diagram.to_json();
  j["geometry"] = geometry.to_json();
  j["stage"] = stage;
  nlohmann::json log = nlohmann::json::array();
  for (const TaskRecord& r : task_log) {
    nlohmann::json e;
    e["task"] = r.task.to_json(geometry);
    e["applied"] = r.applied;
    e["created"] = r.created;
    log.push_back(e);
  }
  j["task_log"] = log;
  return j;
}

ConstructionState ConstructionState::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("diagram") || !j.contains("geometry"))
    throw Error("construction state: missing diagram or geometry");
  if (j.contains("version") && j["version"] != 1)
    throw Error("construction state: unknown version");
  ConstructionState s{CoxeterDiagram::from_json(j["diagram"]),
                      Geometry::from_json(j["geometry"]),
                      j.value("stage", 0),
                      {}};
  if (s.geometry.types() != s.diagram.types())
    throw Error("construction state: geometry and diagram type sets differ");
  if (j.contains("task_log")) {
    for (const auto& e : j["task_log"]) {
      TaskRecord rec;
      const auto& tj = e.at("task");
      std::string kind = tj.at("kind").get<std::string>();
      rec.task.flag = tj.at("flag").get<std::vector<VertexId>>();
      if (kind == "A") {
        rec.task.kind = TaskKind::A;
        rec.task.type_i = s.geometry.type_index(tj.at("type").get<std::string>());
      } else {
        rec.task.kind = (kind == "B") ? TaskKind::B : TaskKind::C;
        rec.task.type_i = s.geometry.type_index(tj.at("types").at(0).get<std::string>());
        rec.task.type_j = s.geometry.type_index(tj.at("types").at(1).get<std::string>());
        rec.task.x = tj.at("x").get<VertexId>();
        rec.task.y = tj.at("y").get<VertexId>();
      }
      rec.applied = e.value("applied", true);
      if (e.contains("created"))
        rec.created = e["created"].get<std::vector<VertexId>>();
      s.task_log.push_back(std::move(rec));
    }
  }
  return s;
}

}  // namespace coxforge
