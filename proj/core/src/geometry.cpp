#include "coxforge/geometry.hpp"

#include <algorithm>
#include <set>

#include "coxforge/error.hpp"
#include "graphutil.hpp"

namespace coxforge {

Geometry::Geometry(std::vector<std::string> types) : types_(std::move(types)) {
  if (types_.empty()) throw Error("geometry: empty type set");
  std::set<std::string> seen;
  for (const auto& t : types_)
    if (!seen.insert(t).second)
      throw Error("geometry: duplicate type label '" + t + "'");
  by_type_.resize(types_.size());
}

int Geometry::type_index(const std::string& label) const {
  for (int i = 0; i < type_count(); ++i)
    if (types_[i] == label) return i;
  throw Error("geometry: unknown type '" + label + "'");
}

VertexId Geometry::add_vertex(int type) {
  if (type < 0 || type >= type_count())
    throw Error("geometry: type index out of range");
  VertexId id = vertex_count();
  vertex_type_.push_back(type);
  adj_.emplace_back();
  by_type_[type].push_back(id);
  return id;
}

int Geometry::type_of(VertexId v) const {
  if (v < 0 || v >= vertex_count()) throw Error("geometry: vertex id out of range");
  return vertex_type_[v];
}

const std::vector<VertexId>& Geometry::neighbors(VertexId v) const {
  if (v < 0 || v >= vertex_count()) throw Error("geometry: vertex id out of range");
  return adj_[v];
}

const std::vector<VertexId>& Geometry::vertices_of_type(int t) const {
  if (t < 0 || t >= type_count()) throw Error("geometry: type index out of range");
  return by_type_[t];
}

void Geometry::add_incidence(VertexId a, VertexId b) {
  if (a == b) throw Error("geometry: a vertex is not incident with itself");
  type_of(a);
  type_of(b);
  if (vertex_type_[a] == vertex_type_[b])
    throw Error("geometry: vertices of equal type are never incident");
  auto& na = adj_[a];
  auto it = std::lower_bound(na.begin(), na.end(), b);
  if (it != na.end() && *it == b) return;  // already present
  na.insert(it, b);
  auto& nb = adj_[b];
  nb.insert(std::lower_bound(nb.begin(), nb.end(), a), a);
}

bool Geometry::incident(VertexId a, VertexId b) const {
  if (a < 0 || b < 0 || a >= vertex_count() || b >= vertex_count())
    throw Error("geometry: vertex id out of range");
  const auto& na = adj_[a];
  return std::binary_search(na.begin(), na.end(), b);
}

long long Geometry::incidence_count() const {
  long long twice = 0;
  for (const auto& n : adj_) twice += static_cast<long long>(n.size());
  return twice / 2;
}

bool Geometry::is_flag(std::span<const VertexId> xs) const {
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = i + 1; j < xs.size(); ++j)
      if (!incident(xs[i], xs[j])) return false;
  return true;
}

std::vector<int> Geometry::flag_types(std::span<const VertexId> xs) const {
  std::vector<int> ts;
  for (VertexId v : xs) ts.push_back(type_of(v));
  std::sort(ts.begin(), ts.end());
  return ts;
}

std::vector<int> Geometry::missing_types(std::span<const VertexId> xs) const {
  std::vector<int> present = flag_types(xs);
  std::vector<int> out;
  for (int t = 0; t < type_count(); ++t)
    if (!std::binary_search(present.begin(), present.end(), t)) out.push_back(t);
  return out;
}

std::vector<VertexId> Geometry::common_neighbors(std::span<const VertexId> xs) const {
  if (xs.empty()) {
    std::vector<VertexId> all(vertex_count());
    for (int v = 0; v < vertex_count(); ++v) all[v] = v;
    return all;
  }
  std::vector<VertexId> cur = neighbors(xs[0]);
  for (size_t i = 1; i < xs.size(); ++i) {
    const auto& n = neighbors(xs[i]);
    std::vector<VertexId> next;
    std::set_intersection(cur.begin(), cur.end(), n.begin(), n.end(),
                          std::back_inserter(next));
    cur = std::move(next);
  }
  return cur;
}

nlohmann::json Geometry::to_json() const {
  nlohmann::json j;
  j["version"] = 1;
  j["types"] = types_;
  nlohmann::json verts = nlohmann::json::array();
  for (int v = 0; v < vertex_count(); ++v) {
    nlohmann::json e;
    e["id"] = v;
    e["type"] = types_[vertex_type_[v]];
    verts.push_back(e);
  }
  j["vertices"] = verts;
  nlohmann::json inc = nlohmann::json::array();
  for (int v = 0; v < vertex_count(); ++v)
    for (VertexId w : adj_[v])
      if (v < w) inc.push_back(nlohmann::json::array({v, w}));
  j["incidences"] = inc;
  return j;
}

Geometry Geometry::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("geometry: expected a JSON object");
  if (j.contains("version") && j["version"] != 1)
    throw Error("geometry: unknown version");
  if (!j.contains("types") || !j["types"].is_array())
    throw Error("geometry: missing \"types\" array");
  Geometry g(j["types"].get<std::vector<std::string>>());
  if (!j.contains("vertices") || !j["vertices"].is_array())
    throw Error("geometry: missing \"vertices\" array");
  int expect = 0;
  for (const auto& v : j["vertices"]) {
    if (!v.is_object() || !v.contains("id") || !v.contains("type"))
      throw Error("geometry: vertex entries need fields id, type");
    if (v["id"].get<int>() != expect)
      throw Error("geometry: vertex ids must be dense and in creation order");
    g.add_vertex(g.type_index(v["type"].get<std::string>()));
    ++expect;
  }
  if (j.contains("incidences")) {
    if (!j["incidences"].is_array())
      throw Error("geometry: \"incidences\" must be an array");
    for (const auto& p : j["incidences"]) {
      if (!p.is_array() || p.size() != 2)
        throw Error("geometry: incidence entries are pairs");
      g.add_incidence(p[0].get<int>(), p[1].get<int>());
    }
  }
  return g;
}

std::optional<VertexId> Residue::from_parent(VertexId parent) const {
  auto it = std::lower_bound(to_parent.begin(), to_parent.end(), parent);
  if (it == to_parent.end() || *it != parent) return std::nullopt;
  return static_cast<VertexId>(it - to_parent.begin());
}

Residue make_residue(const Geometry& g, std::span<const VertexId> flag) {
  if (!g.is_flag(flag)) throw Error("residue: vertex set is not a flag");
  std::vector<int> keep_types = g.missing_types(flag);
  std::vector<std::string> labels;
  for (int t : keep_types) labels.push_back(g.type_label(t));
  if (labels.empty()) labels.push_back("_none");  // rank-0 residue of a maximal flag

  std::vector<VertexId> members;
  for (VertexId v : g.common_neighbors(flag)) {
    int t = g.type_of(v);
    if (std::find(keep_types.begin(), keep_types.end(), t) != keep_types.end())
      members.push_back(v);
  }

  Residue r{Geometry(labels), members};
  std::vector<int> type_map(g.type_count(), -1);
  for (size_t i = 0; i < keep_types.size(); ++i) type_map[keep_types[i]] = static_cast<int>(i);
  for (VertexId v : members) r.geometry.add_vertex(type_map[g.type_of(v)]);
  for (size_t i = 0; i < members.size(); ++i)
    for (size_t k = i + 1; k < members.size(); ++k)
      if (g.incident(members[i], members[k]))
        r.geometry.add_incidence(static_cast<VertexId>(i), static_cast<VertexId>(k));
  return r;
}

Rank2View Rank2View::build(const Geometry& g, std::span<const VertexId> flag,
                           int type_i, int type_j) {
  if (type_i == type_j) throw Error("rank2 view: the two types must differ");
  if (!g.is_flag(flag)) throw Error("rank2 view: vertex set is not a flag");
  for (VertexId v : flag)
    if (g.type_of(v) == type_i || g.type_of(v) == type_j)
      throw Error("rank2 view: flag meets the selected types");

  Rank2View view;
  auto in_residue = [&](VertexId v) {
    for (VertexId x : flag)
      if (!g.incident(v, x)) return false;
    return true;
  };
  for (VertexId v : g.vertices_of_type(type_i))
    if (in_residue(v)) view.verts_.push_back(v);
  view.left_count_ = static_cast<int>(view.verts_.size());
  for (VertexId v : g.vertices_of_type(type_j))
    if (in_residue(v)) view.verts_.push_back(v);

  view.adj_.resize(view.verts_.size());
  for (int a = 0; a < view.left_count_; ++a) {
    const auto& nb = g.neighbors(view.verts_[a]);
    for (int b = view.left_count_; b < view.size(); ++b)
      if (std::binary_search(nb.begin(), nb.end(), view.verts_[b])) {
        view.adj_[a].push_back(b);
        view.adj_[b].push_back(a);
      }
  }
  for (auto& n : view.adj_) std::sort(n.begin(), n.end());
  return view;
}

std::optional<int> Rank2View::index_of(VertexId v) const {
  auto lo = verts_.begin(), mid = verts_.begin() + left_count_;
  auto it = std::lower_bound(lo, mid, v);
  if (it != mid && *it == v) return static_cast<int>(it - lo);
  it = std::lower_bound(mid, verts_.end(), v);
  if (it != verts_.end() && *it == v) return static_cast<int>(it - lo);
  return std::nullopt;
}

ExtInt Rank2View::girth() const { return detail::shortest_cycle(adj_).girth; }

std::optional<std::vector<VertexId>> Rank2View::shortest_cycle() const {
  detail::CycleResult r = detail::shortest_cycle(adj_);
  if (r.girth.is_infinite()) return std::nullopt;
  std::vector<VertexId> out;
  for (int k : r.cycle) out.push_back(verts_[k]);
  return out;
}

ExtInt Rank2View::distance(VertexId a, VertexId b) const {
  auto ia = index_of(a), ib = index_of(b);
  if (!ia || !ib) throw Error("rank2 view: vertex not in view");
  return detail::bfs_distance(adj_, *ia, *ib);
}

ExtInt Rank2View::diameter() const { return detail::graph_diameter(adj_); }

int Rank2View::min_degree() const {
  if (adj_.empty()) return 0;
  size_t d = adj_[0].size();
  for (const auto& n : adj_) d = std::min(d, n.size());
  return static_cast<int>(d);
}

bool Rank2View::thick() const {
  for (const auto& n : adj_)
    if (n.size() < 3) return false;
  return true;
}

bool Rank2View::connected() const { return detail::graph_connected(adj_); }

bool Rank2View::acyclic() const { return girth().is_infinite(); }

Rank2View rank2_restriction(const Geometry& g, int type_i, int type_j) {
  return Rank2View::build(g, {}, type_i, type_j);
}

bool is_thick_corank1(const Geometry& g, std::span<const VertexId> flag) {
  std::vector<int> missing = g.missing_types(flag);
  if (missing.size() != 1) throw Error("thickness: flag must have corank 1");
  if (!g.is_flag(flag)) throw Error("thickness: vertex set is not a flag");
  int count = 0;
  for (VertexId v : g.common_neighbors(flag))
    if (g.type_of(v) == missing[0] && ++count >= 3) return true;
  return false;
}

NgonCheck check_generalized_ngon(const Rank2View& view, ExtInt n) {
  NgonCheck c;
  if (n < ExtInt(2)) throw Error("ngon: n must be >= 2");
  if (!view.thick()) {
    c.pass = false;
    c.clause = "thickness";
    return c;
  }
  if (n.is_infinite()) {
    if (!view.connected()) {
      c.pass = false;
      c.clause = "connectivity";
      return c;
    }
    c.girth = view.girth();
    if (!c.girth.is_infinite()) {
      c.pass = false;
      c.clause = "acyclicity";
      c.cycle = *view.shortest_cycle();
    }
    return c;
  }
  c.girth = view.girth();
  if (c.girth != n.times(2)) {
    c.pass = false;
    c.clause = "girth";
    if (auto cyc = view.shortest_cycle()) c.cycle = *cyc;
    return c;
  }
  c.diameter = view.diameter();
  if (c.diameter != n) {
    c.pass = false;
    c.clause = "diameter";
    return c;
  }
  return c;
}

bool is_generalized_ngon(const Rank2View& view, ExtInt n) {
  return check_generalized_ngon(view, n).pass;
}

namespace {

// Backtracking flag enumeration over an explicit type sequence.
// Chooses one vertex per type, candidates narrowed by incidence.
bool enum_flags_rec(const Geometry& g, std::span<const int> type_seq, size_t pos,
                    std::vector<VertexId>& chosen,
                    std::vector<VertexId> candidates_by_pos,
                    const std::function<bool(const Flag&)>& visit) {
  if (pos == type_seq.size()) {
    Flag f(chosen);
    std::sort(f.begin(), f.end());
    return visit(f);
  }
  for (VertexId v : candidates_by_pos) {
    chosen.push_back(v);
    std::vector<VertexId> next;
    if (pos + 1 < type_seq.size()) {
      const auto& nb = g.neighbors(v);
      for (VertexId w : g.vertices_of_type(type_seq[pos + 1])) {
        bool ok = std::binary_search(nb.begin(), nb.end(), w);
        for (size_t i = 0; ok && i + 1 < chosen.size(); ++i)
          ok = g.incident(chosen[i], w);
        if (ok) next.push_back(w);
      }
    }
    if (!enum_flags_rec(g, type_seq, pos + 1, chosen, std::move(next), visit))
      return false;
    chosen.pop_back();
  }
  return true;
}

}  // namespace

void for_each_flag_of_type(const Geometry& g, std::span<const int> type_set,
                           const std::function<bool(const Flag&)>& visit) {
  if (type_set.empty()) {
    visit({});
    return;
  }
  std::vector<VertexId> first = g.vertices_of_type(type_set[0]);
  std::vector<VertexId> chosen;
  enum_flags_rec(g, type_set, 0, chosen, std::move(first), visit);
}

namespace {

// Cliques of exactly `want` vertices, extending `cur` with ids above `from`.
bool cliques_rec(const Geometry& g, int want, VertexId from, Flag& cur,
                 const std::function<bool(const Flag&)>& visit) {
  if (want == 0) return visit(cur);
  for (VertexId v = from; v < g.vertex_count(); ++v) {
    bool ok = true;
    for (VertexId u : cur)
      if (!g.incident(u, v)) { ok = false; break; }
    if (!ok) continue;
    cur.push_back(v);
    if (!cliques_rec(g, want - 1, v + 1, cur, visit)) return false;
    cur.pop_back();
  }
  return true;
}

}  // namespace

void for_each_flag(const Geometry& g, const std::function<bool(const Flag&)>& visit,
                   int max_rank) {
  int top = g.type_count();
  if (max_rank >= 0) top = std::min(top, max_rank);
  for (int r = 0; r <= top; ++r) {
    Flag cur;
    if (!cliques_rec(g, r, 0, cur, visit)) return;
  }
}

bool is_residually_connected(const Geometry& g) {
  const int corank2 = g.type_count() - 2;
  if (corank2 < 0) return true;
  bool ok = true;
  for_each_flag(
      g,
      [&](const Flag& f) {
        if (static_cast<int>(f.size()) != corank2) return true;
        std::vector<VertexId> members;
        for (VertexId v : g.common_neighbors(f)) members.push_back(v);
        detail::AdjList adj(members.size());
        for (size_t i = 0; i < members.size(); ++i)
          for (size_t k = i + 1; k < members.size(); ++k)
            if (g.incident(members[i], members[k])) {
              adj[i].push_back(static_cast<int>(k));
              adj[k].push_back(static_cast<int>(i));
            }
        if (!detail::graph_connected(adj)) {
          ok = false;
          return false;
        }
        return true;
      },
      corank2);
  return ok;
}

CheckResult is_geometry_of_type_M(const Geometry& g, const CoxeterDiagram& d) {
  if (g.types() != d.types())
    throw Error("type-M check: geometry and diagram type sets differ");
  const int k = g.type_count();

  // Thickness at every corank-1 flag.
  if (k >= 1) {
    CheckResult out = CheckResult::ok("typeM");
    bool done = false;
    for_each_flag(
        g,
        [&](const Flag& f) {
          if (static_cast<int>(f.size()) != k - 1) return true;
          if (!is_thick_corank1(g, f)) {
            nlohmann::json w;
            w["clause"] = "thickness";
            w["flag"] = f;
            out = CheckResult::fail("typeM", w);
            done = true;
            return false;
          }
          return true;
        },
        k - 1);
    if (done) return out;
  }

  if (!is_residually_connected(g)) {
    // Re-locate the offending flag for the witness.
    nlohmann::json w;
    w["clause"] = "residual-connectedness";
    for_each_flag(
        g,
        [&](const Flag& f) {
          if (static_cast<int>(f.size()) != k - 2) return true;
          std::vector<VertexId> members = g.common_neighbors(f);
          detail::AdjList adj(members.size());
          for (size_t i = 0; i < members.size(); ++i)
            for (size_t j = i + 1; j < members.size(); ++j)
              if (g.incident(members[i], members[j])) {
                adj[i].push_back(static_cast<int>(j));
                adj[j].push_back(static_cast<int>(i));
              }
          if (!detail::graph_connected(adj)) {
            w["flag"] = f;
            return false;
          }
          return true;
        },
        k - 2);
    return CheckResult::fail("typeM", w);
  }

  // Every cotype-{i,j} residue is a generalized m_ij-gon.
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      std::vector<int> cotype;
      for (int t = 0; t < k; ++t)
        if (t != i && t != j) cotype.push_back(t);
      ExtInt m = d.bond(i, j);
      CheckResult out = CheckResult::ok("typeM");
      bool done = false;
      for_each_flag_of_type(g, cotype, [&](const Flag& f) {
        Rank2View view = Rank2View::build(g, f, i, j);
        NgonCheck c = check_generalized_ngon(view, m);
        if (!c.pass) {
          nlohmann::json w;
          w["clause"] = c.clause;
          w["flag"] = f;
          w["types"] = {g.type_label(i), g.type_label(j)};
          w["expected_gon"] = m.is_infinite() ? nlohmann::json("inf")
                                              : nlohmann::json(m.value());
          if (c.clause == "girth" || c.clause == "acyclicity") {
            w["girth"] = c.girth.is_infinite() ? nlohmann::json("inf")
                                               : nlohmann::json(c.girth.value());
            if (!c.cycle.empty()) w["cycle"] = c.cycle;
          }
          if (c.clause == "diameter")
            w["diameter"] = c.diameter.is_infinite()
                                ? nlohmann::json("inf")
                                : nlohmann::json(c.diameter.value());
          out = CheckResult::fail("typeM", w);
          done = true;
          return false;
        }
        return true;
      });
      if (done) return out;
    }

  return CheckResult::ok("typeM");
}

}  // namespace coxforge
