#include "coxforge/fraisse.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <set>

#include "coxforge/error.hpp"
#include "coxforge/free_properties.hpp"

namespace coxforge {
namespace {

// Shortest-path data from one source inside the residue of x. Members are
// the neighbors of x in ascending order; count is the number of shortest
// paths as vertex sequences, saturated at two.
struct ResidueWalk {
  std::vector<VertexId> members;
  std::vector<int> dist;   // -1 unreachable
  std::vector<int> count;  // 0..2
};

int member_index(const std::vector<VertexId>& members, VertexId v) {
  auto it = std::lower_bound(members.begin(), members.end(), v);
  if (it == members.end() || *it != v) return -1;
  return static_cast<int>(it - members.begin());
}

ResidueWalk residue_walk(const Geometry& g, VertexId x, VertexId y) {
  ResidueWalk w;
  w.members = g.neighbors(x);
  w.dist.assign(w.members.size(), -1);
  w.count.assign(w.members.size(), 0);
  int src = member_index(w.members, y);
  if (src < 0) return w;
  w.dist[src] = 0;
  w.count[src] = 1;
  std::queue<int> q;
  q.push(src);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    const auto& nb = g.neighbors(w.members[u]);
    std::size_t a = 0, b = 0;
    while (a < nb.size() && b < w.members.size()) {
      if (nb[a] < w.members[b]) {
        ++a;
      } else if (w.members[b] < nb[a]) {
        ++b;
      } else {
        int v = static_cast<int>(b);
        if (w.dist[v] < 0) {
          w.dist[v] = w.dist[u] + 1;
          w.count[v] = w.count[u];
          q.push(v);
        } else if (w.dist[v] == w.dist[u] + 1) {
          w.count[v] = std::min(2, w.count[v] + w.count[u]);
        }
        ++a;
        ++b;
      }
    }
  }
  return w;
}

// The unique shortest path source..z when exactly one exists, else empty.
// When the count is one every vertex on the path has a unique neighbor one
// step closer to the source, so walking predecessors reconstructs it.
std::vector<VertexId> unique_path(const Geometry& g, const ResidueWalk& w,
                                  VertexId z) {
  int zi = member_index(w.members, z);
  if (zi < 0 || w.dist[zi] < 0 || w.count[zi] != 1) return {};
  std::vector<VertexId> path(w.dist[zi] + 1);
  int cur = zi;
  for (int d = w.dist[zi]; d >= 0; --d) {
    path[d] = w.members[cur];
    if (d == 0) break;
    const auto& nb = g.neighbors(w.members[cur]);
    std::size_t a = 0, b = 0;
    int pred = -1;
    while (a < nb.size() && b < w.members.size()) {
      if (nb[a] < w.members[b]) {
        ++a;
      } else if (w.members[b] < nb[a]) {
        ++b;
      } else {
        if (w.dist[b] == d - 1) {
          pred = static_cast<int>(b);
          break;
        }
        ++a;
        ++b;
      }
    }
    cur = pred;
  }
  return path;
}

// f_k for k = 0..bound at fixed arguments, one walk total.
std::vector<VertexId> f_row(const LStructure& s, int bound, VertexId x,
                            VertexId y, VertexId z) {
  std::vector<VertexId> out(bound + 1, x);
  const Geometry& g = s.geometry;
  if (!g.incident(x, y) || !g.incident(x, z)) return out;
  ResidueWalk w = residue_walk(g, x, y);
  std::vector<VertexId> path = unique_path(g, w, z);
  for (int k = 0; k <= bound && k < static_cast<int>(path.size()); ++k)
    out[k] = path[k];
  return out;
}

// Ordered type pairs carrying a bond of at least 4.
std::vector<std::pair<int, int>> g_pairs(const CoxeterDiagram& d) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < d.rank(); ++i)
    for (int j = 0; j < d.rank(); ++j)
      if (i != j && d.bond(i, j) >= ExtInt(4)) out.emplace_back(i, j);
  return out;
}

void require_vertex(const Geometry& g, VertexId v, const char* who) {
  if (v < 0 || v >= g.vertex_count())
    throw Error(std::string(who) + ": vertex id out of range");
}

}  // namespace

nlohmann::json LStructure::to_json() const {
  return {{"version", 1},
          {"diagram", diagram.to_json()},
          {"geometry", geometry.to_json()}};
}

LStructure LStructure::from_json(const nlohmann::json& j) {
  if (j.at("version").get<int>() != 1)
    throw Error("lstructure: unsupported version");
  return LStructure{Geometry::from_json(j.at("geometry")),
                    CoxeterDiagram::from_json(j.at("diagram"))};
}

bool is_amalgamation_diagram(const CoxeterDiagram& d) {
  int r = d.rank();
  if (r != 3 && r != 4) return false;
  std::vector<int> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool chain = true;
    for (int a = 0; a < r && chain; ++a)
      for (int b = a + 1; b < r && chain; ++b) {
        ExtInt m = d.bond(perm[a], perm[b]);
        if (b == a + 1) {
          if (m < ExtInt(3)) chain = false;
        } else if (m != ExtInt(2)) {
          chain = false;
        }
      }
    if (!chain) continue;
    if (r == 3) {
      ExtInt last = d.bond(perm[1], perm[2]);
      if (d.bond(perm[0], perm[1]) == ExtInt(3) &&
          (last == ExtInt(4) || last == ExtInt(5)))
        return true;
    } else {
      if (d.bond(perm[0], perm[1]) == ExtInt(3) &&
          d.bond(perm[1], perm[2]) == ExtInt(4) &&
          d.bond(perm[2], perm[3]) == ExtInt(3))
        return true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::vector<CheckResult> check_lstructure(const LStructure& s) {
  std::vector<CheckResult> out;
  if (is_amalgamation_diagram(s.diagram))
    out.push_back(CheckResult::ok("diagram-shape"));
  else
    out.push_back(
        CheckResult::fail("diagram-shape", {{"types", s.diagram.types()}}));
  if (s.geometry.types() == s.diagram.types())
    out.push_back(CheckResult::ok("type-universe"));
  else
    out.push_back(CheckResult::fail("type-universe",
                                    {{"geometry", s.geometry.types()},
                                     {"diagram", s.diagram.types()}}));
  out.push_back(check_F(s.geometry, s.diagram));
  out.push_back(check_P(s.geometry, s.diagram));
  out.push_back(check_D(s.geometry, s.diagram));
  return out;
}

nlohmann::json Embedding::to_json() const {
  return {{"version", 1}, {"map", map}};
}

Embedding Embedding::from_json(const nlohmann::json& j) {
  Embedding e;
  if (j.is_array()) {
    e.map = j.get<std::vector<VertexId>>();
    return e;
  }
  if (j.at("version").get<int>() != 1)
    throw Error("embedding: unsupported version");
  e.map = j.at("map").get<std::vector<VertexId>>();
  return e;
}

CheckResult check_embedding(const LStructure& a, const LStructure& b,
                            const Embedding& e, bool check_functions) {
  const char* prop = "embedding";
  if (!(a.diagram == b.diagram) || a.geometry.types() != b.geometry.types())
    return CheckResult::fail(prop, {{"clause", "type-universe"}});
  const Geometry& ga = a.geometry;
  const Geometry& gb = b.geometry;
  int na = ga.vertex_count();
  if (static_cast<int>(e.map.size()) != na)
    return CheckResult::fail(prop, {{"clause", "arity"},
                                    {"expected", na},
                                    {"got", e.map.size()}});
  std::set<VertexId> image;
  for (VertexId v = 0; v < na; ++v) {
    VertexId w = e.map[v];
    if (w < 0 || w >= gb.vertex_count())
      return CheckResult::fail(prop, {{"clause", "range"}, {"vertex", v}});
    if (!image.insert(w).second)
      return CheckResult::fail(prop,
                               {{"clause", "injectivity"}, {"vertex", v}});
    if (ga.type_of(v) != gb.type_of(w))
      return CheckResult::fail(prop, {{"clause", "type"}, {"vertex", v}});
  }
  for (VertexId u = 0; u < na; ++u)
    for (VertexId v = u + 1; v < na; ++v)
      if (ga.incident(u, v) != gb.incident(e.map[u], e.map[v]))
        return CheckResult::fail(
            prop, {{"clause", "incidence"}, {"pair", {u, v}}});
  if (!check_functions) return CheckResult::ok(prop);

  int bound = std::max(path_index_bound(a), path_index_bound(b));
  for (VertexId x = 0; x < na; ++x) {
    for (VertexId y : ga.neighbors(x)) {
      for (VertexId z : ga.neighbors(x)) {
        std::vector<VertexId> ra = f_row(a, bound, x, y, z);
        std::vector<VertexId> rb =
            f_row(b, bound, e.map[x], e.map[y], e.map[z]);
        for (int k = 0; k <= bound; ++k)
          if (e.map[ra[k]] != rb[k])
            return CheckResult::fail(prop, {{"clause", "f"},
                                            {"k", k},
                                            {"args", {x, y, z}}});
      }
    }
  }
  for (auto [i, j] : g_pairs(a.diagram)) {
    for (VertexId x : ga.vertices_of_type(i)) {
      for (VertexId y : ga.vertices_of_type(i)) {
        if (x == y) continue;
        VertexId va = eval_g(a, i, j, x, y);
        VertexId vb = eval_g(b, i, j, e.map[x], e.map[y]);
        if (e.map[va] != vb)
          return CheckResult::fail(prop, {{"clause", "g"},
                                          {"types", {i, j}},
                                          {"args", {x, y}}});
      }
    }
  }
  return CheckResult::ok(prop);
}

VertexId eval_f(const LStructure& s, int k, VertexId x, VertexId y,
                VertexId z) {
  const Geometry& g = s.geometry;
  require_vertex(g, x, "eval_f");
  require_vertex(g, y, "eval_f");
  require_vertex(g, z, "eval_f");
  if (k < 0) return x;
  if (!g.incident(x, y) || !g.incident(x, z)) return x;
  ResidueWalk w = residue_walk(g, x, y);
  std::vector<VertexId> path = unique_path(g, w, z);
  if (path.empty() || k >= static_cast<int>(path.size())) return x;
  return path[k];
}

VertexId eval_g(const LStructure& s, int i, int j, VertexId x, VertexId y) {
  const CoxeterDiagram& d = s.diagram;
  if (i < 0 || i >= d.rank() || j < 0 || j >= d.rank() || i == j)
    throw Error("eval_g: bad type pair");
  if (d.bond(i, j) < ExtInt(4))
    throw Error("eval_g: bond below 4 between " + d.type_label(i) + " and " +
                d.type_label(j));
  const Geometry& g = s.geometry;
  require_vertex(g, x, "eval_g");
  require_vertex(g, y, "eval_g");
  if (x == y || g.type_of(x) != i || g.type_of(y) != i) return x;
  std::vector<VertexId> args{x, y};
  VertexId found = -1;
  for (VertexId v : g.common_neighbors(args)) {
    if (g.type_of(v) != j) continue;
    if (found >= 0) return x;
    found = v;
  }
  return found >= 0 ? found : x;
}

int path_index_bound(const LStructure& s) {
  const Geometry& g = s.geometry;
  int best = 0;
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    for (VertexId y : g.neighbors(x)) {
      ResidueWalk w = residue_walk(g, x, y);
      for (int d : w.dist) best = std::max(best, d);
    }
  }
  return best;
}

std::vector<VertexId> generated_closure(const LStructure& s,
                                        const std::vector<VertexId>& seed) {
  const Geometry& g = s.geometry;
  std::set<VertexId> cur;
  for (VertexId v : seed) {
    require_vertex(g, v, "generated_closure");
    cur.insert(v);
  }
  std::vector<std::pair<int, int>> gp = g_pairs(s.diagram);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<VertexId> snap(cur.begin(), cur.end());
    for (VertexId x : snap) {
      for (VertexId y : snap) {
        if (!g.incident(x, y)) continue;
        ResidueWalk w = residue_walk(g, x, y);
        for (VertexId z : snap) {
          if (!g.incident(x, z)) continue;
          // the whole path covers every f_k value at these arguments
          for (VertexId v : unique_path(g, w, z))
            if (cur.insert(v).second) grew = true;
        }
      }
    }
    for (auto [i, j] : gp) {
      for (VertexId x : snap) {
        if (g.type_of(x) != i) continue;
        for (VertexId y : snap) {
          if (y == x || g.type_of(y) != i) continue;
          if (cur.insert(eval_g(s, i, j, x, y)).second) grew = true;
        }
      }
    }
  }
  return {cur.begin(), cur.end()};
}

Substructure generated_substructure(const LStructure& s,
                                    const std::vector<VertexId>& seed) {
  std::vector<VertexId> base = generated_closure(s, seed);
  Geometry sub(s.geometry.types());
  for (VertexId v : base) sub.add_vertex(s.geometry.type_of(v));
  for (std::size_t a = 0; a < base.size(); ++a)
    for (std::size_t b = a + 1; b < base.size(); ++b)
      if (s.geometry.incident(base[a], base[b]))
        sub.add_incidence(static_cast<VertexId>(a), static_cast<VertexId>(b));
  return Substructure{LStructure{std::move(sub), s.diagram}, base,
                      Embedding{base}};
}

AmalgamResult free_amalgam(const LStructure& a, const LStructure& b,
                           const LStructure& c, const Embedding& iota,
                           const Embedding& kappa) {
  CheckResult ri = check_embedding(a, b, iota, true);
  if (!ri.pass)
    throw Error("free_amalgam: iota fails validation: " + ri.witness.dump());
  CheckResult rk = check_embedding(a, c, kappa, true);
  if (!rk.pass)
    throw Error("free_amalgam: kappa fails validation: " + rk.witness.dump());
  const Geometry& gb = b.geometry;
  const Geometry& gc = c.geometry;
  int na = a.geometry.vertex_count();
  int nb = gb.vertex_count();
  int nc = gc.vertex_count();

  Geometry dg(gb.types());
  for (VertexId v = 0; v < nb; ++v) dg.add_vertex(gb.type_of(v));
  std::vector<char> shared_b(nb, 0);
  std::vector<VertexId> map_c(nc, -1);
  for (VertexId v = 0; v < na; ++v) {
    shared_b[iota.map[v]] = 1;
    map_c[kappa.map[v]] = iota.map[v];
  }
  for (VertexId w = 0; w < nc; ++w)
    if (map_c[w] < 0) map_c[w] = dg.add_vertex(gc.type_of(w));

  for (VertexId u = 0; u < nb; ++u)
    for (VertexId v : gb.neighbors(u))
      if (u < v) dg.add_incidence(u, v);
  for (VertexId u = 0; u < nc; ++u)
    for (VertexId v : gc.neighbors(u))
      if (u < v) dg.add_incidence(map_c[u], map_c[v]);
  // forced incidences between the private parts only
  for (VertexId u = 0; u < nb; ++u) {
    if (shared_b[u]) continue;
    int tu = gb.type_of(u);
    for (VertexId w = 0; w < nc; ++w) {
      if (map_c[w] < nb) continue;
      int tw = gc.type_of(w);
      if (tu == tw || b.diagram.adjacent(tu, tw)) continue;
      dg.add_incidence(u, map_c[w]);
    }
  }

  LStructure res{std::move(dg), b.diagram};
  for (const CheckResult& r :
       {check_F(res.geometry, res.diagram), check_P(res.geometry, res.diagram),
        check_D(res.geometry, res.diagram)})
    if (!r.pass)
      throw VerificationError("free amalgam violates property " + r.property,
                              r.witness);

  AmalgamResult out{std::move(res), Embedding{}, Embedding{std::move(map_c)}};
  out.lambda.map.resize(nb);
  std::iota(out.lambda.map.begin(), out.lambda.map.end(), 0);
  return out;
}

LStructure close_into_class(const LStructure& s, int rounds,
                            const Caps& caps) {
  ConstructionState st = make_state(s.diagram, s.geometry);
  RoundOptions opts;
  opts.caps = Caps{0, caps.b, 0};
  for (int r = 0; r < rounds; ++r) run_round(st, opts);
  return LStructure{std::move(st.geometry), std::move(st.diagram)};
}

nlohmann::json ApReport::to_json() const {
  return {{"samples", samples},
          {"size_bound", size_bound},
          {"seed", seed},
          {"ap_pass", ap_pass},
          {"ap_fail", ap_fail},
          {"hp_pass", hp_pass},
          {"hp_fail", hp_fail},
          {"jep_samples", jep_samples},
          {"fallback_empty_a", fallback_empty_a},
          {"redraws", redraws},
          {"failures", failures}};
}

ApReport check_amalgamation_property(const CoxeterDiagram& diagram,
                                     int samples, int size_bound,
                                     unsigned long long seed) {
  if (!is_amalgamation_diagram(diagram))
    throw Error(
        "check_amalgamation_property: diagram outside the amalgamation "
        "class");
  if (samples < 0 || size_bound < 1)
    throw Error("check_amalgamation_property: bad sample parameters");
  ApReport rep;
  rep.samples = samples;
  rep.size_bound = size_bound;
  rep.seed = seed;

  RoundOptions bopts;
  bopts.caps = Caps{16, 8, 4};
  ConstructionState bs = build_free(diagram, Geometry(diagram.types()), 3,
                                    bopts);
  LStructure base{std::move(bs.geometry), diagram};
  const unsigned long long n =
      static_cast<unsigned long long>(base.geometry.vertex_count());

  for (int sample = 0; sample < samples; ++sample) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL +
                        static_cast<unsigned long long>(sample) + 1);
    auto draw_closed = [&](int max_seed, VertexId include = -1) {
      for (int tries = 0; tries < 10; ++tries) {
        int sz = 1 + static_cast<int>(rng() % max_seed);
        std::set<VertexId> ids;
        if (include >= 0) ids.insert(include);
        while (static_cast<int>(ids.size()) < sz)
          ids.insert(static_cast<VertexId>(rng() % n));
        std::vector<VertexId> cl =
            generated_closure(base, {ids.begin(), ids.end()});
        if (static_cast<int>(cl.size()) <= size_bound) return cl;
      }
      // a single vertex is always its own closure
      VertexId lone = include >= 0 ? include : static_cast<VertexId>(rng() % n);
      return generated_closure(base, {lone});
    };

    {
      Substructure hs = generated_substructure(base, draw_closed(3));
      bool ok = true;
      nlohmann::json w;
      for (const CheckResult& r : check_lstructure(hs.structure))
        if (!r.pass) {
          ok = false;
          w = r.to_json();
          break;
        }
      if (ok) {
        rep.hp_pass++;
      } else {
        rep.hp_fail++;
        rep.failures.push_back(
            {{"sample", sample}, {"stage", "hereditary"}, {"witness", w}});
      }
    }

    bool want_empty_a = (sample % 5 == 0);
    std::optional<Substructure> sa, sb, sc;
    Embedding io, ka;
    bool a_empty = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      bool force_empty = want_empty_a || attempt == 11;
      std::vector<VertexId> bset = draw_closed(3);
      // bias C toward B so the shared part is usually nonempty
      std::vector<VertexId> cset =
          force_empty ? draw_closed(3)
                      : draw_closed(3, bset[rng() % bset.size()]);
      std::vector<VertexId> aset;
      if (!force_empty) {
        std::vector<VertexId> inter;
        std::set_intersection(bset.begin(), bset.end(), cset.begin(),
                              cset.end(), std::back_inserter(inter));
        if (!inter.empty()) {
          int take = 1 + static_cast<int>(rng() % 2);
          std::set<VertexId> pick;
          for (int t = 0; t < take; ++t)
            pick.insert(inter[rng() % inter.size()]);
          // a closed subset stays inside both closed supersets
          aset = generated_closure(base, {pick.begin(), pick.end()});
        }
      }
      Substructure ta = generated_substructure(base, aset);
      Substructure tb = generated_substructure(base, bset);
      Substructure tc = generated_substructure(base, cset);
      Embedding ti, tk;
      ti.map.reserve(ta.base_vertices.size());
      tk.map.reserve(ta.base_vertices.size());
      for (VertexId v : ta.base_vertices) {
        ti.map.push_back(member_index(tb.base_vertices, v));
        tk.map.push_back(member_index(tc.base_vertices, v));
      }
      if (check_embedding(ta.structure, tb.structure, ti, true).pass &&
          check_embedding(ta.structure, tc.structure, tk, true).pass) {
        if (force_empty && !want_empty_a) rep.fallback_empty_a++;
        a_empty = aset.empty();
        sa = std::move(ta);
        sb = std::move(tb);
        sc = std::move(tc);
        io = std::move(ti);
        ka = std::move(tk);
        break;
      }
      rep.redraws++;
    }
    if (a_empty) rep.jep_samples++;

    try {
      AmalgamResult am =
          free_amalgam(sa->structure, sb->structure, sc->structure, io, ka);
      for (std::size_t v = 0; v < sa->base_vertices.size(); ++v)
        if (am.lambda(io(static_cast<VertexId>(v))) !=
            am.mu(ka(static_cast<VertexId>(v))))
          throw VerificationError("amalgam square does not commute",
                                  {{"vertex", v}});
      LStructure closed = close_into_class(am.structure, 1, Caps{0, 8, 0});
      nlohmann::json w;
      bool ok = true;
      for (const CheckResult& r : check_lstructure(closed))
        if (!r.pass) {
          ok = false;
          w = r.to_json();
          break;
        }
      if (ok) {
        CheckResult rl = check_embedding(sb->structure, closed, am.lambda);
        CheckResult rm = check_embedding(sc->structure, closed, am.mu);
        if (!rl.pass) {
          ok = false;
          w = rl.to_json();
        } else if (!rm.pass) {
          ok = false;
          w = rm.to_json();
        }
      }
      if (ok) {
        rep.ap_pass++;
      } else {
        rep.ap_fail++;
        rep.failures.push_back(
            {{"sample", sample}, {"stage", "amalgam"}, {"witness", w}});
      }
    } catch (const VerificationError& e) {
      rep.ap_fail++;
      rep.failures.push_back({{"sample", sample},
                              {"stage", "amalgam"},
                              {"error", e.what()},
                              {"witness", e.witness()}});
    } catch (const Error& e) {
      rep.ap_fail++;
      rep.failures.push_back(
          {{"sample", sample}, {"stage", "amalgam"}, {"error", e.what()}});
    }
  }
  return rep;
}

nlohmann::json PartialIso::to_json() const {
  nlohmann::json ps = nlohmann::json::array();
  for (auto [d, c] : pairs) ps.push_back({d, c});
  return {{"version", 1}, {"pairs", ps}};
}

nlohmann::json ExtendReport::to_json() const {
  return {{"extended", extended},
          {"outcome", outcome},
          {"iso", iso.to_json()},
          {"nodes", nodes}};
}

ExtendReport extend_partial_iso(const LStructure& s, const PartialIso& iso,
                                VertexId target, long long budget) {
  const Geometry& g = s.geometry;
  std::map<VertexId, VertexId> fwd;
  std::map<VertexId, VertexId> rev;
  for (auto [d, c] : iso.pairs) {
    require_vertex(g, d, "extend_partial_iso");
    require_vertex(g, c, "extend_partial_iso");
    if (!fwd.emplace(d, c).second)
      throw Error("extend_partial_iso: duplicate domain vertex");
    if (!rev.emplace(c, d).second)
      throw Error("extend_partial_iso: duplicate image vertex");
    if (g.type_of(d) != g.type_of(c))
      throw Error("extend_partial_iso: type mismatch in iso");
  }
  std::vector<VertexId> dom, cod;
  for (auto& [d, c] : fwd) dom.push_back(d);
  for (auto& [c, d] : rev) cod.push_back(c);
  if (generated_closure(s, dom) != dom)
    throw Error("extend_partial_iso: domain is not a generated substructure");
  if (generated_closure(s, cod) != cod)
    throw Error("extend_partial_iso: image is not a generated substructure");
  for (auto& [d1, c1] : fwd)
    for (auto& [d2, c2] : fwd)
      if (d1 < d2 && g.incident(d1, d2) != g.incident(c1, c2))
        throw Error("extend_partial_iso: incidence mismatch in iso");

  int bound = path_index_bound(s);
  std::vector<std::pair<int, int>> gp = g_pairs(s.diagram);
  for (VertexId x : dom)
    for (VertexId y : dom) {
      if (!g.incident(x, y)) continue;
      for (VertexId z : dom) {
        if (!g.incident(x, z)) continue;
        std::vector<VertexId> ra = f_row(s, bound, x, y, z);
        std::vector<VertexId> rb =
            f_row(s, bound, fwd.at(x), fwd.at(y), fwd.at(z));
        for (int k = 0; k <= bound; ++k)
          if (fwd.at(ra[k]) != rb[k])
            throw Error("extend_partial_iso: function mismatch in iso");
      }
    }
  for (auto [i, j] : gp)
    for (VertexId x : dom)
      for (VertexId y : dom) {
        if (x == y || g.type_of(x) != i || g.type_of(y) != i) continue;
        if (fwd.at(eval_g(s, i, j, x, y)) !=
            eval_g(s, i, j, fwd.at(x), fwd.at(y)))
          throw Error("extend_partial_iso: function mismatch in iso");
      }

  require_vertex(g, target, "extend_partial_iso");
  if (fwd.count(target))
    throw Error("extend_partial_iso: target already in the domain");

  std::vector<VertexId> dplus = dom;
  dplus.push_back(target);
  std::vector<VertexId> dprime = generated_closure(s, dplus);
  long long nodes = 0;
  bool exhausted = false;

  for (VertexId w = 0; w < g.vertex_count() && !exhausted; ++w) {
    if (g.type_of(w) != g.type_of(target) || rev.count(w)) continue;
    bool pre = true;
    for (auto& [d, c] : fwd)
      if (g.incident(target, d) != g.incident(w, c)) {
        pre = false;
        break;
      }
    if (!pre) continue;
    std::vector<VertexId> cplus = cod;
    cplus.push_back(w);
    std::vector<VertexId> cprime = generated_closure(s, cplus);
    if (cprime.size() != dprime.size()) continue;

    std::map<VertexId, VertexId> M = fwd;
    std::map<VertexId, VertexId> R = rev;
    M[target] = w;
    R[w] = target;
    bool bad = false;
    auto constrain = [&](VertexId vd, VertexId vc) {
      auto it = M.find(vd);
      if (it != M.end()) {
        if (it->second != vc) bad = true;
        return;
      }
      if (R.count(vc) || g.type_of(vd) != g.type_of(vc)) {
        bad = true;
        return;
      }
      for (auto& [u, mu] : M)
        if (g.incident(vd, u) != g.incident(vc, mu)) {
          bad = true;
          return;
        }
      M.emplace(vd, vc);
      R.emplace(vc, vd);
    };
    auto charge = [&](long long cost) {
      nodes += cost;
      if (nodes > budget) exhausted = true;
      return !exhausted;
    };

    bool grew = true;
    while (grew && !bad && !exhausted) {
      std::size_t before = M.size();
      std::vector<std::pair<VertexId, VertexId>> snap(M.begin(), M.end());
      for (auto [x, mx] : snap) {
        if (bad || exhausted) break;
        for (auto [y, my] : snap) {
          if (bad || exhausted) break;
          if (!g.incident(x, y)) continue;
          ResidueWalk wa = residue_walk(g, x, y);
          ResidueWalk wb = residue_walk(g, mx, my);
          for (auto [z, mz] : snap) {
            if (bad) break;
            if (!g.incident(x, z)) continue;
            if (!charge(2)) break;
            std::vector<VertexId> pa = unique_path(g, wa, z);
            std::vector<VertexId> pb = unique_path(g, wb, mz);
            for (int k = 0; k <= bound && !bad; ++k) {
              VertexId vd = k < static_cast<int>(pa.size()) ? pa[k] : x;
              VertexId vc = k < static_cast<int>(pb.size()) ? pb[k] : mx;
              constrain(vd, vc);
            }
          }
        }
      }
      for (auto [i, j] : gp) {
        if (bad || exhausted) break;
        for (auto [x, mx] : snap) {
          if (bad || exhausted) break;
          if (g.type_of(x) != i) continue;
          for (auto [y, my] : snap) {
            if (bad) break;
            if (y == x || g.type_of(y) != i) continue;
            if (!charge(2)) break;
            constrain(eval_g(s, i, j, x, y), eval_g(s, i, j, mx, my));
          }
        }
      }
      grew = M.size() > before;
    }
    if (exhausted) break;
    if (bad) continue;

    std::vector<VertexId> mdom, mimg;
    for (auto& [d, c] : M) mdom.push_back(d);
    for (auto& [c, d] : R) mimg.push_back(c);
    if (mdom != dprime || mimg != cprime) continue;
    bool iso_ok = true;
    for (auto& [d1, c1] : M) {
      for (auto& [d2, c2] : M)
        if (d1 < d2 && g.incident(d1, d2) != g.incident(c1, c2)) {
          iso_ok = false;
          break;
        }
      if (!iso_ok) break;
    }
    if (!iso_ok) continue;

    ExtendReport rep;
    rep.extended = true;
    rep.outcome = "extended";
    rep.iso.pairs.assign(M.begin(), M.end());
    rep.nodes = nodes;
    return rep;
  }
  ExtendReport rep;
  rep.extended = false;
  rep.outcome = exhausted ? "budget-exhausted" : "no-candidate";
  rep.iso = iso;
  rep.nodes = nodes;
  return rep;
}

}  // namespace coxforge
