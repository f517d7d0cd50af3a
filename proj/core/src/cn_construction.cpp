#include "coxforge/cn_construction.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

#include "coxforge/error.hpp"
#include "graphutil.hpp"

namespace coxforge {

namespace {

long long tuple_height(const std::vector<long long>& t) {
  long long h = 0;
  for (long long c : t) h = std::max(h, c < 0 ? -c : c);
  return h;
}

std::vector<Rational> to_rational(const std::vector<Integer>& row) {
  std::vector<Rational> out;
  out.reserve(row.size());
  for (const Integer& c : row) out.emplace_back(c);
  return out;
}

// Hyperplanes containing z (dimension n-2) whose quotient-line tuple stays
// within the height bound, in the same order hyperplanes_through uses.
std::vector<Subspace> hyperplanes_through_bounded(int n, const Subspace& z,
                                                  long long height) {
  std::vector<int> pivots = z.pivot_columns();
  std::vector<int> complement;
  for (int c = 0; c < n; ++c)
    if (!std::binary_search(pivots.begin(), pivots.end(), c))
      complement.push_back(c);
  if (complement.size() != 2)
    throw Error("hyperplane sweep needs a dimension-(n-2) subspace");

  std::vector<Subspace> out;
  TupleStream tuples(2);
  while (true) {
    std::vector<long long> t = tuples.next();
    if (tuple_height(t) > height) break;
    std::vector<std::vector<Rational>> rows;
    for (const auto& zrow : z.rows()) rows.push_back(to_rational(zrow));
    std::vector<Rational> row(n, Rational(0));
    row[complement[0]] = Rational(t[0]);
    row[complement[1]] = Rational(t[1]);
    rows.push_back(std::move(row));
    out.push_back(Subspace::canonicalize(n, std::move(rows)));
  }
  return out;
}

// Dimension-d subspaces of Q^k whose generating tuples stay within the
// height bound, in canonical enumeration order.
std::vector<Subspace> bounded_subspaces(int k, int d, long long height) {
  std::vector<Subspace> out;
  if (d == 1) {
    TupleStream tuples(k);
    while (true) {
      std::vector<long long> t = tuples.next();
      if (tuple_height(t) > height) break;
      out.push_back(Subspace::from_integer_rows(k, {t}));
    }
    return out;
  }
  std::vector<std::vector<long long>> pool;
  {
    TupleStream tuples(k);
    while (true) {
      std::vector<long long> t = tuples.next();
      if (tuple_height(t) > height) break;
      pool.push_back(std::move(t));
    }
  }
  std::set<Subspace> seen;
  // Index subsets ordered by largest index, then lexicographically.
  std::vector<int> combo(d);
  for (int top = d - 1; top < static_cast<int>(pool.size()); ++top) {
    for (int i = 0; i < d - 1; ++i) combo[i] = i;
    combo[d - 1] = top;
    while (true) {
      std::vector<std::vector<Rational>> rows;
      for (int idx : combo) {
        std::vector<Rational> row;
        for (long long c : pool[idx]) row.emplace_back(c);
        rows.push_back(std::move(row));
      }
      Subspace s = Subspace::canonicalize(k, std::move(rows));
      if (s.dim() == d && seen.insert(s).second) out.push_back(std::move(s));
      // Advance the d-1 free positions below `top` lexicographically.
      int p = d - 2;
      while (p >= 0 && combo[p] == top - (d - 1 - p)) --p;
      if (p < 0) break;
      ++combo[p];
      for (int q = p + 1; q < d - 1; ++q) combo[q] = combo[q - 1] + 1;
    }
  }
  return out;
}

std::string triple_key(const CnTriple& t) {
  return t.z.str() + "#" + std::to_string(t.x) + "," + std::to_string(t.y);
}

}  // namespace

nlohmann::json CnTriple::to_json() const {
  nlohmann::json j;
  j["z"] = z.to_json();
  j["x"] = x;
  j["y"] = y;
  return j;
}

std::optional<int> LocalGraph::index_of(VertexId v) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), v);
  if (it == ids.end() || *it != v) return std::nullopt;
  return static_cast<int>(it - ids.begin());
}

int nu2(long long j) {
  if (j <= 0) throw Error("nu2 needs a positive integer");
  return std::countr_zero(static_cast<unsigned long long>(j));
}

CnState::CnState(int n, int m, bool seed)
    : n_(n), m_(m), substrate_((n >= 3 ? n : 3)) {
  if (n < 3) throw Error("chain construction needs rank n >= 3");
  if (m < 4) throw Error("chain construction needs a finite terminal bond m >= 4");
  by_type_.assign(static_cast<size_t>(n) + 1, {});
  if (!seed) return;
  std::vector<int> axes(n - 1);
  for (int i = 0; i < n - 1; ++i) axes[i] = i;
  add_vertex(CnKind::panel, n - 1, Subspace::unit_span(n, axes));
  add_vertex(CnKind::top, n, std::nullopt);
}

CnState::CnState(int n, int m) : CnState(n, m, true) {}

CnState init_cn(int n, int m) { return CnState(n, m); }

VertexId CnState::add_vertex(CnKind k, int type, std::optional<Subspace> space) {
  VertexId id = vertex_count();
  kind_.push_back(k);
  type_.push_back(type);
  space_.push_back(std::move(space));
  adj_.emplace_back();
  by_type_[type].push_back(id);
  if (k == CnKind::substrate) substrate_index_.emplace(*space_.back(), id);
  return id;
}

void CnState::add_edge(VertexId a, VertexId b) {
  int ta = type_of(a), tb = type_of(b);
  if (!((ta == n_ && tb == n_ - 1) || (ta == n_ - 1 && tb == n_)))
    throw Error("explicit edges join a top vertex with a type-(n-1) vertex");
  auto insert = [](std::vector<VertexId>& v, VertexId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
  };
  insert(adj_[a], b);
  insert(adj_[b], a);
}

CnKind CnState::kind_of(VertexId v) const {
  if (v < 0 || v >= vertex_count()) throw Error("vertex id out of range");
  return kind_[v];
}

int CnState::type_of(VertexId v) const {
  if (v < 0 || v >= vertex_count()) throw Error("vertex id out of range");
  return type_[v];
}

const Subspace& CnState::space_of(VertexId v) const {
  if (v < 0 || v >= vertex_count()) throw Error("vertex id out of range");
  if (!space_[v]) throw Error("top vertices carry no subspace");
  return *space_[v];
}

std::vector<VertexId> CnState::vertices_of_type(int t) const {
  if (t < 1 || t > n_) throw Error("type out of range");
  return by_type_[t];
}

std::vector<VertexId> CnState::vertices_of_kind(CnKind k) const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertex_count(); ++v)
    if (kind_[v] == k) out.push_back(v);
  return out;
}

const std::vector<VertexId>& CnState::explicit_neighbors(VertexId v) const {
  if (v < 0 || v >= vertex_count()) throw Error("vertex id out of range");
  return adj_[v];
}

bool CnState::incident(VertexId a, VertexId b) const {
  CnKind ka = kind_of(a), kb = kind_of(b);
  if (a == b || type_[a] == type_[b]) return false;
  auto explicit_edge = [&](VertexId u, VertexId w) {
    return std::binary_search(adj_[u].begin(), adj_[u].end(), w);
  };
  if (ka == CnKind::substrate && kb == CnKind::substrate)
    return nested(*space_[a], *space_[b]);
  // Order so a is the lower-kind participant.
  if (ka == CnKind::top || (ka == CnKind::panel && kb == CnKind::substrate))
    return incident(b, a);
  if (ka == CnKind::substrate && kb == CnKind::panel)
    return space_[b]->contains(*space_[a]);
  if (ka == CnKind::substrate && kb == CnKind::top) {
    if (type_[a] <= n_ - 2) return true;
    return explicit_edge(a, b);
  }
  // panel against top
  return explicit_edge(a, b);
}

std::optional<VertexId> CnState::find_substrate(const Subspace& s) const {
  auto it = substrate_index_.find(s);
  if (it == substrate_index_.end()) return std::nullopt;
  return it->second;
}

VertexId CnState::ensure_substrate(const Subspace& s) {
  if (s.ambient() != n_) throw Error("substrate: ambient dimension mismatch");
  auto it = substrate_index_.find(s);
  if (it != substrate_index_.end()) return it->second;
  return add_vertex(CnKind::substrate, s.dim(), s);
}

const Subspace& CnState::key_of(VertexId v) const {
  if (type_of(v) != n_ - 1)
    throw Error("only type-(n-1) vertices carry a hyperplane key");
  return *space_[v];
}

std::map<Subspace, VertexId> CnState::panel_entries(VertexId top) const {
  if (kind_of(top) != CnKind::top) throw Error("panel_entries needs a top vertex");
  std::map<Subspace, VertexId> out;
  for (VertexId nb : adj_[top]) {
    if (!out.emplace(key_of(nb), nb).second)
      throw Error("panel map holds two vertices for one hyperplane");
  }
  return out;
}

VertexId CnState::materialize_panel_at(VertexId top, const Subspace& h) {
  if (kind_of(top) != CnKind::top)
    throw Error("materialize_panel_at needs a top vertex");
  if (h.ambient() != n_ || h.dim() != n_ - 1)
    throw Error("materialize_panel_at needs a hyperplane");
  for (VertexId nb : adj_[top])
    if (key_of(nb) == h) return nb;
  VertexId p = add_vertex(CnKind::panel, n_ - 1, h);
  add_edge(top, p);
  return p;
}

VertexId CnState::select_fresh_panel_vertex(VertexId top, const Subspace& z,
                                            const std::set<Subspace>& avoid) {
  if (kind_of(top) != CnKind::top)
    throw Error("select_fresh_panel_vertex needs a top vertex");
  if (z.ambient() != n_ || z.dim() != n_ - 2)
    throw Error("select_fresh_panel_vertex needs a dimension-(n-2) subspace");
  for (VertexId nb : adj_[top]) {
    if (adj_[nb].size() != 1) continue;
    const Subspace& key = key_of(nb);
    if (key.contains(z) && avoid.find(key) == avoid.end()) return nb;
  }
  std::vector<Subspace> skip(avoid.begin(), avoid.end());
  for (VertexId nb : adj_[top]) {
    const Subspace& key = key_of(nb);
    if (std::find(skip.begin(), skip.end(), key) == skip.end()) skip.push_back(key);
  }
  Subspace prec = substrate_.hyperplanes_through(z, skip, 1).at(0);
  VertexId p = add_vertex(CnKind::panel, n_ - 1, std::move(prec));
  add_edge(top, p);
  return p;
}

LocalGraph residue_at(const CnState& s, const Subspace& z) {
  if (z.ambient() != s.n() || z.dim() != s.n() - 2)
    throw Error("residue_at needs a dimension-(n-2) subspace");
  LocalGraph g;
  for (VertexId v = 0; v < s.vertex_count(); ++v) {
    int t = s.type_of(v);
    if (t == s.n())
      g.ids.push_back(v);
    else if (t == s.n() - 1 && s.key_of(v).contains(z))
      g.ids.push_back(v);
  }
  g.adj.resize(g.ids.size());
  for (size_t i = 0; i < g.ids.size(); ++i) {
    for (VertexId nb : s.explicit_neighbors(g.ids[i])) {
      auto idx = g.index_of(nb);
      if (idx) g.adj[i].push_back(*idx);
    }
  }
  return g;
}

bool triple_viable(const CnState& s, const CnTriple& t) {
  const int n = s.n(), m = s.m();
  if (t.z.ambient() != n || t.z.dim() != n - 2) return false;
  if (t.x < 0 || t.y < 0 || t.x >= s.vertex_count() || t.y >= s.vertex_count())
    return false;
  if (t.x == t.y) return false;
  int tx = s.type_of(t.x), ty = s.type_of(t.y);
  if ((tx != n - 1 && tx != n) || (ty != n - 1 && ty != n)) return false;
  if ((tx == ty) != (m % 2 == 1)) return false;
  if (tx == n - 1 && !s.key_of(t.x).contains(t.z)) return false;
  if (ty == n - 1 && !s.key_of(t.y).contains(t.z)) return false;
  LocalGraph g = residue_at(s, t.z);
  auto ix = g.index_of(t.x), iy = g.index_of(t.y);
  if (!ix || !iy) return false;
  std::vector<int> dist = detail::bfs_all(g.adj, *ix);
  return dist[*iy] == -1 || dist[*iy] >= m + 1;
}

namespace {
struct ExtendOutcome {
  std::vector<VertexId> created;
  std::vector<std::string> path_keys;
};
}  // namespace

struct CnOps {
  static ExtendOutcome extend_path(CnState& s, const CnTriple& t) {
    if (!triple_viable(s, t)) throw Error("extend: triple is not viable");
    const int n = s.n_, m = s.m_;
    s.ensure_substrate(t.z);
    auto flip = [n](int ty) { return ty == n ? n - 1 : n; };
    ExtendOutcome out;
    // Keys of the endpoints are given, not picked: they seed the avoid set
    // but stay out of path_keys, which records only the choices made here.
    std::set<Subspace> used;
    const int tx = s.type_of(t.x), ty = s.type_of(t.y);
    if (tx == n - 1) used.insert(s.key_of(t.x));
    if (ty == n - 1) used.insert(s.key_of(t.y));

    VertexId prev = t.x;
    for (int k = 1; k <= m - 2; ++k) {
      int tk = (k % 2 == 1) ? flip(tx) : tx;
      if (tk == n - 1) {
        VertexId p;
        int before = s.vertex_count();
        if (k == 1 && tx == n) {
          p = s.select_fresh_panel_vertex(t.x, t.z, used);
        } else if (k == m - 2 && ty == n) {
          p = s.select_fresh_panel_vertex(t.y, t.z, used);
        } else {
          std::vector<Subspace> skip(used.begin(), used.end());
          Subspace prec = s.substrate_.hyperplanes_through(t.z, skip, 1).at(0);
          p = s.add_vertex(CnKind::panel, n - 1, std::move(prec));
        }
        if (s.vertex_count() > before) out.created.push_back(p);
        s.add_edge(prev, p);
        used.insert(s.key_of(p));
        out.path_keys.push_back(s.key_of(p).str());
        prev = p;
      } else {
        VertexId v = s.add_vertex(CnKind::top, n, std::nullopt);
        out.created.push_back(v);
        s.add_edge(prev, v);
        prev = v;
      }
    }
    s.add_edge(prev, t.y);
    return out;
  }

  // One deterministic sweep. Candidate endpoints at each z are the
  // materialized vertices there plus the height-bounded hyperplanes through
  // z, which the sweep materializes. With a scope, only pairs meeting it
  // count toward the limit.
  static std::vector<CnTriple> sweep(CnState& s, long long height, int limit,
                                     const std::set<VertexId>* scope) {
    std::vector<CnTriple> out;
    if (limit <= 0) return out;
    const int n = s.n_, m = s.m_;
    for (const Subspace& z : bounded_subspaces(n, n - 2, height)) {
      s.ensure_substrate(z);
      for (const Subspace& h : hyperplanes_through_bounded(n, z, height))
        s.ensure_substrate(h);
      LocalGraph g = residue_at(s, z);
      const int sz = static_cast<int>(g.ids.size());
      for (int ia = 0; ia < sz; ++ia) {
        VertexId a = g.ids[ia];
        std::vector<int> dist = detail::bfs_all(g.adj, ia);
        for (int ib = ia + 1; ib < sz; ++ib) {
          VertexId b = g.ids[ib];
          if ((s.type_of(a) == s.type_of(b)) != (m % 2 == 1)) continue;
          if (scope && !scope->count(a) && !scope->count(b)) continue;
          if (dist[ib] != -1 && dist[ib] < m + 1) continue;
          out.push_back(CnTriple{z, a, b});
          if (static_cast<int>(out.size()) >= limit) return out;
        }
      }
    }
    return out;
  }

  static void refill(CnState& s, CnState::ScheduleList& list, bool restricted,
                     int limit) {
    std::set<VertexId> scope_set(list.scope.begin(), list.scope.end());
    const std::set<VertexId>* scope =
        (restricted && !scope_set.empty()) ? &scope_set : nullptr;
    for (CnTriple& t : sweep(s, s.height_, limit, scope)) {
      std::string key = triple_key(t);
      if (list.seen.insert(key).second) list.triples.push_back(std::move(t));
    }
  }

  static void run(CnState& s, int steps, const CnRunOptions& opts) {
    if (steps < 0) throw Error("run_cn: negative step count");
    if (steps == 0) return;
    s.height_ = std::max(s.height_, opts.height);
    if (s.lists_.empty()) {
      CnState::ScheduleList s0;
      s.lists_.push_back(std::move(s0));
      refill(s, s.lists_[0], false, opts.limit);
    }
    for (int it = 0; it < steps; ++it) {
      const int j = ++s.step_;
      const int v = nu2(j);
      if (v >= static_cast<int>(s.lists_.size()))
        throw Error("schedule list is missing");
      int skipped = 0;
      std::optional<CnTriple> chosen;
      int stuck = 0;
      while (!chosen) {
        CnState::ScheduleList& list = s.lists_[v];
        while (list.cursor < list.triples.size()) {
          const CnTriple& t = list.triples[list.cursor];
          if (triple_viable(s, t)) {
            chosen = t;
            break;
          }
          ++list.cursor;
          ++skipped;
        }
        if (chosen) break;
        size_t before = list.triples.size();
        refill(s, list, true, opts.limit);
        if (list.triples.size() == before) refill(s, list, false, opts.limit);
        if (list.triples.size() == before) {
          ++s.height_;
          if (++stuck > 64) throw Error("schedule refill made no progress");
        }
      }
      ExtendOutcome outcome = extend_path(s, *chosen);
      ++s.lists_[v].cursor;

      CnStepRecord rec;
      rec.step = j;
      rec.list = v;
      rec.skipped = skipped;
      rec.triple = chosen->to_json();
      rec.created = outcome.created;
      rec.path_precursors = outcome.path_keys;
      s.log_.push_back(std::move(rec));

      CnState::ScheduleList next;
      next.scope = outcome.created;
      s.lists_.push_back(std::move(next));
      refill(s, s.lists_.back(), true, opts.limit);

      if (opts.check_every_step) check_or_throw(s, opts.property_sample, j);
    }
    if (!opts.check_every_step) check_or_throw(s, opts.property_sample, s.step_);
  }

  static void check_or_throw(CnState& s, int sample, int step) {
    for (const CheckResult& r : check_cn_properties(s, sample)) {
      if (r.pass) continue;
      nlohmann::json w;
      w["step"] = step;
      w["property"] = r.property;
      w["witness"] = r.witness;
      throw VerificationError("chain construction property failed", w);
    }
  }
};

std::vector<CnTriple> viable_triples(CnState& s, long long height, int limit) {
  return CnOps::sweep(s, height, limit, nullptr);
}

std::vector<VertexId> extend(CnState& s, const CnTriple& t) {
  return CnOps::extend_path(s, t).created;
}

void run_cn(CnState& s, int steps, const CnRunOptions& opts) {
  CnOps::run(s, steps, opts);
}

std::vector<CheckResult> check_cn_properties(CnState& s, int sample) {
  std::vector<CheckResult> out;
  const int n = s.n(), m = s.m();
  const std::vector<VertexId> tops = s.vertices_of_kind(CnKind::top);

  {
    CheckResult r = CheckResult::ok("F");
    for (VertexId v = 0; v < s.vertex_count() && r.pass; ++v) {
      if (s.kind_of(v) != CnKind::substrate || s.type_of(v) > n - 2) continue;
      for (VertexId t : tops) {
        if (!s.incident(v, t)) {
          r = CheckResult::fail("F", {{"low", v}, {"top", t}});
          break;
        }
      }
    }
    out.push_back(std::move(r));
  }

  out.push_back(CheckResult::ok("I"));

  {
    CheckResult r = CheckResult::ok("V");
    for (VertexId v = 0; v < s.vertex_count(); ++v) {
      CnKind k = s.kind_of(v);
      int t = s.type_of(v);
      bool good = (k == CnKind::substrate && t >= 1 && t <= n - 1 &&
                   t == s.space_of(v).dim()) ||
                  (k == CnKind::panel && t == n - 1 &&
                   s.space_of(v).dim() == n - 1) ||
                  (k == CnKind::top && t == n);
      if (!good) {
        r = CheckResult::fail("V", {{"vertex", v}, {"type", t}});
        break;
      }
    }
    out.push_back(std::move(r));
  }

  {
    CheckResult r = CheckResult::ok("P");
    for (VertexId v = 0; v < s.vertex_count() && r.pass; ++v) {
      if (s.kind_of(v) != CnKind::substrate || s.type_of(v) != n - 2) continue;
      LocalGraph g = residue_at(s, s.space_of(v));
      detail::CycleResult cyc = detail::shortest_cycle(g.adj);
      if (cyc.girth < ExtInt(2LL * m)) {
        std::vector<VertexId> cycle;
        for (int idx : cyc.cycle) cycle.push_back(g.ids[idx]);
        r = CheckResult::fail("P", {{"z", s.space_of(v).str()},
                                    {"girth", cyc.girth.value()},
                                    {"cycle", cycle}});
      }
    }
    out.push_back(std::move(r));
  }

  {
    CheckResult r = CheckResult::ok("H");
    for (VertexId p = 0; p < s.vertex_count() && r.pass; ++p) {
      if (s.kind_of(p) != CnKind::panel) continue;
      // copy: ensure_substrate below may reallocate the vertex store
      Subspace prec = s.space_of(p);
      for (int d = 1; d <= n - 2 && r.pass; ++d) {
        for (const Subspace& sub : s.substrate().subspaces_within(prec, d, sample)) {
          VertexId sv = s.ensure_substrate(sub);
          if (!s.incident(p, sv)) {
            r = CheckResult::fail(
                "H", {{"vertex", p}, {"subspace", sub.str()}, {"expected", true}});
            break;
          }
        }
      }
      if (!r.pass) break;
      TupleStream tuples(n);
      int found = 0, tried = 0;
      while (found < sample && tried < 200) {
        ++tried;
        Subspace line = Subspace::from_integer_rows(n, {tuples.next()});
        if (prec.contains(line)) continue;
        ++found;
        VertexId sv = s.ensure_substrate(line);
        if (s.incident(p, sv)) {
          r = CheckResult::fail(
              "H", {{"vertex", p}, {"subspace", line.str()}, {"expected", false}});
          break;
        }
      }
    }
    out.push_back(std::move(r));
  }

  {
    CheckResult r = CheckResult::ok("C");
    for (VertexId t : tops) {
      std::map<Subspace, VertexId> keys;
      for (VertexId nb : s.explicit_neighbors(t)) {
        auto ins = keys.emplace(s.key_of(nb), nb);
        if (!ins.second) {
          r = CheckResult::fail("C", {{"top", t},
                                      {"hyperplane", s.key_of(nb).str()},
                                      {"vertices", {ins.first->second, nb}}});
          break;
        }
      }
      if (!r.pass) break;
    }
    out.push_back(std::move(r));
  }

  return out;
}

CheckResult verify_type_n_residue(CnState& s, VertexId top, int sample) {
  const int n = s.n();
  if (s.kind_of(top) != CnKind::top)
    throw Error("verify_type_n_residue needs a top vertex");
  if (sample < 1) throw Error("verify_type_n_residue needs a positive sample");

  std::map<Subspace, VertexId> entries;
  for (VertexId nb : s.explicit_neighbors(top)) {
    auto ins = entries.emplace(s.key_of(nb), nb);
    if (!ins.second)
      return CheckResult::fail("type_n_residue",
                               {{"top", top},
                                {"clause", "panel-injectivity"},
                                {"hyperplane", s.key_of(nb).str()}});
  }

  std::vector<Subspace> keys;
  for (const auto& [key, id] : entries) {
    if (static_cast<int>(keys.size()) >= sample) break;
    keys.push_back(key);
  }
  if (static_cast<int>(keys.size()) < sample) {
    CoordSubspaceStream stream(n, n - 1);
    while (static_cast<int>(keys.size()) < sample) {
      Subspace h = stream.next();
      if (entries.count(h)) continue;
      keys.push_back(std::move(h));
    }
  }

  std::vector<VertexId> verts;
  std::set<VertexId> uniq;
  for (const Subspace& h : keys) {
    VertexId p = s.materialize_panel_at(top, h);
    if (s.type_of(p) != n - 1 || !(s.key_of(p) == h))
      return CheckResult::fail("type_n_residue", {{"top", top},
                                                  {"clause", "panel-key"},
                                                  {"vertex", p}});
    if (!uniq.insert(p).second)
      return CheckResult::fail("type_n_residue", {{"top", top},
                                                  {"clause", "panel-bijection"},
                                                  {"vertex", p}});
    verts.push_back(p);
  }

  // Low-dimensional companions: a couple inside each sampled hyperplane and
  // the first few global lines, so both nested and non-nested pairs occur.
  for (const Subspace& h : keys) {
    for (int d = 1; d <= n - 2; ++d)
      for (const Subspace& sub : s.substrate().subspaces_within(h, d, 2)) {
        VertexId sv = s.ensure_substrate(sub);
        if (uniq.insert(sv).second) verts.push_back(sv);
      }
  }
  {
    TupleStream tuples(n);
    for (int i = 0; i < 3; ++i) {
      VertexId sv =
          s.ensure_substrate(Subspace::from_integer_rows(n, {tuples.next()}));
      if (uniq.insert(sv).second) verts.push_back(sv);
    }
  }

  auto key_of_vert = [&](VertexId v) -> const Subspace& {
    return s.kind_of(v) == CnKind::panel ? s.key_of(v) : s.space_of(v);
  };
  for (size_t i = 0; i < verts.size(); ++i) {
    for (size_t k = i + 1; k < verts.size(); ++k) {
      bool inc = s.incident(verts[i], verts[k]);
      bool nest = nested(key_of_vert(verts[i]), key_of_vert(verts[k]));
      if (inc != nest)
        return CheckResult::fail("type_n_residue",
                                 {{"top", top},
                                  {"clause", "nesting"},
                                  {"a", verts[i]},
                                  {"b", verts[k]},
                                  {"incident", inc},
                                  {"nested", nest}});
    }
  }
  return CheckResult::ok("type_n_residue");
}

nlohmann::json CnState::to_json() const {
  nlohmann::json j;
  j["version"] = 1;
  j["n"] = n_;
  j["m"] = m_;
  j["step"] = step_;
  j["height"] = height_;

  nlohmann::json verts = nlohmann::json::array();
  for (VertexId v = 0; v < vertex_count(); ++v) {
    nlohmann::json rec;
    rec["id"] = v;
    rec["type"] = type_[v];
    switch (kind_[v]) {
      case CnKind::substrate:
        rec["kind"] = "substrate";
        rec["space"] = space_[v]->to_json();
        break;
      case CnKind::panel:
        rec["kind"] = "panel";
        rec["precursor"] = space_[v]->to_json();
        break;
      case CnKind::top: {
        rec["kind"] = "top";
        nlohmann::json entries = nlohmann::json::array();
        for (VertexId nb : adj_[v]) {
          entries.push_back(
              {{"hyperplane", key_of(nb).to_json()}, {"vertex", nb}});
        }
        rec["panel"] = {{"lazy", true}, {"entries", std::move(entries)}};
        break;
      }
    }
    verts.push_back(std::move(rec));
  }
  j["vertices"] = std::move(verts);

  nlohmann::json edges = nlohmann::json::array();
  for (VertexId a = 0; a < vertex_count(); ++a)
    for (VertexId b : adj_[a])
      if (a < b) edges.push_back({a, b});
  j["explicit_incidences"] = std::move(edges);

  nlohmann::json lists = nlohmann::json::array();
  for (const ScheduleList& l : lists_) {
    nlohmann::json lj;
    lj["cursor"] = l.cursor;
    lj["scope"] = l.scope;
    nlohmann::json ts = nlohmann::json::array();
    for (const CnTriple& t : l.triples) ts.push_back(t.to_json());
    lj["triples"] = std::move(ts);
    lists.push_back(std::move(lj));
  }
  j["schedule"] = {{"lists", std::move(lists)}};

  nlohmann::json log = nlohmann::json::array();
  for (const CnStepRecord& r : log_) {
    log.push_back({{"step", r.step},
                   {"list", r.list},
                   {"skipped", r.skipped},
                   {"triple", r.triple},
                   {"created", r.created},
                   {"path_precursors", r.path_precursors}});
  }
  j["log"] = std::move(log);
  return j;
}

CnState CnState::from_json(const nlohmann::json& j) {
  if (!j.contains("version") || j.at("version").get<int>() != 1)
    throw Error("unsupported state version");
  CnState s(j.at("n").get<int>(), j.at("m").get<int>(), false);
  s.step_ = j.at("step").get<int>();
  s.height_ = j.at("height").get<long long>();

  for (const auto& rec : j.at("vertices")) {
    VertexId id = rec.at("id").get<VertexId>();
    std::string kind = rec.at("kind").get<std::string>();
    int type = rec.at("type").get<int>();
    VertexId got;
    if (kind == "substrate")
      got = s.add_vertex(CnKind::substrate, type,
                         Subspace::from_json(rec.at("space")));
    else if (kind == "panel")
      got = s.add_vertex(CnKind::panel, type,
                         Subspace::from_json(rec.at("precursor")));
    else if (kind == "top")
      got = s.add_vertex(CnKind::top, type, std::nullopt);
    else
      throw Error("unknown vertex kind: " + kind);
    if (got != id) throw Error("vertex ids must be dense and in order");
  }
  for (const auto& e : j.at("explicit_incidences"))
    s.add_edge(e.at(0).get<VertexId>(), e.at(1).get<VertexId>());

  for (const auto& lj : j.at("schedule").at("lists")) {
    ScheduleList l;
    l.cursor = lj.at("cursor").get<size_t>();
    l.scope = lj.at("scope").get<std::vector<VertexId>>();
    for (const auto& tj : lj.at("triples")) {
      CnTriple t{Subspace::from_json(tj.at("z")), tj.at("x").get<VertexId>(),
                 tj.at("y").get<VertexId>()};
      l.seen.insert(triple_key(t));
      l.triples.push_back(std::move(t));
    }
    s.lists_.push_back(std::move(l));
  }
  for (const auto& rj : j.at("log")) {
    CnStepRecord r;
    r.step = rj.at("step").get<int>();
    r.list = rj.at("list").get<int>();
    r.skipped = rj.at("skipped").get<int>();
    r.triple = rj.at("triple");
    r.created = rj.at("created").get<std::vector<VertexId>>();
    r.path_precursors =
        rj.at("path_precursors").get<std::vector<std::string>>();
    s.log_.push_back(std::move(r));
  }
  return s;
}

}  // namespace coxforge
