#include "coxforge/free_properties.hpp"

#include <algorithm>

#include "coxforge/error.hpp"

namespace coxforge {

namespace {

void require_same_types(const Geometry& g, const CoxeterDiagram& d) {
  if (g.types() != d.types())
    throw Error("property check: geometry and diagram type sets differ");
}

nlohmann::json extint_json(ExtInt v) {
  return v.is_infinite() ? nlohmann::json("inf") : nlohmann::json(v.value());
}

}  // namespace

std::vector<int> non_adjacent_types(const CoxeterDiagram& d, int t) {
  std::vector<int> out;
  for (int u = 0; u < d.rank(); ++u)
    if (u != t && !d.adjacent(u, t)) out.push_back(u);
  return out;
}

std::vector<int> p_context(const CoxeterDiagram& d, int i, int j) {
  if (i == j) throw Error("p_context: types must differ");
  std::vector<int> out;
  for (int t = 0; t < d.rank(); ++t)
    if (t != i && t != j && (d.adjacent(t, i) || d.adjacent(t, j)))
      out.push_back(t);
  return out;
}

CheckResult check_F(const Geometry& g, const CoxeterDiagram& d) {
  require_same_types(g, d);
  for (int ti = 0; ti < d.rank(); ++ti)
    for (int tj = ti + 1; tj < d.rank(); ++tj) {
      if (d.adjacent(ti, tj)) continue;
      for (VertexId u : g.vertices_of_type(ti))
        for (VertexId v : g.vertices_of_type(tj))
          if (!g.incident(u, v)) {
            nlohmann::json w;
            w["pair"] = {u, v};
            w["types"] = {g.type_label(ti), g.type_label(tj)};
            return CheckResult::fail("F", w);
          }
    }
  return CheckResult::ok("F");
}

CheckResult check_P(const Geometry& g, const CoxeterDiagram& d) {
  require_same_types(g, d);
  CheckResult out = CheckResult::ok("P");
  for (int i = 0; i < d.rank() && out.pass; ++i)
    for (int j = i + 1; j < d.rank() && out.pass; ++j) {
      if (!d.adjacent(i, j)) continue;
      ExtInt m = d.bond(i, j);
      ExtInt bound = m.times(2);
      std::vector<int> ctx = p_context(d, i, j);
      for_each_flag_of_type(g, ctx, [&](const Flag& f) {
        Rank2View view = Rank2View::build(g, f, i, j);
        ExtInt girth = view.girth();
        if (girth < bound) {
          nlohmann::json w;
          w["types"] = {g.type_label(i), g.type_label(j)};
          w["flag"] = f;
          w["girth"] = extint_json(girth);
          w["required_girth"] = extint_json(bound);
          w["cycle"] = *view.shortest_cycle();
          out = CheckResult::fail("P", w);
          return false;
        }
        return true;
      });
    }
  return out;
}

CheckResult check_D(const Geometry& g, const CoxeterDiagram& d) {
  require_same_types(g, d);
  for (int i = 0; i < d.rank(); ++i)
    for (int j = i + 1; j < d.rank(); ++j) {
      if (d.bond(i, j) < ExtInt(4)) continue;
      Rank2View view = rank2_restriction(g, i, j);
      ExtInt girth = view.girth();
      if (girth < ExtInt(6)) {
        nlohmann::json w;
        w["types"] = {g.type_label(i), g.type_label(j)};
        w["girth"] = extint_json(girth);
        w["cycle"] = *view.shortest_cycle();
        return CheckResult::fail("D", w);
      }
    }
  return CheckResult::ok("D");
}

CheckResult check_fpd(const Geometry& g, const CoxeterDiagram& d) {
  CheckResult r = check_F(g, d);
  if (!r.pass) return r;
  r = check_P(g, d);
  if (!r.pass) return r;
  return check_D(g, d);
}

}  // namespace coxforge
