#include <algorithm>
#include <string>
#include <vector>

#include "coxforge/error.hpp"
#include "coxforge/fraisse.hpp"
#include "coxforge/free_properties.hpp"
#include "doctest.h"

using namespace coxforge;

namespace {

CoxeterDiagram c3() {
  return CoxeterDiagram({"point", "line", "plane"},
                        {{"point", "line", 3}, {"line", "plane", 4}});
}

CoxeterDiagram h3() {
  return CoxeterDiagram({"point", "line", "plane"},
                        {{"point", "line", 3}, {"line", "plane", 5}});
}

// p incident with l1, l2, s1; the residue of p is the path l1 - s1 - l2.
LStructure path_fixture() {
  Geometry g(c3().types());
  g.add_vertex(0);  // 0: p
  g.add_vertex(1);  // 1: l1
  g.add_vertex(1);  // 2: l2
  g.add_vertex(2);  // 3: s1
  g.add_incidence(0, 1);
  g.add_incidence(0, 2);
  g.add_incidence(0, 3);
  g.add_incidence(1, 3);
  g.add_incidence(3, 2);
  return LStructure{std::move(g), c3()};
}

// A larger valid structure reused by the closure and back-and-forth cases.
const LStructure& built_structure() {
  static LStructure s = [] {
    RoundOptions opts;
    opts.caps = Caps{12, 6, 3};
    ConstructionState st = build_free(h3(), Geometry(h3().types()), 2, opts);
    return LStructure{st.geometry, st.diagram};
  }();
  return s;
}

}  // namespace

TEST_CASE("amalgamation class diagram shapes") {
  CHECK(is_amalgamation_diagram(c3()));
  CHECK(is_amalgamation_diagram(h3()));
  CoxeterDiagram f4({"1", "2", "3", "4"},
                    {{"1", "2", 3}, {"2", "3", 4}, {"3", "4", 3}});
  CHECK(is_amalgamation_diagram(f4));
  // declaration order does not matter
  CoxeterDiagram scrambled({"plane", "point", "line"},
                           {{"point", "line", 3}, {"line", "plane", 4}});
  CHECK(is_amalgamation_diagram(scrambled));

  CoxeterDiagram a3({"1", "2", "3"}, {{"1", "2", 3}, {"2", "3", 3}});
  CHECK_FALSE(is_amalgamation_diagram(a3));
  CoxeterDiagram c4({"1", "2", "3", "4"},
                    {{"1", "2", 3}, {"2", "3", 3}, {"3", "4", 4}});
  CHECK_FALSE(is_amalgamation_diagram(c4));
  CoxeterDiagram h4({"1", "2", "3", "4"},
                    {{"1", "2", 3}, {"2", "3", 3}, {"3", "4", 5}});
  CHECK_FALSE(is_amalgamation_diagram(h4));
  CHECK_FALSE(is_amalgamation_diagram(CoxeterDiagram({"1", "2"}, {{"1", "2", 4}})));
  CHECK_FALSE(is_amalgamation_diagram(
      CoxeterDiagram({"1", "2", "3"}, {{"1", "2", 3}, {"2", "3", 6}})));
}

TEST_CASE("structure checks") {
  LStructure s = path_fixture();
  auto rs = check_lstructure(s);
  REQUIRE(rs.size() == 5);
  CHECK(rs[0].property == "diagram-shape");
  CHECK(rs[1].property == "type-universe");
  CHECK(rs[2].property == "F");
  CHECK(rs[3].property == "P");
  CHECK(rs[4].property == "D");
  for (const auto& r : rs) CHECK(r.pass);

  LStructure back = LStructure::from_json(s.to_json());
  CHECK(back.geometry == s.geometry);
  CHECK(back.diagram == s.diagram);
}

TEST_CASE("path functions") {
  LStructure s = path_fixture();
  // unique shortest path l1 -> l2 in the residue of p: (l1, s1, l2)
  CHECK(eval_f(s, 0, 0, 1, 2) == 1);
  CHECK(eval_f(s, 1, 0, 1, 2) == 3);
  CHECK(eval_f(s, 2, 0, 1, 2) == 2);
  CHECK(eval_f(s, 3, 0, 1, 2) == 0);   // index beyond the path length
  CHECK(eval_f(s, -1, 0, 1, 2) == 0);  // negative index
  CHECK(eval_f(s, 0, 0, 1, 1) == 1);   // trivial path y = z

  // y outside the residue of x
  LStructure t = path_fixture();
  VertexId stray = t.geometry.add_vertex(1);
  CHECK(eval_f(t, 0, 0, stray, 2) == 0);

  // a second plane through l1 and l2 makes the shortest path ambiguous
  LStructure u = path_fixture();
  VertexId s2 = u.geometry.add_vertex(2);
  u.geometry.add_incidence(0, s2);
  u.geometry.add_incidence(1, s2);
  u.geometry.add_incidence(2, s2);
  CHECK(eval_f(u, 0, 0, 1, 2) == 0);
  CHECK(eval_f(u, 1, 0, 1, 2) == 0);

  CHECK(path_index_bound(s) == 2);
  CHECK_THROWS_AS(eval_f(s, 0, 99, 0, 1), Error);
}

TEST_CASE("common neighbor functions") {
  Geometry g(c3().types());
  g.add_vertex(2);  // 0: s1
  g.add_vertex(2);  // 1: s2
  g.add_vertex(1);  // 2: l
  g.add_incidence(0, 2);
  g.add_incidence(1, 2);
  LStructure s{std::move(g), c3()};

  int line_t = 1, plane_t = 2, point_t = 0;
  CHECK(eval_g(s, plane_t, line_t, 0, 1) == 2);  // the unique common line
  CHECK(eval_g(s, plane_t, line_t, 0, 0) == 0);  // x = y
  CHECK(eval_g(s, plane_t, line_t, 2, 1) == 2);  // x of the wrong type
  CHECK(eval_g(s, line_t, plane_t, 2, 2) == 2);

  // the (point, line) bond is 3: no such function exists
  CHECK_THROWS_AS(eval_g(s, point_t, line_t, 0, 1), Error);

  // a second common line removes uniqueness
  LStructure u = s;
  VertexId l2 = u.geometry.add_vertex(1);
  u.geometry.add_incidence(0, l2);
  u.geometry.add_incidence(1, l2);
  CHECK(eval_g(u, plane_t, line_t, 0, 1) == 0);
}

TEST_CASE("generated closures") {
  LStructure s = path_fixture();
  CHECK(generated_closure(s, {}).empty());

  std::vector<VertexId> all{0, 1, 2, 3};
  CHECK(generated_closure(s, all) == all);

  // {l1, l2}: the common plane arrives via g, then p via the path through it
  CHECK(generated_closure(s, {1, 2}) == all);

  // closure is a closure operator on a constructed structure
  const LStructure& base = built_structure();
  int n = base.geometry.vertex_count();
  REQUIRE(n >= 2);
  for (VertexId seed : {0, n / 2, n - 1}) {
    std::vector<VertexId> c1 = generated_closure(base, {seed});
    CHECK(std::find(c1.begin(), c1.end(), seed) != c1.end());  // extensive
    CHECK(generated_closure(base, c1) == c1);                  // idempotent
    std::vector<VertexId> bigger = c1;
    bigger.push_back(static_cast<VertexId>((seed + 1) % n));
    std::vector<VertexId> c2 = generated_closure(base, bigger);
    CHECK(std::includes(c2.begin(), c2.end(), c1.begin(), c1.end()));  // monotone
  }

  Substructure sub = generated_substructure(s, {1, 2});
  CHECK(sub.base_vertices == all);
  CHECK(sub.structure.geometry.vertex_count() == 4);
  CHECK(check_embedding(sub.structure, s, sub.inclusion, true).pass);
}

TEST_CASE("embedding validation") {
  LStructure s = path_fixture();
  Substructure sub = generated_substructure(s, {0});
  CheckResult ok = check_embedding(sub.structure, s, sub.inclusion, true);
  CHECK(ok.pass);

  // arity: map must cover exactly the source vertices
  Embedding bad_arity{{0, 1}};
  CHECK(check_embedding(sub.structure, s, bad_arity).witness["clause"] == "arity");

  // wrong range, duplicate image, wrong type, missing incidence
  LStructure pair(path_fixture());
  Geometry small(c3().types());
  small.add_vertex(0);
  small.add_vertex(1);
  small.add_incidence(0, 1);
  LStructure src{std::move(small), c3()};

  CHECK(check_embedding(src, pair, Embedding{{0, 99}}).witness["clause"] == "range");
  CHECK(check_embedding(src, pair, Embedding{{0, 0}}).witness["clause"] ==
        "injectivity");
  CHECK(check_embedding(src, pair, Embedding{{1, 0}}).witness["clause"] == "type");

  // a non-incident point/line pair mapped onto an incident one
  Geometry loose(c3().types());
  loose.add_vertex(0);
  loose.add_vertex(1);
  LStructure src2{std::move(loose), c3()};
  CHECK(check_embedding(src2, pair, Embedding{{0, 1}}).witness["clause"] ==
        "incidence");

  // two lines with a unique common plane inside, two common planes outside:
  // the inclusion fails exactly on the g commutation clause
  Geometry parent(c3().types());
  parent.add_vertex(1);  // 0: x
  parent.add_vertex(1);  // 1: y
  parent.add_vertex(2);  // 2: u
  parent.add_vertex(2);  // 3: v
  parent.add_incidence(0, 2);
  parent.add_incidence(1, 2);
  parent.add_incidence(0, 3);
  parent.add_incidence(1, 3);
  LStructure big{std::move(parent), c3()};

  Geometry inner(c3().types());
  inner.add_vertex(1);
  inner.add_vertex(1);
  inner.add_vertex(2);
  inner.add_incidence(0, 2);
  inner.add_incidence(1, 2);
  LStructure small_g{std::move(inner), c3()};

  CheckResult structural = check_embedding(small_g, big, Embedding{{0, 1, 2}});
  CHECK(structural.pass);  // incidence-wise the map is fine
  CheckResult functional =
      check_embedding(small_g, big, Embedding{{0, 1, 2}}, true);
  CHECK_FALSE(functional.pass);
  CHECK(functional.witness["clause"] == "g");
}

TEST_CASE("free amalgams") {
  CoxeterDiagram d = c3();
  LStructure empty{Geometry(d.types()), d};

  // over the empty base: disjoint union plus the forced cross incidence
  Geometry pb(d.types());
  pb.add_vertex(0);
  LStructure point_b{std::move(pb), d};
  Geometry sc(d.types());
  sc.add_vertex(2);
  LStructure plane_c{std::move(sc), d};
  AmalgamResult r1 = free_amalgam(empty, point_b, plane_c, Embedding{{}},
                                  Embedding{{}});
  CHECK(r1.structure.geometry.vertex_count() == 2);
  CHECK(r1.structure.geometry.incidence_count() == 1);  // point-plane forced
  CHECK(r1.structure.geometry.incident(r1.lambda(0), r1.mu(0)));

  Geometry lc(d.types());
  lc.add_vertex(1);
  LStructure line_c{std::move(lc), d};
  AmalgamResult r2 =
      free_amalgam(empty, point_b, line_c, Embedding{{}}, Embedding{{}});
  CHECK(r2.structure.geometry.incidence_count() == 0);  // adjacent types: free

  // b = c = a with identities: the amalgam is a again
  LStructure flag = path_fixture();
  Embedding id{{0, 1, 2, 3}};
  AmalgamResult r3 = free_amalgam(flag, flag, flag, id, id);
  CHECK(r3.structure.geometry == flag.geometry);

  // two flags over a shared line close up to a maximal flag
  Geometry ga(d.types());
  ga.add_vertex(1);
  LStructure a{std::move(ga), d};
  Geometry gb(d.types());
  gb.add_vertex(1);
  gb.add_vertex(0);
  gb.add_incidence(0, 1);
  LStructure b{std::move(gb), d};
  Geometry gc(d.types());
  gc.add_vertex(1);
  gc.add_vertex(2);
  gc.add_incidence(0, 1);
  LStructure c{std::move(gc), d};

  AmalgamResult r4 = free_amalgam(a, b, c, Embedding{{0}}, Embedding{{0}});
  CHECK(r4.structure.geometry.vertex_count() == 3);
  CHECK(r4.structure.geometry.incidence_count() == 3);
  CHECK(r4.lambda(0) == r4.mu(0));  // the commuting square on the base
  for (const auto& chk : check_lstructure(r4.structure)) CHECK(chk.pass);

  // an identification that would merge two common-neighbor witnesses is
  // stopped at embedding validation: the base map cannot commute with g
  Geometry two_lines(d.types());
  two_lines.add_vertex(1);
  two_lines.add_vertex(1);
  LStructure a2{std::move(two_lines), d};
  auto with_plane = [&] {
    Geometry g(d.types());
    g.add_vertex(1);
    g.add_vertex(1);
    g.add_vertex(2);
    g.add_incidence(0, 2);
    g.add_incidence(1, 2);
    return LStructure{std::move(g), d};
  };
  LStructure b2 = with_plane();
  LStructure c2 = with_plane();
  bool threw = false;
  try {
    free_amalgam(a2, b2, c2, Embedding{{0, 1}}, Embedding{{0, 1}});
  } catch (const Error& e) {
    threw = true;
    CHECK(std::string(e.what()).find("validation") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("closing a structure back into the class") {
  LStructure flag = path_fixture();
  LStructure same = close_into_class(flag, 3, Caps{64, 0, 64});
  CHECK(same.geometry == flag.geometry);  // only path insertion ever runs

  const LStructure& base = built_structure();
  LStructure closed = close_into_class(base, 1, Caps{0, 4, 0});
  CHECK(closed.geometry.vertex_count() >= base.geometry.vertex_count());
  for (const auto& chk : check_lstructure(closed)) CHECK(chk.pass);
}

TEST_CASE("amalgamation harness") {
  ApReport zero = check_amalgamation_property(h3(), 0, 12, 1);
  CHECK(zero.samples == 0);
  CHECK(zero.ap_pass == 0);
  CHECK(zero.hp_pass == 0);

  ApReport r = check_amalgamation_property(h3(), 10, 12, 1);
  CHECK(r.samples == 10);
  CHECK(r.hp_pass == 10);
  CHECK(r.hp_fail == 0);
  CHECK(r.ap_pass == 10);
  CHECK(r.ap_fail == 0);
  CHECK(r.jep_samples >= 2);  // every fifth sample amalgamates over nothing
  CHECK(r.failures.empty());

  ApReport again = check_amalgamation_property(h3(), 10, 12, 1);
  CHECK(again.to_json() == r.to_json());
}

TEST_CASE("single back-and-forth extension steps") {
  LStructure s = path_fixture();

  // {p, l1} is closed: adding l2 forces the plane via g, then the forced
  // extension must map the whole closure {p, l1, l2, s1}
  PartialIso iso;
  iso.pairs = {{0, 0}, {1, 1}};
  ExtendReport rep = extend_partial_iso(s, iso, 2);
  CHECK(rep.extended);
  CHECK(rep.outcome == "extended");
  REQUIRE(rep.iso.pairs.size() == 4);
  for (auto [d, c] : rep.iso.pairs) CHECK(d == c);
  CHECK(rep.nodes > 0);

  ExtendReport broke = extend_partial_iso(s, iso, 2, 0);
  CHECK_FALSE(broke.extended);
  CHECK(broke.outcome == "budget-exhausted");

  CHECK_THROWS_AS(extend_partial_iso(s, iso, 0), Error);  // target in domain

  // {l1, l2} generates everything, so it is not a valid domain
  PartialIso open;
  open.pairs = {{1, 1}, {2, 2}};
  CHECK_THROWS_AS(extend_partial_iso(s, open, 0), Error);

  // l1 carries a point, l2 does not: no image for the point can exist
  Geometry g(c3().types());
  g.add_vertex(0);
  g.add_vertex(1);
  g.add_vertex(1);
  g.add_incidence(0, 1);
  LStructure t{std::move(g), c3()};
  PartialIso swap;
  swap.pairs = {{1, 2}};
  ExtendReport none = extend_partial_iso(t, swap, 0);
  CHECK_FALSE(none.extended);
  CHECK(none.outcome == "no-candidate");
}

TEST_CASE("embedding JSON forms") {
  Embedding e{{3, 1, 4}};
  Embedding round = Embedding::from_json(e.to_json());
  CHECK(round.map == e.map);
  CHECK(Embedding::from_json(nlohmann::json::array({3, 1, 4})).map ==
        std::vector<VertexId>{3, 1, 4});
  CHECK_THROWS_AS(
      Embedding::from_json(nlohmann::json{{"version", 9}, {"map", {0}}}),
      Error);
}
