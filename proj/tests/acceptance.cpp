// Release gate: runs the eleven acceptance checks end to end and prints one
// PASS/FAIL line per criterion. Exit status is the number of failures, so
// the binary doubles as a CI step. Criteria that shell out use the forge
// binary named by the FORGE_BIN compile definition.

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coxforge/cn_construction.hpp"
#include "coxforge/error.hpp"
#include "coxforge/fraisse.hpp"
#include "coxforge/free_construction.hpp"
#include "coxforge/free_properties.hpp"
#include "coxforge/geometry.hpp"
#include "coxforge/io.hpp"
#include "coxforge/substrate.hpp"
#include "oracles.hpp"

using namespace coxforge;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int shell(const std::string& cmd) {
  int raw = std::system(cmd.c_str());
  if (raw == -1) return -1;
  if (WIFEXITED(raw)) return WEXITSTATUS(raw);
  return -1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::string("<unreadable:") + path + ">";
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CoxeterDiagram diag_c3() {
  return CoxeterDiagram({"point", "line", "plane"},
                        {{"point", "line", 3}, {"line", "plane", 4}});
}

CoxeterDiagram diag_h3() {
  return CoxeterDiagram({"point", "line", "plane"},
                        {{"point", "line", 3}, {"line", "plane", 5}});
}

CoxeterDiagram diag_f4() {
  return CoxeterDiagram(
      {"point", "line", "plane", "symp"},
      {{"point", "line", 3}, {"line", "plane", 4}, {"plane", "symp", 3}});
}

CoxeterDiagram diag_i2(const ExtInt& m) {
  return CoxeterDiagram({"a", "b"}, {{"a", "b", m}});
}

refcheck::RefGraph to_ref(const Rank2View& v) {
  refcheck::RefGraph g(v.size());
  for (int k = 0; k < v.size(); ++k)
    for (int w : v.adj(k))
      if (k < w) g.add_edge(k, w);
  return g;
}

refcheck::RefGraph to_ref(const LocalGraph& lg) {
  refcheck::RefGraph g(static_cast<int>(lg.ids.size()));
  for (std::size_t k = 0; k < lg.adj.size(); ++k)
    for (int w : lg.adj[k])
      if (static_cast<int>(k) < w) g.add_edge(static_cast<int>(k), w);
  return g;
}

// Final states of the staged builds; criterion 6 replays their task logs.
std::vector<std::pair<std::string, ConstructionState>> g_staged;

bool crit1_neumaier(std::string& detail) {
  Geometry g = fixture_neumaier();
  CoxeterDiagram d = diag_c3();
  CheckResult r = is_geometry_of_type_M(g, d);
  if (!r.pass) {
    detail = "in-process check failed: " + r.witness.dump();
    return false;
  }
  // the advertised residue parameters, measured directly
  Flag pt{g.vertices_of_type(0).front()};
  Rank2View quad = Rank2View::build(g, pt, 1, 2);
  if (quad.girth() != ExtInt(8) || quad.diameter() != ExtInt(4)) {
    detail = "point residue expected girth 8 / diameter 4, got " +
             quad.girth().str() + "/" + quad.diameter().str();
    return false;
  }
  auto t0 = Clock::now();
  int rc = shell(std::string(FORGE_BIN) +
                 " verify --properties typeM --geometry neumaier"
                 " --diagram C3 > tmp_acc_c1.json 2>&1");
  double dt = seconds_since(t0);
  if (rc != 0) {
    detail = "forge verify exited " + std::to_string(rc) + ": " +
             read_file("tmp_acc_c1.json").substr(0, 200);
    return false;
  }
  if (dt >= 30.0) {
    detail = "verify took " + std::to_string(dt) + "s (budget 30s)";
    return false;
  }
  detail = "typeM PASS in-process and via CLI";
  return true;
}

bool crit2_oracle_agreement(std::string& detail) {
  std::mt19937_64 rng(20250816);
  const int percents[] = {15, 30, 50, 70};
  for (int trial = 0; trial < 100; ++trial) {
    refcheck::RandomBipartite rb =
        refcheck::random_bipartite(rng, 10, percents[trial % 4]);
    Geometry g({"a", "b"});
    for (int i = 0; i < rb.left; ++i) g.add_vertex(0);
    for (int i = 0; i < rb.right; ++i) g.add_vertex(1);
    for (auto [a, b] : rb.edges) g.add_incidence(a, rb.left + b);
    Rank2View view = rank2_restriction(g, 0, 1);
    refcheck::RefGraph ref(rb.left + rb.right);
    for (auto [a, b] : rb.edges) ref.add_edge(a, rb.left + b);

    int rg = refcheck::ref_girth(ref);
    ExtInt vg = view.girth();
    bool girth_ok = (rg == -1) ? vg.is_infinite() : vg == ExtInt(rg);
    int rd = refcheck::ref_diameter(ref);
    ExtInt vd = view.diameter();
    bool diam_ok = (rd == -1) ? vd.is_infinite() : vd == ExtInt(rd);
    if (!girth_ok || !diam_ok) {
      detail = "trial " + std::to_string(trial) + ": girth " + vg.str() +
               " vs " + std::to_string(rg) + ", diameter " + vd.str() +
               " vs " + std::to_string(rd);
      return false;
    }
  }
  detail = "girth and diameter match brute force on 100 graphs";
  return true;
}

bool crit3_admission_gate(std::string& detail) {
  RoundOptions opts;
  opts.caps = Caps{8, 4, 2};

  std::vector<std::pair<std::string, CoxeterDiagram>> rejected{
      {"A3", CoxeterDiagram({"1", "2", "3"}, {{"1", "2", 3}, {"2", "3", 3}})},
      {"C4", CoxeterDiagram({"1", "2", "3", "4"},
                            {{"1", "2", 3}, {"2", "3", 3}, {"3", "4", 4}})},
      {"B4", CoxeterDiagram({"1", "2", "3", "4"},
                            {{"1", "2", 4}, {"2", "3", 3}, {"3", "4", 3}})},
      {"F4+3", CoxeterDiagram({"1", "2", "3", "4", "5"},
                              {{"1", "2", 3},
                               {"2", "3", 4},
                               {"3", "4", 3},
                               {"4", "5", 3}})}};
  for (auto& [name, d] : rejected) {
    bool threw = false;
    try {
      build_free(d, Geometry(d.types()), 1, opts);
    } catch (const Error&) {
      threw = true;
    }
    if (!threw) {
      detail = name + " was not rejected";
      return false;
    }
  }

  std::vector<std::pair<std::string, CoxeterDiagram>> accepted{
      {"C3", diag_c3()},
      {"H3", diag_h3()},
      {"F4", diag_f4()},
      {"I2(3)", diag_i2(ExtInt(3))},
      {"I2(4)", diag_i2(ExtInt(4))},
      {"I2(5)", diag_i2(ExtInt(5))},
      {"I2(8)", diag_i2(ExtInt(8))},
      {"I2(inf)", diag_i2(ExtInt::infinity())},
      {"digon", CoxeterDiagram({"a", "b"}, {})}};
  for (auto& [name, d] : accepted) {
    try {
      build_free(d, Geometry(d.types()), 1, opts);
    } catch (const Error& e) {
      detail = name + " was rejected: " + e.what();
      return false;
    }
  }
  detail = "4 diagrams with the forbidden chain rejected, 9 admissible built";
  return true;
}

bool crit4_staged_builds(std::string& detail) {
  g_staged.clear();
  std::vector<std::pair<std::string, CoxeterDiagram>> diagrams{
      {"C3", diag_c3()}, {"H3", diag_h3()}, {"F4", diag_f4()}};
  std::string grew;
  for (auto& [name, d] : diagrams) {
    auto t0 = Clock::now();
    ConstructionState st = make_state(d, Geometry(d.types()));
    RoundOptions opts;  // default caps
    nlohmann::json after2, after3;
    for (int r = 1; r <= 3; ++r) {
      run_round(st, opts);
      CheckResult c = check_fpd(st.geometry, st.diagram);
      if (!c.pass) {
        detail = name + " round " + std::to_string(r) + " lost property " +
                 c.property;
        return false;
      }
      if (r == 2) after2 = progress_metrics(st);
      if (r == 3) after3 = progress_metrics(st);
    }
    double dt = seconds_since(t0);
    if (dt >= 120.0) {
      detail = name + " took " + std::to_string(dt) + "s (budget 120s)";
      return false;
    }
    // ratios over the full census, compared exactly by cross multiplication
    long long t2 = after2.at("total_flags").get<long long>();
    long long t3 = after3.at("total_flags").get<long long>();
    long long thin2 = after2.at("thin_corank1_flags").get<long long>();
    long long thin3 = after3.at("thin_corank1_flags").get<long long>();
    long long disc2 = after2.at("disconnected_residues").get<long long>();
    long long disc3 = after3.at("disconnected_residues").get<long long>();
    if (t2 <= 0 || t3 <= 0) {
      detail = name + ": empty flag census";
      return false;
    }
    if (thin3 * t2 > thin2 * t3)
      grew += name + " thin " + std::to_string(thin2) + "/" +
              std::to_string(t2) + "->" + std::to_string(thin3) + "/" +
              std::to_string(t3) + " ";
    if (disc3 * t2 > disc2 * t3)
      grew += name + " disconnected " + std::to_string(disc2) + "/" +
              std::to_string(t2) + "->" + std::to_string(disc3) + "/" +
              std::to_string(t3) + " ";
    // the builds are sound either way; later criteria replay these logs
    g_staged.emplace_back(name, std::move(st));
  }
  if (!grew.empty()) {
    detail =
        "properties held every round, but census-normalized ratios rose "
        "2->3: " +
        grew +
        "(forced incidences multiply the flag census faster than "
        "completions accrue at any cap; the fraction of corank-1 flags "
        "that are thin does fall)";
    return false;
  }
  detail = "3 rounds each, properties held, normalized ratios non-increasing";
  return true;
}

bool crit5_random_applications(std::string& detail) {
  std::mt19937_64 rng(5);

  // path insertions over staged states of all three admissible rank-3/4
  // shapes, re-enumerated after every application
  int b_applied = 0;
  std::vector<ConstructionState> pools;
  for (const CoxeterDiagram& d : {diag_c3(), diag_h3(), diag_f4()}) {
    RoundOptions opts;
    opts.caps = Caps{16, 8, 4};
    pools.push_back(build_free(d, Geometry(d.types()), 2, opts));
  }
  int spins = 0;
  while (b_applied < 200 && spins < 400) {
    ++spins;
    ConstructionState& st = pools[spins % pools.size()];
    std::vector<Task> tasks = enumerate_tasks(st, Caps{0, 64, 0});
    std::vector<Task> viable;
    for (const Task& t : tasks)
      if (task_viable(st, t)) viable.push_back(t);
    if (viable.empty()) {
      RoundOptions grow;
      grow.caps = Caps{16, 0, 0};
      run_round(st, grow);
      continue;
    }
    const Task& t = viable[rng() % viable.size()];
    procedure_b(st, t.flag, t.type_i, t.type_j, t.x, t.y);
    CheckResult c = check_fpd(st.geometry, st.diagram);
    if (!c.pass) {
      detail = "path insertion " + std::to_string(b_applied + 1) +
               " broke property " + c.property;
      return false;
    }
    ++b_applied;
  }
  if (b_applied < 200) {
    detail = "only " + std::to_string(b_applied) +
             " viable path insertions found";
    return false;
  }

  // component joins over rank-2 states seeded with 51 disjoint edges
  int c_applied = 0;
  for (const ExtInt& m : {ExtInt(4), ExtInt(5)}) {
    CoxeterDiagram d = diag_i2(m);
    Geometry seed(d.types());
    for (int k = 0; k < 51; ++k) {
      VertexId a = seed.add_vertex(0);
      VertexId b = seed.add_vertex(1);
      seed.add_incidence(a, b);
    }
    ConstructionState st = make_state(d, std::move(seed));
    for (int k = 0; k < 50; ++k) {
      std::vector<Task> tasks = enumerate_tasks(st, Caps{0, 0, 64});
      std::vector<Task> viable;
      for (const Task& t : tasks)
        if (task_viable(st, t)) viable.push_back(t);
      if (viable.empty()) {
        detail = "component join pool m=" + m.str() + " dried up at " +
                 std::to_string(k);
        return false;
      }
      const Task& t = viable[rng() % viable.size()];
      procedure_c(st, t.flag, t.type_i, t.type_j, t.x, t.y);
      CheckResult c = check_fpd(st.geometry, st.diagram);
      if (!c.pass) {
        detail = "component join " + std::to_string(c_applied + 1) +
                 " broke property " + c.property;
        return false;
      }
      ++c_applied;
    }
  }
  detail = std::to_string(b_applied) + " path insertions and " +
           std::to_string(c_applied) +
           " component joins, properties preserved throughout";
  return true;
}

bool crit6_replay_postconditions(std::string& detail) {
  if (g_staged.empty()) {
    detail = "no staged builds to replay";
    return false;
  }
  long long b_checked = 0;
  for (auto& [name, st] : g_staged) {
    ConstructionState re = make_state(st.diagram, Geometry(st.diagram.types()));
    for (const TaskRecord& rec : st.task_log) {
      if (!rec.applied) continue;
      const Task& t = rec.task;
      std::vector<VertexId> created;
      switch (t.kind) {
        case TaskKind::A:
          created.push_back(procedure_a(re, t.flag, t.type_i));
          break;
        case TaskKind::B:
          created = procedure_b(re, t.flag, t.type_i, t.type_j, t.x, t.y);
          break;
        case TaskKind::C:
          created = procedure_c(re, t.flag, t.type_i, t.type_j, t.x, t.y);
          break;
      }
      if (created != rec.created) {
        detail = name + ": replay created different ids";
        return false;
      }
      if (t.kind != TaskKind::B) continue;
      ++b_checked;
      ExtInt m = re.diagram.bond(t.type_i, t.type_j);
      Rank2View view =
          Rank2View::build(re.geometry, t.flag, t.type_i, t.type_j);
      ExtInt dist = view.distance(t.x, t.y);
      if (dist != ExtInt(m.value() - 1)) {
        detail = name + ": post-distance " + dist.str() + " expected " +
                 std::to_string(m.value() - 1);
        return false;
      }
      ExtInt girth = view.girth();
      if (girth < m.times(2)) {
        detail = name + ": post-girth " + girth.str() + " below " +
                 m.times(2).str();
        return false;
      }
    }
    if (!(re.geometry == st.geometry)) {
      detail = name + ": replayed geometry differs from the original";
      return false;
    }
  }
  if (b_checked == 0) {
    detail = "no applied path insertions in any staged log";
    return false;
  }
  detail = std::to_string(b_checked) +
           " path insertions replayed with exact distance and girth bounds";
  return true;
}

bool crit7_chain_runs(std::string& detail) {
  for (int m : {4, 5}) {
    auto t0 = Clock::now();
    CnState s = init_cn(3, m);
    CnRunOptions opts;
    opts.height = 3;
    opts.limit = 100;
    opts.check_every_step = true;
    run_cn(s, 50, opts);  // throws on any per-step property failure

    for (CheckResult& r : check_cn_properties(s, 8))
      if (!r.pass) {
        detail = "(3," + std::to_string(m) + ") final property " + r.property +
                 " failed";
        return false;
      }
    for (VertexId v : s.vertices_of_type(1)) {
      refcheck::RefGraph ref = to_ref(residue_at(s, s.space_of(v)));
      int g = refcheck::ref_girth(ref);
      if (g != -1 && g < 2 * m) {
        detail = "(3," + std::to_string(m) + ") local girth " +
                 std::to_string(g) + " at vertex " + std::to_string(v);
        return false;
      }
    }
    for (VertexId top : s.vertices_of_type(3)) {
      CheckResult r = verify_type_n_residue(s, top, 20);
      if (!r.pass) {
        detail = "(3," + std::to_string(m) + ") panel map of top " +
                 std::to_string(top) + " failed: " + r.witness.dump();
        return false;
      }
    }
    for (const CnStepRecord& rec : s.log()) {
      std::set<std::string> uniq(rec.path_precursors.begin(),
                                 rec.path_precursors.end());
      if (uniq.size() != rec.path_precursors.size()) {
        detail = "(3," + std::to_string(m) + ") step " +
                 std::to_string(rec.step) + " repeated a path precursor";
        return false;
      }
    }
    double dt = seconds_since(t0);
    if (dt >= 120.0) {
      detail = "(3," + std::to_string(m) + ") took " + std::to_string(dt) +
               "s (budget 120s)";
      return false;
    }
  }
  detail = "(3,4) and (3,5): 50 checked steps, local girth, panel maps and "
           "precursor injectivity all clean";
  return true;
}

bool crit8_scheduler_fairness(std::string& detail) {
  // nu2 reaches list 8 first at step 256 and list 9 at step 512, so a
  // 200-step run can only exercise lists 0..7; the run goes to 512 to show
  // every list advancing.
  CnState s = init_cn(3, 4);
  CnRunOptions opts;
  run_cn(s, 512, opts);
  const std::vector<CnStepRecord>& log = s.log();
  if (log.size() != 512) {
    detail = "expected 512 log records, got " + std::to_string(log.size());
    return false;
  }
  for (int j = 1; j <= 512; ++j)
    if (log[j - 1].list != nu2(j)) {
      detail = "step " + std::to_string(j) + " consumed list " +
               std::to_string(log[j - 1].list) + ", nu2 says " +
               std::to_string(nu2(j));
      return false;
    }
  std::set<int> first200, all;
  for (int j = 1; j <= 512; ++j) {
    if (j <= 200) first200.insert(log[j - 1].list);
    all.insert(log[j - 1].list);
  }
  for (int k = 0; k <= 7; ++k)
    if (!first200.count(k)) {
      detail = "list " + std::to_string(k) + " idle in the first 200 steps";
      return false;
    }
  for (int k = 0; k <= 9; ++k)
    if (!all.count(k)) {
      detail = "list " + std::to_string(k) + " never advanced in 512 steps";
      return false;
    }
  detail = "list sequence equals nu2 for all 512 steps; lists 0..7 advance "
           "within 200 steps, 8 and 9 at their first nu2 slots (256, 512)";
  return true;
}

Subspace random_subspace(std::mt19937_64& rng, int n) {
  for (;;) {
    int d = 1 + static_cast<int>(rng() % (n - 1));
    std::vector<std::vector<long long>> rows(d, std::vector<long long>(n));
    for (auto& row : rows)
      for (auto& x : row) x = static_cast<long long>(rng() % 7) - 3;
    try {
      return Subspace::from_integer_rows(n, rows);
    } catch (const Error&) {
    }
  }
}

std::vector<std::vector<Rational>> rational_rows(const Subspace& s) {
  std::vector<std::vector<Rational>> out;
  for (const auto& row : s.rows()) {
    out.emplace_back();
    for (const auto& x : row) out.back().emplace_back(Rational(x));
  }
  return out;
}

bool crit9_substrate(std::string& detail) {
  std::mt19937_64 rng(9);

  for (int trial = 0; trial < 500; ++trial) {
    int n = 3 + static_cast<int>(rng() % 3);
    Subspace a = random_subspace(rng, n);
    std::vector<std::vector<Rational>> rows = rational_rows(a);
    int d = static_cast<int>(rows.size());
    for (int k = 0; k < 10; ++k) {
      int op = static_cast<int>(rng() % 3);
      int i = static_cast<int>(rng() % d);
      int j = static_cast<int>(rng() % d);
      if (op == 0 && i != j) {
        std::swap(rows[i], rows[j]);
      } else if (op == 1) {
        Rational c(1 + static_cast<long long>(rng() % 3),
                   1 + static_cast<long long>(rng() % 3));
        if (rng() % 2) c = -c;
        for (auto& x : rows[i]) x *= c;
      } else if (i != j) {
        Rational c(static_cast<long long>(rng() % 5) - 2);
        for (int t = 0; t < n; ++t) rows[i][t] += c * rows[j][t];
      }
    }
    Subspace b = Subspace::canonicalize(n, rows);
    if (!(b == a)) {
      detail = "canonical form changed under a basis mix (trial " +
               std::to_string(trial) + ")";
      return false;
    }
  }

  SubstrateHandle h(3);
  for (const Subspace& z :
       {Subspace::unit_span(3, {0}), Subspace::unit_span(3, {2}),
        Subspace::from_integer_rows(3, {{1, 1, 0}})}) {
    std::vector<Subspace> hs = h.hyperplanes_through(z, {}, 12);
    if (hs.size() != 12 || h.hyperplanes_through(z, {}, 12) != hs) {
      detail = "hyperplane enumeration not reproducible";
      return false;
    }
    std::set<Subspace> uniq(hs.begin(), hs.end());
    if (uniq.size() != hs.size()) {
      detail = "hyperplane enumeration repeated a value";
      return false;
    }
    for (const Subspace& hp : hs)
      if (hp.dim() != 2 || !nested(z, hp)) {
        detail = "enumerated hyperplane missing z";
        return false;
      }
  }

  int true_cases = 0;
  for (int trial = 0; trial < 300; ++trial) {
    int n = 3 + static_cast<int>(rng() % 3);
    Subspace a = random_subspace(rng, n);
    Subspace b = random_subspace(rng, n);
    if (trial % 2 == 0 && a.dim() < n - 1) {
      // build a superspace of a so both answers appear often
      std::vector<std::vector<Rational>> rows = rational_rows(a);
      rows.emplace_back(n);
      for (auto& x : rows.back())
        x = Rational(static_cast<long long>(rng() % 7) - 3);
      try {
        b = Subspace::canonicalize(n, rows);
      } catch (const Error&) {
        continue;
      }
    }
    std::vector<std::vector<Rational>> stacked = rational_rows(a);
    for (auto& row : rational_rows(b)) stacked.push_back(row);
    // nested is symmetric: the union's rank collapses to one side's dim
    int rank = refcheck::ref_rank(stacked);
    bool expect = rank == a.dim() || rank == b.dim();
    if (nested(a, b) != expect) {
      detail = "nested disagrees with elimination rank (trial " +
               std::to_string(trial) + ")";
      return false;
    }
    if (expect) ++true_cases;
  }
  if (true_cases < 50) {
    detail = "nested oracle comparison too one-sided (" +
             std::to_string(true_cases) + " containments)";
    return false;
  }
  detail = "500 basis mixes canonical, hyperplane enumeration stable, "
           "nested matches elimination on 300 pairs";
  return true;
}

bool crit10_amalgamation(std::string& detail) {
  auto t0 = Clock::now();
  CoxeterDiagram h3 = diag_h3();
  ApReport rep = check_amalgamation_property(h3, 100, 12, 0);
  if (rep.hp_pass != 100 || rep.hp_fail != 0) {
    detail = "hereditary " + std::to_string(rep.hp_pass) + "/100";
    return false;
  }
  if (rep.ap_pass != 100 || rep.ap_fail != 0) {
    detail = "amalgamation " + std::to_string(rep.ap_pass) + "/100: " +
             (rep.failures.empty() ? std::string("")
                                   : rep.failures.front().dump());
    return false;
  }

  RoundOptions opts;
  opts.caps = Caps{16, 8, 4};
  ConstructionState bs = build_free(h3, Geometry(h3.types()), 3, opts);
  LStructure base{std::move(bs.geometry), h3};
  int n = base.geometry.vertex_count();
  std::mt19937_64 rng(10);
  int done = 0, tries = 0;
  while (done < 50 && tries < 5000) {
    ++tries;
    VertexId v = static_cast<VertexId>(rng() % n);
    const std::vector<VertexId>& nb = base.geometry.neighbors(v);
    if (nb.empty()) continue;
    VertexId w = nb[rng() % nb.size()];
    if (generated_closure(base, {v, w}).size() > 14) continue;
    PartialIso iso;
    iso.pairs = {{v, v}};
    ExtendReport er = extend_partial_iso(base, iso, w, 10000000);
    if (!er.extended) {
      detail = "identity extension " + std::to_string(done + 1) + " at (" +
               std::to_string(v) + "," + std::to_string(w) + ") ended " +
               er.outcome;
      return false;
    }
    ++done;
  }
  if (done < 50) {
    detail = "only " + std::to_string(done) + " extension samples found";
    return false;
  }
  double dt = seconds_since(t0);
  if (dt >= 300.0) {
    detail = "took " + std::to_string(dt) + "s (budget 300s)";
    return false;
  }
  detail = "hereditary 100/100, amalgamation 100/100, 50 extensions, " +
           std::to_string(static_cast<int>(dt)) + "s";
  return true;
}

bool crit11_determinism(std::string& detail) {
  struct Cmd {
    std::string name;
    std::string args;   // with %O substituted by the output file
    std::string redir;  // "" or the stdout capture file prefix
  };
  std::vector<Cmd> cmds{
      {"build-free",
       " build-free --diagram C3 --rounds 2 --cap-a 16 --cap-b 8 --cap-c 4"
       " --out %O",
       ""},
      {"build-cn", " build-cn --n 3 --m 4 --steps 12 --out %O", ""},
      {"fraisse-ap",
       " fraisse ap --diagram H3 --samples 10 --size-bound 12 --seed 7", "%O"},
      {"export", " export --geometry neumaier --out %O", ""}};
  for (const Cmd& c : cmds) {
    std::string f1 = "tmp_acc_det_" + c.name + "_1";
    std::string f2 = "tmp_acc_det_" + c.name + "_2";
    for (const std::string& f : {f1, f2}) {
      std::string args = c.args;
      std::string cmd = std::string(FORGE_BIN);
      if (std::size_t at = args.find("%O"); at != std::string::npos)
        args.replace(at, 2, f);
      cmd += args;
      if (!c.redir.empty())
        cmd += " > " + f;
      else
        cmd += " > /dev/null";
      cmd += " 2>&1";
      int rc = shell(cmd);
      if (rc != 0) {
        detail = c.name + " exited " + std::to_string(rc);
        return false;
      }
    }
    std::string a = read_file(f1), b = read_file(f2);
    if (a.empty() || a != b) {
      detail = c.name + " produced different bytes across two runs";
      return false;
    }
  }
  detail = "build-free, build-cn, fraisse ap and export byte-identical on "
           "repeat runs";
  return true;
}

struct Criterion {
  int number;
  const char* label;
  bool (*run)(std::string&);
};

}  // namespace

int main() {
  const Criterion table[] = {
      {1, "packaged geometry verification", crit1_neumaier},
      {2, "girth/diameter oracle agreement", crit2_oracle_agreement},
      {3, "diagram admission gate", crit3_admission_gate},
      {4, "staged builds keep properties", crit4_staged_builds},
      {5, "randomized procedure applications", crit5_random_applications},
      {6, "path insertion postconditions", crit6_replay_postconditions},
      {7, "chain construction properties", crit7_chain_runs},
      {8, "scheduler fairness", crit8_scheduler_fairness},
      {9, "substrate canonical forms", crit9_substrate},
      {10, "amalgamation harness", crit10_amalgamation},
      {11, "deterministic outputs", crit11_determinism},
  };
  int failures = 0;
  for (const Criterion& c : table) {
    std::string detail;
    bool pass = false;
    auto t0 = Clock::now();
    try {
      pass = c.run(detail);
    } catch (const VerificationError& e) {
      detail = std::string("verification error: ") + e.what();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double dt = seconds_since(t0);
    std::ostringstream line;
    line << "criterion " << c.number << " (" << c.label << "): "
         << (pass ? "PASS" : "FAIL") << " - " << detail << " [" << std::fixed
         << std::setprecision(1) << dt << "s]";
    std::cout << line.str() << std::endl;
    if (!pass) ++failures;
  }
  if (failures == 0)
    std::cout << "all 11 criteria passed" << std::endl;
  else
    std::cout << failures << " criteria failed" << std::endl;
  return failures;
}
