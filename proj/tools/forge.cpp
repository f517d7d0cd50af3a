#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coxforge/cn_construction.hpp"
#include "coxforge/error.hpp"
#include "coxforge/fraisse.hpp"
#include "coxforge/free_construction.hpp"
#include "coxforge/free_properties.hpp"
#include "coxforge/geometry.hpp"
#include "coxforge/io.hpp"

namespace {

using namespace coxforge;

CoxeterDiagram named_diagram(const std::string& name) {
  if (name == "A3")
    return CoxeterDiagram({"point", "line", "plane"},
                          {{"point", "line", 3}, {"line", "plane", 3}});
  if (name == "C3" || name == "B3")
    return CoxeterDiagram({"point", "line", "plane"},
                          {{"point", "line", 3}, {"line", "plane", 4}});
  if (name == "H3")
    return CoxeterDiagram({"point", "line", "plane"},
                          {{"point", "line", 3}, {"line", "plane", 5}});
  if (name == "C4" || name == "B4")
    return CoxeterDiagram(
        {"point", "line", "plane", "symp"},
        {{"point", "line", 3}, {"line", "plane", 3}, {"plane", "symp", 4}});
  if (name == "F4")
    return CoxeterDiagram(
        {"point", "line", "plane", "symp"},
        {{"point", "line", 3}, {"line", "plane", 4}, {"plane", "symp", 3}});
  if (name == "H4")
    return CoxeterDiagram(
        {"point", "line", "plane", "symp"},
        {{"point", "line", 3}, {"line", "plane", 3}, {"plane", "symp", 5}});
  throw Error("unknown diagram name: " + name +
              " (expected a file or one of A3, B3, C3, H3, B4, C4, F4, H4)");
}

CoxeterDiagram diagram_arg(const std::string& arg) {
  if (std::filesystem::exists(arg)) return load_diagram(arg);
  return named_diagram(arg);
}

// Accepts a bare geometry file or a build-free state file, whose geometry
// sits under the "geometry" key.
Geometry geometry_arg(const std::string& arg) {
  if (arg == "neumaier") return fixture_neumaier();
  nlohmann::json j = load_json(arg);
  if (j.is_object() && j.contains("geometry") && j.contains("task_log"))
    return Geometry::from_json(j.at("geometry"));
  return Geometry::from_json(j);
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error("cannot write " + out);
  f << text;
}

int report_checks(const std::vector<CheckResult>& rs) {
  nlohmann::json arr = nlohmann::json::array();
  bool all = true;
  for (const CheckResult& r : rs) {
    arr.push_back(r.to_json());
    all = all && r.pass;
  }
  std::cout << arr.dump(2) << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"construction and verification workbench for diagram "
               "geometries"};
  app.require_subcommand(1);
  int exit_code = 0;

  struct {
    std::string diagram, seed, out;
    int rounds = 3;
    int cap_a = 64, cap_b = 64, cap_c = 64;
    bool check_every_task = false;
  } bf;
  auto* cbf = app.add_subcommand("build-free", "run staged completion rounds");
  cbf->add_option("--diagram", bf.diagram, "diagram file or name")->required();
  cbf->add_option("--seed", bf.seed, "seed geometry file (default empty)");
  cbf->add_option("--rounds", bf.rounds, "completion rounds");
  cbf->add_option("--cap-a", bf.cap_a, "per-round flag completion cap");
  cbf->add_option("--cap-b", bf.cap_b, "per-round path insertion cap");
  cbf->add_option("--cap-c", bf.cap_c, "per-round component joining cap");
  cbf->add_flag("--check-every-task", bf.check_every_task,
                "re-verify properties after every task");
  cbf->add_option("--out", bf.out, "write the final state JSON here");
  cbf->callback([&] {
    CoxeterDiagram d = diagram_arg(bf.diagram);
    Geometry seed = bf.seed.empty() ? Geometry(d.types())
                                    : load_geometry(bf.seed);
    RoundOptions opts;
    opts.caps = Caps{bf.cap_a, bf.cap_b, bf.cap_c};
    opts.check_every_task = bf.check_every_task;
    ConstructionState st = build_free(d, std::move(seed), bf.rounds, opts);
    if (!bf.out.empty()) save_free_state(bf.out, st);
    nlohmann::json summary{{"vertices", st.geometry.vertex_count()},
                           {"incidences", st.geometry.incidence_count()},
                           {"stage", st.stage},
                           {"tasks", st.task_log.size()}};
    std::cout << summary.dump(2) << "\n";
  });

  struct {
    int n = 3, m = 4, steps = 0, limit = 100;
    long long height = 3;
    bool check_every_step = false;
    std::string out;
  } bc;
  auto* cbc = app.add_subcommand("build-cn", "run the scheduled chain "
                                             "construction over a projective "
                                             "substrate");
  cbc->add_option("--n", bc.n, "substrate dimension (>= 3)");
  cbc->add_option("--m", bc.m, "target girth parameter (>= 4)");
  cbc->add_option("--steps", bc.steps, "scheduler steps")->required();
  cbc->add_option("--height", bc.height, "initial enumeration height");
  cbc->add_option("--limit", bc.limit, "triples gathered per sweep");
  cbc->add_flag("--check-every-step", bc.check_every_step,
                "re-verify properties after every step");
  cbc->add_option("--out", bc.out, "write the final state JSON here");
  cbc->callback([&] {
    CnState st = init_cn(bc.n, bc.m);
    CnRunOptions opts;
    opts.height = bc.height;
    opts.limit = bc.limit;
    opts.check_every_step = bc.check_every_step;
    run_cn(st, bc.steps, opts);
    if (!bc.out.empty()) save_cn_state(bc.out, st);
    nlohmann::json summary{{"vertices", st.vertex_count()},
                           {"step", st.step()},
                           {"height", st.height()}};
    std::cout << summary.dump(2) << "\n";
  });

  struct {
    std::string properties, geometry, diagram, state;
    int sample = 8;
  } vf;
  auto* cvf = app.add_subcommand("verify", "run property checkers");
  cvf->add_option("--properties", vf.properties, "fpd, cn or typeM")
      ->required();
  cvf->add_option("--geometry", vf.geometry,
                  "geometry file or the name neumaier");
  cvf->add_option("--diagram", vf.diagram, "diagram file or name");
  cvf->add_option("--state", vf.state, "chain construction state JSON");
  cvf->add_option("--sample", vf.sample, "sample size for spot checks");
  cvf->callback([&] {
    if (vf.properties == "fpd" || vf.properties == "typeM") {
      if (vf.geometry.empty() || vf.diagram.empty())
        throw Error("verify: --geometry and --diagram are required for " +
                    vf.properties);
      Geometry g = geometry_arg(vf.geometry);
      CoxeterDiagram d = diagram_arg(vf.diagram);
      if (vf.properties == "typeM") {
        exit_code = report_checks({is_geometry_of_type_M(g, d)});
      } else {
        exit_code =
            report_checks({check_F(g, d), check_P(g, d), check_D(g, d)});
      }
    } else if (vf.properties == "cn") {
      if (vf.state.empty())
        throw Error("verify: --state is required for cn properties");
      CnState st = load_cn_state(vf.state);
      exit_code = report_checks(check_cn_properties(st, vf.sample));
    } else {
      throw Error("verify: unknown property set " + vf.properties);
    }
  });

  struct {
    std::string geometry, out;
    std::vector<VertexId> flag;
  } rs;
  auto* crs = app.add_subcommand("residue", "geometry induced on the "
                                            "common neighbors of a flag");
  crs->add_option("--geometry", rs.geometry, "geometry file or neumaier")
      ->required();
  crs->add_option("--flag", rs.flag, "comma-separated vertex ids")
      ->delimiter(',');
  crs->add_option("--out", rs.out, "write JSON here instead of stdout");
  crs->callback([&] {
    Geometry g = geometry_arg(rs.geometry);
    Residue res = make_residue(g, rs.flag);
    nlohmann::json j{{"geometry", res.geometry.to_json()},
                     {"to_parent", res.to_parent}};
    emit(rs.out, j.dump(2) + "\n");
  });

  struct {
    std::string geometry, out, format = "dot";
  } ex;
  auto* cex = app.add_subcommand("export", "emit a drawing of a geometry");
  cex->add_option("--geometry", ex.geometry, "geometry file or neumaier")
      ->required();
  cex->add_option("--format", ex.format, "only dot");
  cex->add_option("--out", ex.out, "write here instead of stdout");
  cex->callback([&] {
    if (ex.format != "dot") throw Error("export: unknown format " + ex.format);
    emit(ex.out, export_dot(geometry_arg(ex.geometry)));
  });

  struct {
    std::string state;
    int sample_cap = 64;
  } mt;
  auto* cmt = app.add_subcommand("metrics", "convergence counters for a "
                                            "construction state");
  cmt->add_option("--state", mt.state, "state JSON from build-free")
      ->required();
  cmt->add_option("--sample-cap", mt.sample_cap, "per-bond diameter samples");
  cmt->callback([&] {
    ConstructionState st = load_free_state(mt.state);
    std::cout << progress_metrics(st, mt.sample_cap).dump(2) << "\n";
  });

  auto* cfr = app.add_subcommand("fraisse", "amalgamation class tooling");
  cfr->require_subcommand(1);

  struct {
    std::string diagram;
    int samples = 100, size_bound = 12;
    unsigned long long seed = 0;
  } fa;
  auto* cfa = cfr->add_subcommand("ap", "sample hereditary and amalgamation "
                                        "checks");
  cfa->add_option("--diagram", fa.diagram, "diagram file or name")->required();
  cfa->add_option("--samples", fa.samples, "sampled triples");
  cfa->add_option("--size-bound", fa.size_bound,
                  "largest substructure drawn");
  cfa->add_option("--seed", fa.seed, "RNG seed");
  cfa->callback([&] {
    ApReport rep = check_amalgamation_property(diagram_arg(fa.diagram),
                                               fa.samples, fa.size_bound,
                                               fa.seed);
    std::cout << rep.to_json().dump(2) << "\n";
    exit_code = (rep.hp_fail == 0 && rep.ap_fail == 0) ? 0 : 1;
  });

  struct {
    std::string a, b, c, iota, kappa, out;
    int rounds = 1;
  } fm;
  auto* cfm = cfr->add_subcommand("amalgamate", "free amalgam of two "
                                                "structures over a shared "
                                                "substructure");
  cfm->add_option("--a", fm.a, "shared structure JSON")->required();
  cfm->add_option("--b", fm.b, "left structure JSON")->required();
  cfm->add_option("--c", fm.c, "right structure JSON")->required();
  cfm->add_option("--iota", fm.iota, "embedding of a into b")->required();
  cfm->add_option("--kappa", fm.kappa, "embedding of a into c")->required();
  cfm->add_option("--rounds", fm.rounds, "path insertion rounds afterwards");
  cfm->add_option("--out", fm.out, "write the result JSON here");
  cfm->callback([&] {
    LStructure a = LStructure::from_json(load_json(fm.a));
    LStructure b = LStructure::from_json(load_json(fm.b));
    LStructure c = LStructure::from_json(load_json(fm.c));
    Embedding iota = Embedding::from_json(load_json(fm.iota));
    Embedding kappa = Embedding::from_json(load_json(fm.kappa));
    AmalgamResult am = free_amalgam(a, b, c, iota, kappa);
    LStructure closed = fm.rounds > 0
                            ? close_into_class(am.structure, fm.rounds, Caps{})
                            : std::move(am.structure);
    nlohmann::json j{{"structure", closed.to_json()},
                     {"lambda", am.lambda.to_json()},
                     {"mu", am.mu.to_json()}};
    if (fm.out.empty()) {
      std::cout << j.dump(2) << "\n";
    } else {
      save_json(fm.out, j);
      nlohmann::json summary{
          {"vertices", closed.geometry.vertex_count()},
          {"incidences", closed.geometry.incidence_count()}};
      std::cout << summary.dump(2) << "\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const VerificationError& e) {
    nlohmann::json out{{"error", e.what()}, {"witness", e.witness()}};
    std::cout << out.dump(2) << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
