#include <benchmark/benchmark.h>

#include "coxforge/cn_construction.hpp"
#include "coxforge/fraisse.hpp"
#include "coxforge/free_construction.hpp"
#include "coxforge/geometry.hpp"
#include "coxforge/io.hpp"
#include "coxforge/substrate.hpp"

using namespace coxforge;

namespace {

CoxeterDiagram c3() {
  return CoxeterDiagram({"point", "line", "plane"},
                        {{"point", "line", 3}, {"line", "plane", 4}});
}

void bm_residue_girth(benchmark::State& state) {
  Geometry g = fixture_neumaier();
  Flag pt{g.vertices_of_type(0).front()};
  for (auto _ : state) {
    Rank2View v = Rank2View::build(g, pt, 1, 2);
    benchmark::DoNotOptimize(v.girth());
    benchmark::DoNotOptimize(v.diameter());
  }
}
BENCHMARK(bm_residue_girth);

void bm_type_m_check(benchmark::State& state) {
  Geometry g = fixture_neumaier();
  CoxeterDiagram d = c3();
  for (auto _ : state) {
    CheckResult r = is_geometry_of_type_M(g, d);
    benchmark::DoNotOptimize(r.pass);
  }
}
BENCHMARK(bm_type_m_check);

void bm_free_round(benchmark::State& state) {
  CoxeterDiagram d = c3();
  RoundOptions opts;
  opts.caps = Caps{16, 8, 4};
  for (auto _ : state) {
    ConstructionState st = build_free(d, Geometry(d.types()), 2, opts);
    benchmark::DoNotOptimize(st.geometry.vertex_count());
  }
}
BENCHMARK(bm_free_round);

void bm_hyperplanes(benchmark::State& state) {
  SubstrateHandle h(4);
  Subspace z = Subspace::from_integer_rows(4, {{1, 2, 0, -1}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(h.hyperplanes_through(z, {}, 16));
  }
}
BENCHMARK(bm_hyperplanes);

void bm_cn_steps(benchmark::State& state) {
  for (auto _ : state) {
    CnState s = init_cn(3, 4);
    CnRunOptions opts;
    run_cn(s, 16, opts);
    benchmark::DoNotOptimize(s.vertex_count());
  }
}
BENCHMARK(bm_cn_steps);

void bm_closure(benchmark::State& state) {
  CoxeterDiagram d = c3();
  RoundOptions opts;
  opts.caps = Caps{16, 8, 4};
  ConstructionState st = build_free(d, Geometry(d.types()), 2, opts);
  LStructure ls{std::move(st.geometry), d};
  int n = ls.geometry.vertex_count();
  for (auto _ : state) {
    benchmark::DoNotOptimize(generated_closure(ls, {0, n / 2}));
  }
}
BENCHMARK(bm_closure);

}  // namespace

BENCHMARK_MAIN();
