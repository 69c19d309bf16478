#include <benchmark/benchmark.h>

#include "cylab/connectivity.hpp"
#include "cylab/lineproc.hpp"
#include "cylab/scaffold.hpp"
#include "cylab/special.hpp"

using namespace cylab;

static void BM_SampleLineProcess(benchmark::State& state) {
  const double rho = static_cast<double>(state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) {
    const LineSample s = sample_line_process(1.0, Window{Ball{Vec(3), rho}}, 1, rep++);
    benchmark::DoNotOptimize(s.size());
  }
}
BENCHMARK(BM_SampleLineProcess)->Arg(20)->Arg(40);

static void BM_BuildGraph(benchmark::State& state) {
  const LineSample s = sample_line_process(1.0, Window{Ball{Vec(3), static_cast<double>(state.range(0))}}, 2, 0);
  for (auto _ : state) {
    const IntersectionGraph g = build_graph(s, 1.0);
    benchmark::DoNotOptimize(g.edge_count());
  }
  state.counters["lines"] = static_cast<double>(s.size());
}
BENCHMARK(BM_BuildGraph)->Arg(20)->Arg(40);

static void BM_TilesCrossed(benchmark::State& state) {
  const AxisBox box{Vec{0.0, 0.0, 0.0, 0.0}, static_cast<double>(state.range(0))};
  CounterRng rng(3, 0);
  for (auto _ : state) {
    const Line l = canonicalize(Vec(4), uniform_unit_vector(rng, 4));
    benchmark::DoNotOptimize(tiles_crossed(l, box).size());
  }
}
BENCHMARK(BM_TilesCrossed)->Arg(64)->Arg(1024);

static void BM_RegIncBeta(benchmark::State& state) {
  double x = 0.001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reg_inc_beta(x, 2.5, 0.5));
    x = x < 0.99 ? x + 0.0137 : 0.001;
  }
}
BENCHMARK(BM_RegIncBeta);
BENCHMARK_MAIN();
