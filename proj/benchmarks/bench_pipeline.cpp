// Microbenchmarks for the main computational stages: the d-invariant
// recursion, the windowed cover gradings, the differential, and the full
// pipeline on small knots.

#include <benchmark/benchmark.h>

#include "twobridge/gradings.hpp"
#include "twobridge/grid.hpp"
#include "twobridge/homology.hpp"
#include "twobridge/knot.hpp"
#include "twobridge/lens_d.hpp"

namespace {

void BM_d_lens_recursion(benchmark::State& state) {
  const long p = state.range(0);
  const long q = p > 2 ? p / 2 : 1;
  for (auto _ : state) {
    twobridge::Rational sum = 0;
    for (long i = 0; i < p; ++i) sum += twobridge::d_lens(p, q, i);
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_d_lens_recursion)->Arg(45)->Arg(129)->Arg(1001);

void BM_cover_maslov_table(benchmark::State& state) {
  const long p = state.range(0);
  const auto knot = twobridge::TwoBridgeKnot::create(p, 2);
  const twobridge::GridDiagram diagram = twobridge::GridDiagram::build(knot);
  for (auto _ : state) {
    auto table = twobridge::cover_maslov_table(diagram, twobridge::Role::w);
    benchmark::DoNotOptimize(table);
  }
}
BENCHMARK(BM_cover_maslov_table)->Arg(9)->Arg(45)->Arg(129);

void BM_differential(benchmark::State& state) {
  const long p = state.range(0);
  const auto knot = twobridge::TwoBridgeKnot::create(p, 2);
  const twobridge::GridDiagram diagram = twobridge::GridDiagram::build(knot);
  const auto keys = twobridge::compute_grading_keys(diagram);
  for (auto _ : state) {
    auto diff = twobridge::differential(diagram, twobridge::Role::w,
                                        &keys.maslov_w, &keys.maslov_z);
    benchmark::DoNotOptimize(diff);
  }
}
BENCHMARK(BM_differential)->Arg(9)->Arg(21)->Arg(45);

void BM_tau_and_d(benchmark::State& state) {
  const long p = state.range(0);
  const auto knot = twobridge::TwoBridgeKnot::create(p, 2);
  for (auto _ : state) {
    auto result = twobridge::tau_and_d(knot);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_tau_and_d)->Arg(5)->Arg(9)->Arg(21)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
