#include <benchmark/benchmark.h>

#include "pss/catalog.hpp"
#include "pss/curvature.hpp"
#include "pss/frame.hpp"
#include "pss/grid.hpp"

using namespace pss;

namespace {

GridSpec strip(int n) { return GridSpec{0.15, 1.35, 0.15, 1.35, n, n}; }

void BM_SampleSoliton(benchmark::State& state) {
  GridSpec spec = strip(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_soliton(1.0, spec));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SampleSoliton)->Arg(101)->Arg(201)->Complexity();

void BM_IntegrateFrame(benchmark::State& state) {
  ProblemDef p = parse_problem(*catalog_source("sine-gordon-8"));
  int n = static_cast<int>(state.range(0));
  SolutionGrid sol = sample_soliton(1.0, strip(n).refined());
  FrameField ff = evaluate_forms(p, sol);
  SffValues sff = SffValues::from(ff);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_frame(ff, sff, SeedPose::identity()));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_IntegrateFrame)->Arg(51)->Arg(101)->Complexity();

void BM_BrioschiAudit(benchmark::State& state) {
  ProblemDef p = parse_problem(*catalog_source("sine-gordon-8"));
  int n = static_cast<int>(state.range(0));
  SolutionGrid sol = sample_soliton(1.0, strip(n).refined());
  FrameField ff = evaluate_forms(p, sol);
  ImmersedSurface surf =
      integrate_frame(ff, SffValues::from(ff), SeedPose::identity());
  for (auto _ : state) {
    benchmark::DoNotOptimize(curvature_check(surf));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_BrioschiAudit)->Arg(51)->Arg(101)->Complexity();

}  // namespace
