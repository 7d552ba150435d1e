#include <benchmark/benchmark.h>

#include "pss/catalog.hpp"
#include "pss/verify.hpp"

using namespace pss;

namespace {

ProblemDef load(const char* name) {
  return parse_problem(*catalog_source(name));
}

void BM_NormalizePythagorean(benchmark::State& state) {
  Expr s = Expr::apply(Func::Sin, Expr::z(0));
  Expr c = Expr::apply(Func::Cos, Expr::z(0));
  Expr e = (s.pow(2) + c.pow(2) - Expr::rational(1)) * (Expr::z(1) + s).pow(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize(e));
  }
}
BENCHMARK(BM_NormalizePythagorean);

void BM_Prolongation(benchmark::State& state) {
  ProblemDef p = load("fourth-order-45");
  int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    // rebuild the equation each round so the cache does not hide the work
    EquationDef eq = EquationDef::evolution(p.equation.rhs());
    benchmark::DoNotOptimize(eq.dx_rhs(depth));
  }
}
BENCHMARK(BM_Prolongation)->Arg(2)->Arg(4)->Arg(6);

void BM_StructureCheck(benchmark::State& state) {
  ProblemDef p = load("fourth-order-45");
  for (auto _ : state) {
    Report r = check_structure(p.forms, p.equation);
    benchmark::DoNotOptimize(r.all_passed());
  }
}
BENCHMARK(BM_StructureCheck);

void BM_CodazziCheck(benchmark::State& state) {
  ProblemDef p = load("fourth-order-45");
  for (auto _ : state) {
    Report r = check_codazzi(p.forms, p.equation, *p.sff);
    benchmark::DoNotOptimize(r.all_passed());
  }
}
BENCHMARK(BM_CodazziCheck);

}  // namespace
