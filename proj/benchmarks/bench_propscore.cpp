#include <benchmark/benchmark.h>

#include <cmath>

#include "propscore/catalog.hpp"
#include "propscore/quadrature.hpp"
#include "propscore/verify.hpp"

using namespace propscore;

namespace {

ScoreFn log_truth() {
  return ScoreFn::single(LogForm{1.0, 0.0, 0.0}, kNegInf, 0.0, Direction::NonDecreasing);
}

void BM_DeriveClosedForm(benchmark::State& state) {
  const ScoreFn T = log_truth();
  for (auto _ : state) {
    ScoringRule r = derive_false_score(T, -2.0 * std::log(2.0));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_DeriveClosedForm);

// Derivation plus evaluation on the default grid; each point is one adaptive integral.
void BM_DeriveOpaqueOnGrid(benchmark::State& state) {
  const ScoreFn T = catalog_rule(CatalogName::SphericalRule).T;
  for (auto _ : state) {
    const ScoringRule r = derive_false_score(T);
    double sum = 0.0;
    for (double x : default_grid().points) sum += r.F(x).value();
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_DeriveOpaqueOnGrid)->Unit(benchmark::kMillisecond);

void BM_AdaptiveSingularEnd(benchmark::State& state) {
  for (auto _ : state) {
    const auto r = integrate_adaptive([](double u) { return std::log(u); }, 0.5,
                                      1.0 - std::ldexp(1.0, -20), Weight::OneOver1MinusUSq);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_AdaptiveSingularEnd)->Unit(benchmark::kMicrosecond);

void BM_ProprietyCheck(benchmark::State& state) {
  const ScoringRule r = catalog_rule(CatalogName::LogRule);
  const GridSpec grid = make_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const ProprietyReport rep = propriety_check(r, grid);
    benchmark::DoNotOptimize(rep.passed);
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(grid.points.size()));
}
BENCHMARK(BM_ProprietyCheck)->Arg(51)->Arg(201)->Arg(801)->Complexity(benchmark::oNSquared)
    ->Unit(benchmark::kMillisecond);

void BM_LayerCake(benchmark::State& state) {
  const ScoreFn T = log_truth();
  for (auto _ : state) {
    benchmark::DoNotOptimize(level_set_decomposition(T, 0.3));
  }
}
BENCHMARK(BM_LayerCake)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
