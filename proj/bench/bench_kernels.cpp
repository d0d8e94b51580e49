// Serial reference against the OpenMP kernels on the two heaviest sweeps:
// the mean-axiom grid of a root-finding mean and the derivative-system scan.
#include <benchmark/benchmark.h>

#include "itermean/invariance.hpp"
#include "itermean/kernels.hpp"
#include "itermean/means.hpp"

using namespace itermean;

namespace {

MeanObject example2_mean() {
  static const MeanObject m = [] {
    const auto r = MonotoneMap::from_expr(FuncExpr::parse("p*x^2/(x+1)").bind("p", 0.5));
    return make_iterative_mean_from_r(r, NumericsConfig{});
  }();
  return m;
}

void BM_CheckMean(benchmark::State& state) {
  NumericsConfig cfg;
  cfg.parallel = state.range(0) != 0;
  cfg.mean_grid.n = static_cast<std::size_t>(state.range(1));
  const auto m = example2_mean();
  for (auto _ : state) benchmark::DoNotOptimize(check_mean(m, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(1) * state.range(1));
  state.SetLabel(cfg.parallel ? "openmp" : "serial");
}
BENCHMARK(BM_CheckMean)->ArgsProduct({{0, 1}, {21, 41}})->Unit(benchmark::kMillisecond);

void BM_Remark7Scan(benchmark::State& state) {
  NumericsConfig cfg;
  const auto axis = remark7_axis(cfg);
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    const auto best = parallel ? kernels::min3d(axis, remark7_violation) : kernels::min3d_serial(axis, remark7_violation);
    benchmark::DoNotOptimize(best);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(axis.size() * axis.size() * axis.size()));
  state.SetLabel(parallel ? "openmp" : "serial");
}
BENCHMARK(BM_Remark7Scan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
