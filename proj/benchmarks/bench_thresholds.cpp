#include <benchmark/benchmark.h>

#include "l1pt/special_functions.hpp"
#include "l1pt/threshold_curves.hpp"

namespace {

void BM_Erfinv(benchmark::State& state) {
  double p = -0.999;
  for (auto _ : state) {
    benchmark::DoNotOptimize(l1pt::erfinv(p));
    p = p > 0.998 ? -0.999 : p + 1e-3;
  }
}
BENCHMARK(BM_Erfinv);

void BM_BetaW(benchmark::State& state) {
  const auto method = static_cast<l1pt::Method>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(l1pt::beta_w(method, 0.5));
  state.SetLabel(std::string(l1pt::to_string(method)));
}
BENCHMARK(BM_BetaW)->DenseRange(0, 2);

void BM_Equivalence19(benchmark::State& state) {
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(i / 20.0);
  for (auto _ : state) benchmark::DoNotOptimize(l1pt::verify_equivalence(grid).pass);
}
BENCHMARK(BM_Equivalence19)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
