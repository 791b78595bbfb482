#include <benchmark/benchmark.h>

#include "l1pt/experiment_harness.hpp"

namespace {

// n = range(0), α = 0.5, k = range(1) percent of n
l1pt::ProblemInstance instance(const benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1) * n / 100);
  return l1pt::sample_planted(n, n / 2, k, l1pt::NonzeroLaw::StandardNormal, 12345);
}

void BM_BasisPursuit(benchmark::State& state) {
  const auto inst = instance(state);
  for (auto _ : state) benchmark::DoNotOptimize(l1pt::basis_pursuit_solve(inst).iterations);
}
BENCHMARK(BM_BasisPursuit)->Args({200, 13})->Args({200, 25})->Args({400, 13})->Unit(benchmark::kMillisecond);

void BM_Amp(benchmark::State& state) {
  const auto inst = instance(state);
  l1pt::SolverOptions opts;
  opts.max_iter = 3000;
  for (auto _ : state) benchmark::DoNotOptimize(l1pt::amp_solve(inst, opts).iterations);
}
BENCHMARK(BM_Amp)->Args({200, 13})->Args({400, 13})->Unit(benchmark::kMillisecond);

void BM_Omp(benchmark::State& state) {
  const auto inst = instance(state);
  const int k = static_cast<int>(state.range(1) * state.range(0) / 100);
  for (auto _ : state) benchmark::DoNotOptimize(l1pt::omp_solve(inst, k).iterations);
}
BENCHMARK(BM_Omp)->Args({200, 13})->Args({400, 13})->Unit(benchmark::kMillisecond);

void BM_Oracle12x6(benchmark::State& state) {
  const auto inst = l1pt::sample_planted(12, 6, 2, l1pt::NonzeroLaw::StandardNormal, 7);
  for (auto _ : state) benchmark::DoNotOptimize(l1pt::l1_oracle_bruteforce(inst).unique);
}
BENCHMARK(BM_Oracle12x6)->Unit(benchmark::kMicrosecond);

}  // namespace
