#include "stap/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

stap::CMatrix random_matrix(long rows, long cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  stap::CMatrix a(rows, cols);
  for (long j = 0; j < cols; ++j) {
    for (long i = 0; i < rows; ++i) a(i, j) = {g(rng), g(rng)};
  }
  return a;
}

// Channel transform T_aux^H X: NM x (NM-1) against NM x L.
void BM_AdjointSerial(benchmark::State& state) {
  const auto t = random_matrix(144, 143, 1);
  const auto x = random_matrix(144, state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(stap::kernels::serial::adjoint_product(t, x));
}

void BM_AdjointOmp(benchmark::State& state) {
  const auto t = random_matrix(144, 143, 1);
  const auto x = random_matrix(144, state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(stap::kernels::omp::adjoint_product(t, x));
}

// Weighted normal matrix of the l1-GSC update and the clutter covariance Gram.
void BM_GramSerial(benchmark::State& state) {
  const auto a = random_matrix(state.range(0), 143, 3);
  for (auto _ : state) benchmark::DoNotOptimize(stap::kernels::serial::gram(a));
}

void BM_GramOmp(benchmark::State& state) {
  const auto a = random_matrix(state.range(0), 143, 3);
  for (auto _ : state) benchmark::DoNotOptimize(stap::kernels::omp::gram(a));
}

}  // namespace

BENCHMARK(BM_AdjointSerial)->Arg(30)->Arg(60)->Arg(361);
BENCHMARK(BM_AdjointOmp)->Arg(30)->Arg(60)->Arg(361);
BENCHMARK(BM_GramSerial)->Arg(30)->Arg(60)->Arg(361);
BENCHMARK(BM_GramOmp)->Arg(30)->Arg(60)->Arg(361);

BENCHMARK_MAIN();
