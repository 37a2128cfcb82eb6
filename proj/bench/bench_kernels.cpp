// Serial reference versus OpenMP pair-sum kernels.
#include <benchmark/benchmark.h>

#include <random>

#include "flexi/kernels.hpp"

namespace {

flexi::kernels::PointSet random_points(std::size_t n, std::size_t dims, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  flexi::kernels::PointSet p;
  p.dims = dims;
  p.coords.resize(n * dims);
  for (auto& c : p.coords) c = u(rng);
  return p;
}

void BM_SelfSerial(benchmark::State& state) {
  const auto p = random_points(static_cast<std::size_t>(state.range(0)), 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(flexi::kernels::serial::self_sum(p));
  state.SetComplexityN(state.range(0));
}

void BM_SelfParallel(benchmark::State& state) {
  const auto p = random_points(static_cast<std::size_t>(state.range(0)), 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(flexi::kernels::self_sum(p));
  state.SetComplexityN(state.range(0));
}

void BM_RowCrossSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_points(n, 2, 2);
  const auto b = random_points(n / 10, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(flexi::kernels::serial::row_cross_sums(a, b));
}

void BM_RowCrossParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_points(n, 2, 2);
  const auto b = random_points(n / 10, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(flexi::kernels::row_cross_sums(a, b));
}

}  // namespace

BENCHMARK(BM_SelfSerial)->RangeMultiplier(2)->Range(1 << 10, 1 << 14)->Complexity();
BENCHMARK(BM_SelfParallel)->RangeMultiplier(2)->Range(1 << 10, 1 << 14)->Complexity();
BENCHMARK(BM_RowCrossSerial)->Arg(20000);
BENCHMARK(BM_RowCrossParallel)->Arg(20000);

BENCHMARK_MAIN();
