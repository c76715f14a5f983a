#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "qclab/qclab.hpp"

namespace {

using namespace qclab;

ExpSum random_sum(std::mt19937_64& rng, long n, double wmax) {
  std::uniform_real_distribution<double> freq(-wmax, wmax);
  std::normal_distribution<double> coef(0.0, 1.0);
  std::vector<Term> t;
  for (long i = 0; i < n; ++i) t.push_back({freq(rng), complex(coef(rng), coef(rng))});
  return canonicalize(std::move(t));
}

ExpSum cos_sum(double a) { return canonicalize({{-0.5 * a, 0.5}, {0.5 * a, 0.5}}); }

ExpSum union_sum() { return multiply(cos_sum(1.0), cos_sum(std::sqrt(2.0))); }

void BM_Multiply(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const ExpSum f = random_sum(rng, state.range(0), 10.0);
  const ExpSum g = random_sum(rng, state.range(0), 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(multiply(f, g));
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_Multiply)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_NeumannInverse(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const ExpSum f = random_sum(rng, state.range(0), 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(neumann_inverse(f, std::nullopt));
}
BENCHMARK(BM_NeumannInverse)->DenseRange(2, 6, 2);

void BM_FindRealZeros(benchmark::State& state) {
  const ExpSum f = union_sum();
  const double r = static_cast<double>(state.range(0)) + 0.25;
  const Window w = safe_window(f, {-r, r});
  for (auto _ : state) benchmark::DoNotOptimize(find_real_zeros(f, w));
}
BENCHMARK(BM_FindRealZeros)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BohrScan(benchmark::State& state) {
  const ExpSum f = union_sum();
  const ZeroSet a = find_real_zeros(f, safe_window(f, {-2000.25, 2000.25}));
  std::vector<double> grid;
  for (int k = -24; k <= 24; ++k) grid.push_back(0.25 * k);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bohr_scan(a, grid, t, 0.1));
}
BENCHMARK(BM_BohrScan)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
