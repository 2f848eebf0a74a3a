#include <benchmark/benchmark.h>

#include <cmath>

#include "ostsel/coherence.hpp"
#include "ostsel/design.hpp"
#include "ostsel/ost.hpp"
#include "ostsel/signal.hpp"
#include "ostsel/stoc.hpp"

namespace {

void BM_GramDeviation(benchmark::State& state) {
  const int cols = static_cast<int>(state.range(0));
  const ostsel::DesignMatrix phi = ostsel::gen_gaussian(cols / 4, cols, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ostsel::gram_deviation(phi));
  }
  state.SetComplexityN(cols);
}
BENCHMARK(BM_GramDeviation)->Arg(256)->Arg(512)->Arg(1024)->Complexity();

void BM_CoherenceCheck(benchmark::State& state) {
  const int cols = static_cast<int>(state.range(0));
  const ostsel::DesignMatrix phi = ostsel::gen_gaussian(cols / 4, cols, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ostsel::check_coherence_property(phi));
  }
}
BENCHMARK(BM_CoherenceCheck)->Arg(256)->Arg(1024);

void BM_OneStepThreshold(benchmark::State& state) {
  const int cols = static_cast<int>(state.range(0));
  const int n = cols / 2;
  const ostsel::DesignMatrix phi = ostsel::gen_gaussian(n, cols, 3);
  const ostsel::SparseSignal s =
      ostsel::gen_signal(cols, 5, ostsel::ValueModel::kEqual, 4);
  const ostsel::Measurement m = ostsel::measure(phi, s, 1e-4, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ostsel::one_step_threshold(phi, m, 0.3));
  }
}
BENCHMARK(BM_OneStepThreshold)->Arg(512)->Arg(1024)->Arg(2048);

void BM_StocDeltaEstimate(benchmark::State& state) {
  const int trials = static_cast<int>(state.range(0));
  const ostsel::DesignMatrix phi = ostsel::gen_gaussian(128, 512, 6);
  const Eigen::VectorXcd z = Eigen::VectorXcd::Constant(8, 1.0 / std::sqrt(8.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ostsel::stoc_delta_estimate(phi, 8, z, 0.5, trials, 7));
  }
}
BENCHMARK(BM_StocDeltaEstimate)->Arg(100)->Arg(1000);

void BM_MeasureNoise(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ostsel::DesignMatrix phi = ostsel::gen_gaussian(n, 2 * n, 8);
  const ostsel::SparseSignal s =
      ostsel::gen_signal(2 * n, 4, ostsel::ValueModel::kEqual, 9);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ostsel::measure(phi, s, 0.01, seed++));
  }
}
BENCHMARK(BM_MeasureNoise)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
