// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dephasim/counting.hpp"
#include "dephasim/influence.hpp"

using namespace dephasim;

namespace {

const MixtureSpec kSpec = make_mixture(0.5, 0.9, 0.1);

void BM_SimulateSerial(benchmark::State& state) {
  const auto runs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(serial::simulate_runs(kSpec, 100, runs, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SimulateParallel(benchmark::State& state) {
  const auto runs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_runs(kSpec, 100, runs, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_WindowCorrelationSerial(benchmark::State& state) {
  const auto runs = simulate_runs(kSpec, 100, static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(serial::empirical_window_correlation(runs, 10, 10));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_WindowCorrelationParallel(benchmark::State& state) {
  const auto runs = simulate_runs(kSpec, 100, static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(empirical_window_correlation(runs, 10, 10));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

std::vector<DetectorSetup> make_setups(std::size_t count) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> theta(0.0, 1.5), angle(-3.0, 3.0), flux(0.0, 10.0);
  std::vector<DetectorSetup> setups(count);
  for (auto& s : setups) {
    s = {{theta(rng), angle(rng), angle(rng)}, {theta(rng), angle(rng), angle(rng)}, flux(rng), Direction::Forward};
  }
  return setups;
}

void BM_InfluenceSerial(benchmark::State& state) {
  const auto setups = make_setups(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::compute_influence_batch(setups));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_InfluenceParallel(benchmark::State& state) {
  const auto setups = make_setups(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_influence_batch(setups));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SimulateSerial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateParallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WindowCorrelationSerial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WindowCorrelationParallel)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InfluenceSerial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InfluenceParallel)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
