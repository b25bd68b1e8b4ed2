// SPDX-License-Identifier: Apache-2.0
#include <random>

#include <benchmark/benchmark.h>

#include "otfs/dd_matrix.hpp"
#include "otfs/fbl_math.hpp"
#include "otfs/power_alloc.hpp"

namespace {

otfs::ChannelConfig channel(int m, int n, int paths) {
  otfs::ChannelConfig cfg;
  cfg.grid = otfs::OtfsGrid{m, n, 7.5e3, 4.0e9};
  cfg.paths = paths;
  cfg.max_delay = std::min(8, m - 1);
  cfg.max_doppler = std::min(4, n / 2);
  return cfg;
}

void BM_SampleTapset(benchmark::State& state) {
  const auto cfg = channel(32, 16, static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(otfs::sample_tapset(cfg, rng));
}
BENCHMARK(BM_SampleTapset)->Arg(3)->Arg(7);

void BM_ParallelOutage(benchmark::State& state) {
  const otfs::fbl::SnrVector snrs{0.3, 1.2, 0.05, 2.0, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(otfs::fbl::parallel_outage(snrs, 512, 0.8));
}
BENCHMARK(BM_ParallelOutage);

void BM_WaterFilling(benchmark::State& state) {
  const auto cfg = channel(32, 16, 7);
  std::mt19937_64 rng(2);
  const auto taps = otfs::sample_tapset(cfg, rng);
  const otfs::PowerBudget budget{7.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(otfs::allocate_waterfilling(taps, budget));
}
BENCHMARK(BM_WaterFilling);

// Structured log-det (banded Gram + envelope Cholesky) against the dense route.
void BM_FrameCapacityStructured(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const auto cfg = channel(m, n, 5);
  std::mt19937_64 rng(3);
  const auto taps = otfs::sample_tapset(cfg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(otfs::frame_capacity_bits(taps, cfg.grid, 2.0));
}
BENCHMARK(BM_FrameCapacityStructured)->Args({8, 8})->Args({16, 16})->Args({32, 16})
    ->Unit(benchmark::kMillisecond);

void BM_FrameCapacityDense(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const auto cfg = channel(m, n, 5);
  std::mt19937_64 rng(3);
  const auto taps = otfs::sample_tapset(cfg, rng);
  for (auto _ : state) {
    const auto h = otfs::build_h_dd(taps, cfg.grid);
    benchmark::DoNotOptimize(otfs::frame_capacity_bits(h, 2.0));
  }
}
BENCHMARK(BM_FrameCapacityDense)->Args({8, 8})->Args({16, 16})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
