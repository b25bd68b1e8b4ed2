// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "otfs/dd_channel.hpp"
#include "otfs/power_alloc.hpp"

namespace otfs {

enum class Estimator {
  kTheoretical,        // log-det outage of the full DD channel matrix
  kLowerAverage,       // parallel-AWGN bound, average allocation
  kLowerWaterFilling,  // parallel-AWGN bound, water-filling allocation
};

/// How the Es/N0 sweep variable maps onto the per-realization power budget
/// (noise power is fixed at 1).
enum class TotalPowerModel {
  /// W = L * Es/N0: every path carries the full symbol energy under average
  /// allocation, matching the received energy seen by the log-det estimator.
  kPerPathSymbolEnergy,
  /// W = Es/N0: the total budget is split across paths.
  kTotalSymbolEnergy,
};

enum class CapacityRoute {
  kStructured,  // banded DD-core Gram + envelope Cholesky
  kDense,       // dense H_DD + dense Cholesky
};

/// One point of a sweep. es_n0 is linear here; dB conversion happens in
/// run_sweep and the config layer.
struct OperatingPoint {
  ChannelConfig channel;
  double coding_rate = 0.8;
  double es_n0 = 1.0;
  std::optional<std::int64_t> blocklength;  // defaults to M*N
  TotalPowerModel power_model = TotalPowerModel::kPerPathSymbolEnergy;
  CapacityRoute capacity_route = CapacityRoute::kStructured;

  std::int64_t effective_blocklength() const;
  /// k = round(R_c * M * N) information bits per frame.
  std::int64_t information_bits() const;
  PowerBudget power_budget() const;
};

struct PointEstimate {
  double outage = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::int64_t trials = 0;         // successful trials behind the estimate
  std::int64_t failed_trials = 0;
  bool below_resolution = false;   // estimate < 1/trials
};

/// Produces the channel realization of one trial from its derived seed.
using TapSampler = std::function<TapSet(std::uint64_t trial_seed)>;

TapSampler random_tap_sampler(const ChannelConfig& channel);

/// Seed of trial `trial` within the stream identified by `stream_seed`.
std::uint64_t trial_seed(std::uint64_t stream_seed, std::int64_t trial);

/// Mean of the per-realization parallel-channel outage with a normal 95% CI.
PointEstimate estimate_lower_bound(const OperatingPoint& point, AllocationStrategy strategy,
                                   std::int64_t trials, std::uint64_t stream_seed,
                                   const TapSampler& sampler, unsigned threads = 1);

/// Fraction of realizations whose frame log-det capacity falls below k bits,
/// with a Wilson 95% CI. Throws NumericalError if more than 0.1% of trials fail.
PointEstimate estimate_theoretical(const OperatingPoint& point, std::int64_t trials,
                                   std::uint64_t stream_seed, const TapSampler& sampler,
                                   unsigned threads = 1);

struct SweepSpec {
  ChannelConfig channel;  // `paths` is replaced by each entry of path_counts
  std::vector<double> es_n0_db;
  std::vector<double> coding_rates;
  std::vector<int> path_counts;
  std::vector<Estimator> estimators;
  std::int64_t bound_trials = 100000;
  std::int64_t theoretical_trials = 10000;
  std::uint64_t base_seed = 1;
  std::optional<std::int64_t> blocklength;
  TotalPowerModel power_model = TotalPowerModel::kPerPathSymbolEnergy;
  CapacityRoute capacity_route = CapacityRoute::kStructured;
  unsigned threads = 0;  // 0: default_thread_count()

  /// Throws ConfigError listing every violation.
  void validate() const;
  /// Sorted copy of the sweep axes; run_sweep works on this form.
  SweepSpec canonical() const;
};

struct SweepRow {
  Estimator estimator = Estimator::kLowerAverage;
  int paths = 1;
  double coding_rate = 0.0;
  double es_n0_db = 0.0;
  double outage = 0.0;
  std::int64_t trials = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t seed = 0;  // stream seed of the row's trials
  std::int64_t failed_trials = 0;
  bool below_resolution = false;

  bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
  std::vector<SweepRow> rows;

  std::int64_t failed_trials() const;
  bool operator==(const SweepResult&) const = default;
};

/// Evaluates every estimator over the Cartesian product of the sweep axes.
/// Rows come out ordered by (estimator, L, R_c, Es/N0). Trial seeds depend
/// only on (base_seed, estimator, L, R_c, Es/N0 index, trial index), so the
/// result is independent of thread count and input axis order.
SweepResult run_sweep(const SweepSpec& spec,
                      const std::function<void(const SweepRow&)>& on_row = {});

/// Stream seed of one sweep row.
std::uint64_t row_stream_seed(std::uint64_t base_seed, Estimator estimator, int paths,
                              double coding_rate, std::size_t es_n0_index);

double db_to_linear(double db);

/// OTFS_THREADS if set to a positive integer, else hardware concurrency.
unsigned default_thread_count();

std::string_view to_string(Estimator estimator);
Estimator estimator_from_string(std::string_view name);
std::string_view to_string(TotalPowerModel model);
TotalPowerModel power_model_from_string(std::string_view name);

}  // namespace otfs
