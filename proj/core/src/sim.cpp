// SPDX-License-Identifier: Apache-2.0
#include "otfs/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <set>
#include <string>
#include <thread>

#include "otfs/dd_matrix.hpp"
#include "otfs/errors.hpp"
#include "otfs/fbl_math.hpp"
#include "otfs/seeding.hpp"

namespace otfs {

namespace {

constexpr double kZ95 = 1.959963984540054;

struct TrialOutcome {
  double value = 0.0;
  bool failed = false;
};

// Runs body(trial) for every trial, splitting the index range into contiguous
// chunks. Outcomes are stored by index so the reduction order never depends
// on scheduling.
template <typename Body>
std::vector<TrialOutcome> run_trials(std::int64_t trials, unsigned threads, Body&& body) {
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
  const auto workers = static_cast<std::int64_t>(
      std::max<unsigned>(1, std::min<std::int64_t>(threads, trials)));

  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&](std::int64_t begin, std::int64_t end) {
    try {
      for (std::int64_t t = begin; t < end; ++t) {
        auto& out = outcomes[static_cast<std::size_t>(t)];
        try {
          out.value = body(t);
        } catch (const NumericalError&) {
          out.failed = true;
        } catch (const AllocationError&) {
          out.failed = true;
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0, trials);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) {
      pool.emplace_back(work, trials * w / workers, trials * (w + 1) / workers);
    }
  }
  if (error) std::rethrow_exception(error);
  return outcomes;
}

// mean and m2 are in units of `scale`, the largest outcome. Deep-tail
// outages reach 1e-300 and their squares would underflow to zero otherwise.
struct Moments {
  std::int64_t count = 0;
  std::int64_t failed = 0;
  double scale = 1.0;
  double mean = 0.0;
  double m2 = 0.0;
};

Moments reduce(const std::vector<TrialOutcome>& outcomes) {
  Moments m;
  double largest = 0.0;
  for (const auto& o : outcomes) {
    if (!o.failed) largest = std::max(largest, std::abs(o.value));
  }
  if (largest > 0.0) m.scale = largest;
  for (const auto& o : outcomes) {
    if (o.failed) {
      ++m.failed;
      continue;
    }
    ++m.count;
    const double v = o.value / m.scale;
    const double delta = v - m.mean;
    m.mean += delta / static_cast<double>(m.count);
    m.m2 += delta * (v - m.mean);
  }
  return m;
}

PointEstimate normal_interval(const Moments& m) {
  PointEstimate est;
  est.trials = m.count;
  est.failed_trials = m.failed;
  est.outage = std::clamp(m.mean * m.scale, 0.0, 1.0);
  const double half =
      m.count > 1 ? kZ95 * m.scale *
                        std::sqrt(m.m2 / static_cast<double>(m.count - 1) / static_cast<double>(m.count))
                  : 0.0;
  est.ci_low = std::clamp(est.outage - half, 0.0, est.outage);
  est.ci_high = std::clamp(est.outage + half, est.outage, 1.0);
  est.below_resolution = m.count > 0 && est.outage < 1.0 / static_cast<double>(m.count);
  return est;
}

PointEstimate wilson_interval(const Moments& m) {
  PointEstimate est;
  est.trials = m.count;
  est.failed_trials = m.failed;
  if (m.count == 0) return est;
  const double n = static_cast<double>(m.count);
  const double p = std::clamp(m.mean * m.scale, 0.0, 1.0);
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  est.outage = p;
  est.ci_low = std::clamp(center - half, 0.0, p);
  est.ci_high = std::clamp(center + half, p, 1.0);
  est.below_resolution = p < 1.0 / n;
  return est;
}

void require_trials(std::int64_t trials) {
  if (trials < 1) throw ConfigError("trials: must be >= 1");
}

}  // namespace

std::int64_t OperatingPoint::effective_blocklength() const {
  return blocklength.value_or(channel.grid.size());
}

std::int64_t OperatingPoint::information_bits() const {
  return std::llround(coding_rate * static_cast<double>(channel.grid.size()));
}

PowerBudget OperatingPoint::power_budget() const {
  const double scale =
      power_model == TotalPowerModel::kPerPathSymbolEnergy ? static_cast<double>(channel.paths) : 1.0;
  return PowerBudget{scale * es_n0, 1.0};
}

TapSampler random_tap_sampler(const ChannelConfig& channel) {
  channel.validate();
  return [channel](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_tapset(channel, rng);
  };
}

std::uint64_t trial_seed(std::uint64_t stream_seed, std::int64_t trial) {
  return derive_seed({stream_seed, static_cast<std::uint64_t>(trial)});
}

PointEstimate estimate_lower_bound(const OperatingPoint& point, AllocationStrategy strategy,
                                   std::int64_t trials, std::uint64_t stream_seed,
                                   const TapSampler& sampler, unsigned threads) {
  require_trials(trials);
  point.channel.validate();
  const std::int64_t n = point.effective_blocklength();
  const PowerBudget budget = point.power_budget();

  auto outcomes = run_trials(trials, threads, [&](std::int64_t t) {
    const TapSet taps = sampler(trial_seed(stream_seed, t));
    if (budget.total_power == 0.0) {
      return fbl::parallel_outage(fbl::SnrVector(std::vector<double>(taps.size(), 0.0)), n,
                                  point.coding_rate);
    }
    const Allocation alloc = strategy == AllocationStrategy::kAverage
                                 ? allocate_average(taps, budget)
                                 : allocate_waterfilling(taps, budget);
    return fbl::parallel_outage(alloc.snrs, n, point.coding_rate);
  });
  return normal_interval(reduce(outcomes));
}

PointEstimate estimate_theoretical(const OperatingPoint& point, std::int64_t trials,
                                   std::uint64_t stream_seed, const TapSampler& sampler,
                                   unsigned threads) {
  require_trials(trials);
  point.channel.validate();
  const std::int64_t k_bits = point.information_bits();
  if (k_bits < 1) throw ConfigError("coding_rate: R_c * M * N rounds to zero information bits");
  const OtfsGrid& grid = point.channel.grid;

  auto outcomes = run_trials(trials, threads, [&](std::int64_t t) {
    const TapSet taps = sampler(trial_seed(stream_seed, t));
    if (point.capacity_route == CapacityRoute::kDense) {
      return theoretical_outage_indicator(build_h_dd(taps, grid), point.es_n0, k_bits) ? 1.0 : 0.0;
    }
    return frame_capacity_bits(taps, grid, point.es_n0) < static_cast<double>(k_bits) ? 1.0 : 0.0;
  });
  const Moments m = reduce(outcomes);
  if (static_cast<double>(m.failed) > 1e-3 * static_cast<double>(trials)) {
    throw NumericalError("theoretical estimator: " + std::to_string(m.failed) + " of " +
                         std::to_string(trials) + " trials failed (limit 0.1%)");
  }
  return wilson_interval(m);
}

void SweepSpec::validate() const {
  std::vector<std::string> problems;
  try {
    channel.grid.validate();
  } catch (const ConfigError& e) {
    problems.insert(problems.end(), e.violations().begin(), e.violations().end());
  }
  if (es_n0_db.empty()) problems.push_back("es_n0_db: must not be empty");
  for (double db : es_n0_db) {
    if (!std::isfinite(db)) problems.push_back("es_n0_db: values must be finite");
  }
  if (std::set<double>(es_n0_db.begin(), es_n0_db.end()).size() != es_n0_db.size()) {
    problems.push_back("es_n0_db: values must be distinct");
  }
  if (coding_rates.empty()) problems.push_back("coding_rates: must not be empty");
  for (double rc : coding_rates) {
    if (!(rc > 0.0 && rc < 1.0)) {
      problems.push_back("coding_rates: " + std::to_string(rc) + " outside (0, 1)");
    }
  }
  if (std::set<double>(coding_rates.begin(), coding_rates.end()).size() != coding_rates.size()) {
    problems.push_back("coding_rates: values must be distinct");
  }
  if (path_counts.empty()) problems.push_back("path_counts: must not be empty");
  if (std::set<int>(path_counts.begin(), path_counts.end()).size() != path_counts.size()) {
    problems.push_back("path_counts: values must be distinct");
  }
  for (int paths : path_counts) {
    ChannelConfig c = channel;
    c.paths = paths;
    try {
      c.validate();
    } catch (const ConfigError& e) {
      for (const auto& v : e.violations()) {
        const std::string tagged = "path_counts[" + std::to_string(paths) + "]: " + v;
        if (std::find(problems.begin(), problems.end(), tagged) == problems.end()) {
          problems.push_back(tagged);
        }
      }
    }
  }
  if (estimators.empty()) problems.push_back("estimators: must not be empty");
  if (std::set<Estimator>(estimators.begin(), estimators.end()).size() != estimators.size()) {
    problems.push_back("estimators: values must be distinct");
  }
  if (bound_trials < 1) problems.push_back("trials: must be >= 1");
  if (theoretical_trials < 1) problems.push_back("theoretical_trials: must be >= 1");
  if (blocklength && *blocklength < 1) problems.push_back("blocklength: must be >= 1");
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

SweepSpec SweepSpec::canonical() const {
  SweepSpec out = *this;
  std::sort(out.es_n0_db.begin(), out.es_n0_db.end());
  std::sort(out.coding_rates.begin(), out.coding_rates.end());
  std::sort(out.path_counts.begin(), out.path_counts.end());
  std::sort(out.estimators.begin(), out.estimators.end());
  return out;
}

std::int64_t SweepResult::failed_trials() const {
  std::int64_t total = 0;
  for (const auto& r : rows) total += r.failed_trials;
  return total;
}

std::uint64_t row_stream_seed(std::uint64_t base_seed, Estimator estimator, int paths,
                              double coding_rate, std::size_t es_n0_index) {
  return derive_seed({base_seed, static_cast<std::uint64_t>(estimator),
                      static_cast<std::uint64_t>(paths), seed_word(coding_rate),
                      static_cast<std::uint64_t>(es_n0_index)});
}

SweepResult run_sweep(const SweepSpec& input, const std::function<void(const SweepRow&)>& on_row) {
  input.validate();
  const SweepSpec spec = input.canonical();
  const unsigned threads = spec.threads > 0 ? spec.threads : default_thread_count();

  SweepResult result;
  for (Estimator estimator : spec.estimators) {
    for (int paths : spec.path_counts) {
      OperatingPoint point;
      point.channel = spec.channel;
      point.channel.paths = paths;
      point.blocklength = spec.blocklength;
      point.power_model = spec.power_model;
      point.capacity_route = spec.capacity_route;
      const TapSampler sampler = random_tap_sampler(point.channel);
      for (double rc : spec.coding_rates) {
        point.coding_rate = rc;
        for (std::size_t i = 0; i < spec.es_n0_db.size(); ++i) {
          point.es_n0 = db_to_linear(spec.es_n0_db[i]);
          const std::uint64_t seed = row_stream_seed(spec.base_seed, estimator, paths, rc, i);
          PointEstimate est;
          if (estimator == Estimator::kTheoretical) {
            est = estimate_theoretical(point, spec.theoretical_trials, seed, sampler, threads);
          } else {
            const auto strategy = estimator == Estimator::kLowerAverage
                                      ? AllocationStrategy::kAverage
                                      : AllocationStrategy::kWaterFilling;
            est = estimate_lower_bound(point, strategy, spec.bound_trials, seed, sampler, threads);
          }
          SweepRow row{estimator,  paths,       rc,   spec.es_n0_db[i],  est.outage,
                       est.trials, est.ci_low,  est.ci_high, seed, est.failed_trials,
                       est.below_resolution};
          if (on_row) on_row(row);
          result.rows.push_back(row);
        }
      }
    }
  }
  return result;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

unsigned default_thread_count() {
  if (const char* env = std::getenv("OTFS_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::string_view to_string(Estimator estimator) {
  switch (estimator) {
    case Estimator::kTheoretical:
      return "theoretical";
    case Estimator::kLowerAverage:
      return "lower_avg";
    case Estimator::kLowerWaterFilling:
      return "lower_wat";
  }
  return "unknown";
}

Estimator estimator_from_string(std::string_view name) {
  if (name == "theoretical") return Estimator::kTheoretical;
  if (name == "lower_avg") return Estimator::kLowerAverage;
  if (name == "lower_wat") return Estimator::kLowerWaterFilling;
  throw ConfigError("estimators: unknown estimator '" + std::string(name) + "'");
}

std::string_view to_string(TotalPowerModel model) {
  return model == TotalPowerModel::kPerPathSymbolEnergy ? "per_path" : "total";
}

TotalPowerModel power_model_from_string(std::string_view name) {
  if (name == "per_path") return TotalPowerModel::kPerPathSymbolEnergy;
  if (name == "total") return TotalPowerModel::kTotalSymbolEnergy;
  throw ConfigError("total_power_model: unknown value '" + std::string(name) + "'");
}

}  // namespace otfs
