// SPDX-License-Identifier: Apache-2.0
#include "otfs/power_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "otfs/errors.hpp"

namespace otfs {

namespace {

fbl::SnrVector snrs_for(const TapSet& taps, std::span<const double> powers, double noise_power) {
  std::vector<double> snrs(taps.size());
  for (std::size_t i = 0; i < taps.size(); ++i) {
    snrs[i] = powers[i] * std::norm(taps.gains[i]) / noise_power;
  }
  return fbl::SnrVector(std::move(snrs));
}

}  // namespace

void PowerBudget::validate() const {
  std::vector<std::string> problems;
  if (!(std::isfinite(total_power) && total_power > 0.0)) {
    problems.push_back("budget.total_power: must be positive and finite");
  }
  if (!(std::isfinite(noise_power) && noise_power > 0.0)) {
    problems.push_back("budget.noise_power: must be positive and finite");
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

std::vector<double> equivalent_noise(const TapSet& taps, double noise_power) {
  if (!(std::isfinite(noise_power) && noise_power > 0.0)) {
    throw DomainError("equivalent_noise: noise power must be positive and finite");
  }
  std::vector<double> eps(taps.size());
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const double gain = std::norm(taps.gains[i]);
    eps[i] = gain > 0.0 ? noise_power / gain : std::numeric_limits<double>::infinity();
  }
  return eps;
}

Allocation allocate_average(const TapSet& taps, const PowerBudget& budget) {
  budget.validate();
  if (taps.size() == 0) throw AllocationError("allocate_average: no paths");
  const double share = budget.total_power / static_cast<double>(taps.size());
  std::vector<double> powers(taps.size(), share);
  Allocation out;
  out.snrs = snrs_for(taps, powers, budget.noise_power);
  out.powers = std::move(powers);
  out.strategy = AllocationStrategy::kAverage;
  return out;
}

double water_level(std::span<const double> equivalent_noise, double total_power) {
  std::vector<double> levels;
  levels.reserve(equivalent_noise.size());
  for (double e : equivalent_noise) {
    if (std::isfinite(e)) levels.push_back(e);
  }
  if (levels.empty()) throw AllocationError("water-filling: no path with finite equivalent noise");
  std::sort(levels.begin(), levels.end());

  // With the k lowest levels active, lambda = (W + sum_{i<k} e_i) / k; the
  // largest k whose lambda clears e_{k-1} is the active segment.
  double prefix = 0.0;
  double lambda = levels.front() + total_power;
  for (std::size_t k = 1; k <= levels.size(); ++k) {
    prefix += levels[k - 1];
    const double candidate = (total_power + prefix) / static_cast<double>(k);
    if (candidate > levels[k - 1]) {
      lambda = candidate;
    } else {
      break;
    }
  }
  return lambda;
}

Allocation allocate_waterfilling(const TapSet& taps, const PowerBudget& budget) {
  budget.validate();
  const std::vector<double> eps = equivalent_noise(taps, budget.noise_power);
  const double lambda = water_level(eps, budget.total_power);
  std::vector<double> powers(taps.size());
  for (std::size_t i = 0; i < taps.size(); ++i) powers[i] = std::max(0.0, lambda - eps[i]);
  Allocation out;
  out.snrs = snrs_for(taps, powers, budget.noise_power);
  out.powers = std::move(powers);
  out.strategy = AllocationStrategy::kWaterFilling;
  out.water_level = lambda;
  return out;
}

std::string_view to_string(AllocationStrategy strategy) {
  return strategy == AllocationStrategy::kAverage ? "average" : "water_filling";
}

}  // namespace otfs
