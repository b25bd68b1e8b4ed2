// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "otfs/dd_channel.hpp"
#include "otfs/fbl_math.hpp"

namespace otfs {

struct PowerBudget {
  double total_power = 1.0;  // W
  double noise_power = 1.0;  // sigma_0^2

  void validate() const;
};

enum class AllocationStrategy { kAverage, kWaterFilling };

struct Allocation {
  std::vector<double> powers;
  fbl::SnrVector snrs;
  AllocationStrategy strategy = AllocationStrategy::kAverage;
  std::optional<double> water_level;  // set iff water-filling
};

/// sigma_0^2 / |h_i|^2 per path; +infinity for a zero-gain path.
std::vector<double> equivalent_noise(const TapSet& taps, double noise_power);

/// W/L to every path.
Allocation allocate_average(const TapSet& taps, const PowerBudget& budget);

/// P_i = [lambda - eps_i]^+ with sum P_i = W. Throws AllocationError when no
/// path has finite equivalent noise.
Allocation allocate_waterfilling(const TapSet& taps, const PowerBudget& budget);

/// Water level for the given equivalent noise levels and total power. Sorts
/// the finite levels and solves the piecewise-linear power constraint in
/// closed form on the active segment.
double water_level(std::span<const double> equivalent_noise, double total_power);

std::string_view to_string(AllocationStrategy strategy);

}  // namespace otfs
