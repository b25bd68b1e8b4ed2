// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace otfs {

using Complex = std::complex<double>;

/// Static OTFS frame geometry. The slot duration is tied to the subcarrier
/// spacing by T = 1/delta_f.
struct OtfsGrid {
  int delay_bins = 32;          // M
  int doppler_bins = 16;        // N
  double subcarrier_spacing_hz = 7.5e3;
  double carrier_hz = 4.0e9;

  double slot_duration_s() const { return 1.0 / subcarrier_spacing_hz; }
  double frame_duration_s() const { return doppler_bins * slot_duration_s(); }
  double delay_resolution_s() const { return slot_duration_s() / delay_bins; }
  double doppler_resolution_hz() const { return 1.0 / frame_duration_s(); }
  /// Symbols per frame, M*N.
  std::int64_t size() const { return static_cast<std::int64_t>(delay_bins) * doppler_bins; }

  /// Throws ConfigError listing every violated constraint.
  void validate() const;

  bool operator==(const OtfsGrid&) const = default;
};

enum class DelayModel {
  /// First path at delay 0, the rest distinct and uniform on {1..l_max}.
  kZeroDelayFirstPath,
  /// All delays distinct and uniform on {0..l_max}.
  kUniformDistinct,
};

struct ChannelConfig {
  int paths = 1;          // L
  int max_delay = 8;      // l_max
  int max_doppler = 4;    // k_max
  double mean = 0.0;      // mean of the real and imaginary tap components
  OtfsGrid grid{};
  bool fractional_doppler = true;
  DelayModel delay_model = DelayModel::kZeroDelayFirstPath;

  /// Largest Doppler shift in Hz, k_max / (N T).
  double max_doppler_hz() const { return max_doppler * grid.doppler_resolution_hz(); }

  void validate() const;

  bool operator==(const ChannelConfig&) const = default;
};

/// One channel realization. dopplers[i] holds k_i + kappa_i in Doppler-bin
/// units.
struct TapSet {
  std::vector<Complex> gains;
  std::vector<int> delays;
  std::vector<double> dopplers;

  std::size_t size() const { return gains.size(); }

  int integer_doppler(std::size_t i) const;
  double fractional_doppler(std::size_t i) const;

  /// Throws ConfigError if the field invariants do not hold for `cfg`.
  void validate(const ChannelConfig& cfg) const;

  bool operator==(const TapSet&) const = default;
};

/// Split a Doppler index into k + kappa with kappa in (-1/2, 1/2].
int nearest_doppler_bin(double doppler_index);

TapSet sample_tapset(const ChannelConfig& cfg, std::mt19937_64& rng);

/// Sum of squared gain magnitudes.
double gain_power(const TapSet& taps);

// Plain-text record: '#' comment lines, then one path per line as
// "re(h) im(h) delay doppler" with round-trip precision.
std::string format_tapset(const TapSet& taps);
TapSet parse_tapset(std::string_view text);

std::string_view to_string(DelayModel model);
DelayModel delay_model_from_string(std::string_view name);

}  // namespace otfs
