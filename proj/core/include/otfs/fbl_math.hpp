// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace otfs::fbl {

/// Gaussian tail probability Q(x) = P(Z > x), Z ~ N(0,1).
double q_function(double x);

/// Inverse of q_function on (0, 1).
double q_inverse(double p);

/// Capacity of the real AWGN channel, 0.5*log2(1+gamma) bits per real use.
double awgn_capacity(double gamma);

/// Dispersion of the real AWGN channel in bits^2 per real use.
double awgn_dispersion(double gamma);

/// Normal approximation of the maximal coding rate at blocklength n and
/// block error probability epsilon, without the O(log n / n) term.
/// The result can be negative for tiny n; callers clamp if needed.
double achievable_rate(double gamma, std::int64_t n, double epsilon);

/// Block error (outage) probability of a real AWGN channel coded at `rate`.
/// A zero-dispersion channel returns the indicator 1{C < rate}.
double scalar_outage(double gamma, std::int64_t n, double rate);

/// Per-path linear SNRs of L complex paths.
class SnrVector {
 public:
  SnrVector() = default;
  explicit SnrVector(std::vector<double> values);
  SnrVector(std::initializer_list<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// Capacity, dispersion and rate of one channel state at blocklength n.
struct FblPoint {
  double capacity_bits_per_use = 0.0;
  double dispersion_bits2_per_use = 0.0;
  std::int64_t blocklength = 1;
  double rate_bits_per_use = 0.0;
};

// Parallel-channel quantities. Each complex path with SNR a is realized as
// two real subchannels, each with SNR a, so the 2L-term sums reduce to
// sum_j log2(1+a_j) for capacity and twice the scalar dispersion per path.

double parallel_capacity(const SnrVector& snrs);
double parallel_dispersion(const SnrVector& snrs);

/// Q(sqrt(n/V_L) (C_L - rate)) with the same zero-dispersion convention as
/// scalar_outage.
double parallel_outage(const SnrVector& snrs, std::int64_t n, double rate);

/// Capacity and dispersion of a parallel state bundled with a rate.
FblPoint parallel_point(const SnrVector& snrs, std::int64_t n, double rate);

}  // namespace otfs::fbl
