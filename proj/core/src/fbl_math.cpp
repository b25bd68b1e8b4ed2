// SPDX-License-Identifier: Apache-2.0
#include "otfs/fbl_math.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "otfs/errors.hpp"

namespace otfs::fbl {

namespace {

constexpr double kLog2eSquared = std::numbers::log2e * std::numbers::log2e;

void require_snr(double gamma, const char* what) {
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw DomainError(std::string(what) + ": SNR must be finite and non-negative, got " +
                      std::to_string(gamma));
  }
}

void require_blocklength(std::int64_t n) {
  if (n < 1) throw DomainError("blocklength must be >= 1, got " + std::to_string(n));
}

// Negative rates are allowed: achievable_rate returns them for short blocks
// and tiny epsilon, and the outage of such a rate is still well defined.
void require_rate(double rate) {
  if (!std::isfinite(rate)) {
    throw DomainError("coding rate must be finite, got " + std::to_string(rate));
  }
}

double gaussian_density(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Abramowitz & Stegun 26.2.23, |error| < 4.5e-4; only a starting point.
double q_inverse_initial(double p) {
  const double tail = p < 0.5 ? p : 1.0 - p;
  const double t = std::sqrt(-2.0 * std::log(tail));
  const double x = t - (2.515517 + t * (0.802853 + t * 0.010328)) /
                           (1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308)));
  return p < 0.5 ? x : -x;
}

double outage_from(double capacity, double dispersion, std::int64_t n, double rate) {
  if (dispersion <= 0.0) return capacity >= rate ? 0.0 : 1.0;
  return q_function(std::sqrt(static_cast<double>(n) / dispersion) * (capacity - rate));
}

}  // namespace

double q_function(double x) {
  if (!std::isfinite(x)) throw DomainError("q_function: argument must be finite");
  // erfc keeps full relative accuracy in the upper tail, so no series
  // fallback is needed for large x.
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("q_inverse: probability must lie in (0,1), got " + std::to_string(p));
  }
  if (p == 0.5) return 0.0;

  // Q is decreasing: Q(lo) >= p >= Q(hi).
  double lo = -40.0;
  double hi = 40.0;
  double x = q_inverse_initial(p);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = q_function(x) - p;
    if (f == 0.0) return x;
    if (f > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = -gaussian_density(x);
    double next = slope != 0.0 ? x - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-12 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

double awgn_capacity(double gamma) {
  require_snr(gamma, "awgn_capacity");
  return 0.5 * std::log2(1.0 + gamma);
}

double awgn_dispersion(double gamma) {
  require_snr(gamma, "awgn_dispersion");
  const double one_plus = 1.0 + gamma;
  return gamma * (2.0 + gamma) * kLog2eSquared / (2.0 * one_plus * one_plus);
}

double achievable_rate(double gamma, std::int64_t n, double epsilon) {
  require_blocklength(n);
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("achievable_rate: epsilon must lie in (0,1), got " + std::to_string(epsilon));
  }
  const double capacity = awgn_capacity(gamma);
  const double dispersion = awgn_dispersion(gamma);
  return capacity - std::sqrt(dispersion / static_cast<double>(n)) * q_inverse(epsilon);
}

double scalar_outage(double gamma, std::int64_t n, double rate) {
  require_blocklength(n);
  require_rate(rate);
  return outage_from(awgn_capacity(gamma), awgn_dispersion(gamma), n, rate);
}

SnrVector::SnrVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("SnrVector: at least one path is required");
  for (double v : values_) require_snr(v, "SnrVector");
}

SnrVector::SnrVector(std::initializer_list<double> values)
    : SnrVector(std::vector<double>(values)) {}

double parallel_capacity(const SnrVector& snrs) {
  if (snrs.empty()) throw DomainError("parallel_capacity: empty SNR vector");
  double sum = 0.0;
  for (double a : snrs.values()) {
    // two real halves, each 0.5*log2(1+a)
    sum += 2.0 * (0.5 * std::log2(1.0 + a));
  }
  return sum;
}

double parallel_dispersion(const SnrVector& snrs) {
  if (snrs.empty()) throw DomainError("parallel_dispersion: empty SNR vector");
  double sum = 0.0;
  for (double a : snrs.values()) {
    const double one_plus = 1.0 + a;
    sum += 2.0 * (a * (2.0 + a) / (one_plus * one_plus));
  }
  return 0.5 * kLog2eSquared * sum;
}

double parallel_outage(const SnrVector& snrs, std::int64_t n, double rate) {
  const FblPoint point = parallel_point(snrs, n, rate);
  return outage_from(point.capacity_bits_per_use, point.dispersion_bits2_per_use, n, rate);
}

FblPoint parallel_point(const SnrVector& snrs, std::int64_t n, double rate) {
  require_blocklength(n);
  require_rate(rate);
  return FblPoint{parallel_capacity(snrs), parallel_dispersion(snrs), n, rate};
}

}  // namespace otfs::fbl
