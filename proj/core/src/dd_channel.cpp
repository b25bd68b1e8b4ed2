// SPDX-License-Identifier: Apache-2.0
#include "otfs/dd_channel.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "otfs/errors.hpp"

namespace otfs {

namespace {

void check_grid(const OtfsGrid& g, const std::string& prefix, std::vector<std::string>& out) {
  if (g.delay_bins < 2) out.push_back(prefix + "M: must be >= 2");
  if (g.doppler_bins < 2) out.push_back(prefix + "N: must be >= 2");
  if (!(std::isfinite(g.subcarrier_spacing_hz) && g.subcarrier_spacing_hz > 0.0)) {
    out.push_back(prefix + "delta_f_hz: must be positive and finite");
  }
  if (!(std::isfinite(g.carrier_hz) && g.carrier_hz > 0.0)) {
    out.push_back(prefix + "carrier_hz: must be positive and finite");
  }
}

}  // namespace

void OtfsGrid::validate() const {
  std::vector<std::string> problems;
  check_grid(*this, "grid.", problems);
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

void ChannelConfig::validate() const {
  std::vector<std::string> problems;
  check_grid(grid, "grid.", problems);
  if (paths < 1) problems.push_back("channel.paths: must be >= 1");
  if (max_delay < 0) problems.push_back("channel.max_delay: must be >= 0");
  if (max_doppler < 0) problems.push_back("channel.max_doppler: must be >= 0");
  if (paths > max_delay + 1) {
    problems.push_back("channel.paths: " + std::to_string(paths) +
                       " distinct delays do not fit in [0, " + std::to_string(max_delay) + "]");
  }
  if (max_delay >= grid.delay_bins) problems.push_back("channel.max_delay: must be < M");
  if (2 * max_doppler > grid.doppler_bins) problems.push_back("channel.max_doppler: must be <= N/2");
  if (!std::isfinite(mean)) problems.push_back("channel.mean: must be finite");
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

int nearest_doppler_bin(double doppler_index) {
  // ceil(v - 1/2) sends exact half-integers down, so v - k lands in (-1/2, 1/2].
  return static_cast<int>(std::ceil(doppler_index - 0.5));
}

int TapSet::integer_doppler(std::size_t i) const { return nearest_doppler_bin(dopplers.at(i)); }

double TapSet::fractional_doppler(std::size_t i) const {
  return dopplers.at(i) - integer_doppler(i);
}

void TapSet::validate(const ChannelConfig& cfg) const {
  std::vector<std::string> problems;
  if (gains.size() != delays.size() || gains.size() != dopplers.size()) {
    problems.push_back("taps: gains, delays and dopplers must have equal length");
  }
  std::set<int> seen;
  for (int d : delays) {
    if (d < 0 || d > cfg.max_delay) {
      problems.push_back("taps.delays: " + std::to_string(d) + " outside [0, l_max]");
    }
    if (!seen.insert(d).second) problems.push_back("taps.delays: duplicate delay " + std::to_string(d));
  }
  const double limit = cfg.max_doppler + 0.5;
  for (double v : dopplers) {
    if (!(std::abs(v) <= limit)) {
      problems.push_back("taps.dopplers: " + std::to_string(v) + " outside [-k_max-1/2, k_max+1/2]");
    }
  }
  for (const Complex& h : gains) {
    if (!std::isfinite(h.real()) || !std::isfinite(h.imag())) {
      problems.push_back("taps.gains: non-finite gain");
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

TapSet sample_tapset(const ChannelConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  const auto paths = static_cast<std::size_t>(cfg.paths);
  TapSet taps;
  taps.gains.reserve(paths);
  taps.delays.reserve(paths);
  taps.dopplers.reserve(paths);

  // Real and imaginary parts each N(mu, 1/(2L)).
  std::normal_distribution<double> component(cfg.mean, std::sqrt(0.5 / cfg.paths));
  for (std::size_t i = 0; i < paths; ++i) {
    const double re = component(rng);
    const double im = component(rng);
    taps.gains.emplace_back(re, im);
  }

  // Partial Fisher-Yates over the candidate delays.
  std::vector<int> pool(static_cast<std::size_t>(cfg.max_delay) + 1);
  std::iota(pool.begin(), pool.end(), 0);
  std::size_t first = 0;
  if (cfg.delay_model == DelayModel::kZeroDelayFirstPath) {
    taps.delays.push_back(0);
    first = 1;
  }
  for (std::size_t i = first; taps.delays.size() < paths; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    taps.delays.push_back(pool[i]);
  }

  // Jakes: equal-probability arrival angles, nu = nu_max cos(theta), in bins.
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < paths; ++i) {
    const double index = cfg.max_doppler * std::cos(angle(rng));
    taps.dopplers.push_back(cfg.fractional_doppler ? index
                                                   : static_cast<double>(nearest_doppler_bin(index)));
  }
  return taps;
}

double gain_power(const TapSet& taps) {
  double sum = 0.0;
  for (const Complex& h : taps.gains) sum += std::norm(h);
  return sum;
}

std::string format_tapset(const TapSet& taps) {
  std::string out = "# re(h) im(h) delay doppler\n";
  char line[160];
  for (std::size_t i = 0; i < taps.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g %.17g %d %.17g\n", taps.gains[i].real(),
                  taps.gains[i].imag(), taps.delays[i], taps.dopplers[i]);
    out += line;
  }
  return out;
}

TapSet parse_tapset(std::string_view text) {
  TapSet taps;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    double re = 0.0;
    double im = 0.0;
    int delay = 0;
    double doppler = 0.0;
    if (!(fields >> re >> im >> delay >> doppler)) {
      throw ConfigError("taps line " + std::to_string(line_no) + ": expected 're im delay doppler'");
    }
    std::string rest;
    if (fields >> rest) {
      throw ConfigError("taps line " + std::to_string(line_no) + ": trailing field '" + rest + "'");
    }
    taps.gains.emplace_back(re, im);
    taps.delays.push_back(delay);
    taps.dopplers.push_back(doppler);
  }
  return taps;
}

std::string_view to_string(DelayModel model) {
  switch (model) {
    case DelayModel::kZeroDelayFirstPath:
      return "zero_first_path";
    case DelayModel::kUniformDistinct:
      return "uniform_distinct";
  }
  return "unknown";
}

DelayModel delay_model_from_string(std::string_view name) {
  if (name == "zero_first_path") return DelayModel::kZeroDelayFirstPath;
  if (name == "uniform_distinct") return DelayModel::kUniformDistinct;
  throw ConfigError("channel.delay_model: unknown value '" + std::string(name) + "'");
}

}  // namespace otfs
