// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <doctest.h>

#include "otfs/dd_channel.hpp"
#include "otfs/errors.hpp"
#include "support/oracles.hpp"

using namespace otfs;

namespace {

ChannelConfig default_channel(int paths) {
  ChannelConfig cfg;
  cfg.grid = OtfsGrid{32, 16, 7.5e3, 4.0e9};
  cfg.paths = paths;
  cfg.max_delay = 8;
  cfg.max_doppler = 4;
  return cfg;
}

}  // namespace

TEST_CASE("OtfsGrid derived quantities") {
  const OtfsGrid g{32, 16, 7.5e3, 4.0e9};
  CHECK(g.slot_duration_s() == doctest::Approx(1.0 / 7.5e3));
  CHECK(g.frame_duration_s() == doctest::Approx(16.0 / 7.5e3));
  CHECK(g.delay_resolution_s() == doctest::Approx(1.0 / 7.5e3 / 32.0));
  CHECK(g.doppler_resolution_hz() == doctest::Approx(7.5e3 / 16.0));
  CHECK(g.size() == 512);
  CHECK(default_channel(3).max_doppler_hz() == doctest::Approx(4.0 * 7.5e3 / 16.0));
}

TEST_CASE("ChannelConfig validation reports every violation") {
  ChannelConfig cfg = default_channel(3);
  CHECK_NOTHROW(cfg.validate());
  cfg.grid.delay_bins = 1;
  cfg.paths = 20;
  cfg.max_doppler = 9;
  try {
    cfg.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations().size() >= 4);  // M, paths, l_max < M, k_max <= N/2
  }
  ChannelConfig ok = default_channel(9);
  CHECK_NOTHROW(ok.validate());
  ok.paths = 10;
  CHECK_THROWS_AS(ok.validate(), ConfigError);
}

TEST_CASE("nearest_doppler_bin keeps the fractional part in (-1/2, 1/2]") {
  CHECK(nearest_doppler_bin(0.5) == 0);
  CHECK(nearest_doppler_bin(-0.5) == -1);
  CHECK(nearest_doppler_bin(1.5) == 1);
  CHECK(nearest_doppler_bin(2.49) == 2);
  CHECK(nearest_doppler_bin(-3.7) == -4);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4.5, 4.5);
  for (int i = 0; i < 10000; ++i) {
    const double v = u(rng);
    const double kappa = v - nearest_doppler_bin(v);
    CHECK(kappa > -0.5);
    CHECK(kappa <= 0.5);
  }
}

TEST_CASE("sample_tapset: field invariants") {
  std::mt19937_64 rng(7);
  for (int paths = 1; paths <= 9; ++paths) {
    const auto cfg = default_channel(paths);
    for (int i = 0; i < 200; ++i) {
      const TapSet taps = sample_tapset(cfg, rng);
      REQUIRE(taps.size() == static_cast<std::size_t>(paths));
      CHECK_NOTHROW(taps.validate(cfg));
      CHECK(taps.delays.front() == 0);
      CHECK(std::set<int>(taps.delays.begin(), taps.delays.end()).size() == taps.size());
      for (std::size_t p = 0; p < taps.size(); ++p) {
        CHECK(std::abs(taps.dopplers[p]) <= cfg.max_doppler + 0.5);
        CHECK(taps.fractional_doppler(p) > -0.5);
        CHECK(taps.fractional_doppler(p) <= 0.5);
      }
    }
  }
}

TEST_CASE("sample_tapset: L = l_max + 1 uses every delay") {
  std::mt19937_64 rng(8);
  for (auto model : {DelayModel::kZeroDelayFirstPath, DelayModel::kUniformDistinct}) {
    auto cfg = default_channel(9);
    cfg.delay_model = model;
    const TapSet taps = sample_tapset(cfg, rng);
    CHECK(std::set<int>(taps.delays.begin(), taps.delays.end()) ==
          std::set<int>{0, 1, 2, 3, 4, 5, 6, 7, 8});
  }
}

TEST_CASE("sample_tapset: uniform delay model does not pin the first path") {
  auto cfg = default_channel(2);
  cfg.delay_model = DelayModel::kUniformDistinct;
  std::mt19937_64 rng(9);
  int nonzero_first = 0;
  for (int i = 0; i < 1000; ++i) nonzero_first += sample_tapset(cfg, rng).delays.front() != 0;
  CHECK(nonzero_first > 700);  // expected 8/9
}

TEST_CASE("sample_tapset: integer Doppler when fractional Doppler is disabled") {
  auto cfg = default_channel(5);
  cfg.fractional_doppler = false;
  std::mt19937_64 rng(10);
  for (int i = 0; i < 500; ++i) {
    const TapSet taps = sample_tapset(cfg, rng);
    for (std::size_t p = 0; p < taps.size(); ++p) {
      CHECK(taps.fractional_doppler(p) == 0.0);
      CHECK(std::abs(taps.integer_doppler(p)) <= cfg.max_doppler);
    }
  }
}

TEST_CASE("sample_tapset: same seed gives identical taps") {
  const auto cfg = default_channel(5);
  std::mt19937_64 a(42);
  std::mt19937_64 b(42);
  std::mt19937_64 c(43);
  const TapSet ta = sample_tapset(cfg, a);
  CHECK(ta == sample_tapset(cfg, b));
  CHECK_FALSE(ta == sample_tapset(cfg, c));
}

TEST_CASE("gain_power") {
  CHECK(gain_power(TapSet{{0.0, 0.0}, {0, 1}, {0.0, 0.0}}) == 0.0);
  CHECK(gain_power(TapSet{{Complex(1, 0), Complex(0, 1)}, {0, 1}, {0.0, 0.0}}) == 2.0);
}

TEST_CASE("gain statistics: E|h|^2 = 1/L per path, total 1") {
  std::mt19937_64 rng(2024);
  {
    const auto cfg = default_channel(1);
    double sum = 0.0;
    const int draws = 1'000'000;
    for (int i = 0; i < draws; ++i) sum += gain_power(sample_tapset(cfg, rng));
    CHECK(std::abs(sum / draws - 1.0) <= 0.01);
  }
  {
    const auto cfg = default_channel(5);
    double sum = 0.0;
    const int draws = 1'000'000;
    for (int i = 0; i < draws; ++i) sum += gain_power(sample_tapset(cfg, rng));
    CHECK(std::abs(sum / draws - 1.0) <= 0.01);
  }
}

TEST_CASE("nonzero mean shifts the components") {
  auto cfg = default_channel(2);
  cfg.mean = 0.5;
  std::mt19937_64 rng(3);
  double re = 0.0;
  double im = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const TapSet taps = sample_tapset(cfg, rng);
    re += taps.gains[0].real();
    im += taps.gains[0].imag();
  }
  CHECK(re / draws == doctest::Approx(0.5).epsilon(0.01));
  CHECK(im / draws == doctest::Approx(0.5).epsilon(0.01));
}

// A single 1% KS test rejects a correct sampler one time in a hundred, so
// each law is tested on 10 independent streams and at most 2 rejections are
// tolerated (P(>= 3 of 10) ~ 1e-4 under the null).
TEST_CASE("|h| is Rayleigh and Doppler follows the arcsine law (KS at 1%)") {
  const std::size_t samples = 100000;
  const double crit = oracle::ks_critical(0.01, samples);
  for (int paths : {1, 3, 5}) {
    const auto cfg = default_channel(paths);
    const double scale_sq = 0.5 / paths;
    const double kmax = cfg.max_doppler;
    int magnitude_rejections = 0;
    int doppler_rejections = 0;
    for (int stream = 0; stream < 10; ++stream) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(100 * paths + stream));
      std::vector<double> magnitudes;
      std::vector<double> dopplers;
      while (magnitudes.size() < samples) {
        const TapSet taps = sample_tapset(cfg, rng);
        for (std::size_t p = 0; p < taps.size() && magnitudes.size() < samples; ++p) {
          magnitudes.push_back(std::abs(taps.gains[p]));
          dopplers.push_back(taps.dopplers[p]);
        }
      }
      magnitude_rejections += oracle::ks_statistic(magnitudes, [&](double r) {
        return 1.0 - std::exp(-r * r / (2.0 * scale_sq));
      }) >= crit;
      doppler_rejections += oracle::ks_statistic(dopplers, [&](double v) {
        return 0.5 + std::asin(std::clamp(v / kmax, -1.0, 1.0)) / std::numbers::pi;
      }) >= crit;
    }
    CAPTURE(paths);
    CHECK(magnitude_rejections <= 2);
    CHECK(doppler_rejections <= 2);
  }
}

TEST_CASE("TapSet text record round-trips exactly") {
  std::mt19937_64 rng(77);
  const auto cfg = default_channel(6);
  for (int i = 0; i < 50; ++i) {
    const TapSet taps = sample_tapset(cfg, rng);
    CHECK(parse_tapset(format_tapset(taps)) == taps);
  }
}

TEST_CASE("TapSet text record format") {
  const TapSet taps{{Complex(0.5, -0.25)}, {3}, {-1.75}};
  CHECK(format_tapset(taps) == "# re(h) im(h) delay doppler\n0.5 -0.25 3 -1.75\n");
  CHECK_THROWS_AS(parse_tapset("1 2 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_tapset("1 2 3 4 5\n"), ConfigError);
  CHECK(parse_tapset("# only a comment\n\n").size() == 0);
}

TEST_CASE("TapSet::validate catches broken records") {
  const auto cfg = default_channel(2);
  CHECK_THROWS_AS((TapSet{{1.0, 1.0}, {0, 0}, {0.0, 0.0}}.validate(cfg)), ConfigError);
  CHECK_THROWS_AS((TapSet{{1.0}, {9}, {0.0}}.validate(cfg)), ConfigError);
  CHECK_THROWS_AS((TapSet{{1.0}, {0}, {4.6}}.validate(cfg)), ConfigError);
  CHECK_THROWS_AS((TapSet{{1.0, 1.0}, {0}, {0.0}}.validate(cfg)), ConfigError);
}
