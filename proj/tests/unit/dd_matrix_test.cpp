// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <random>

#include <doctest.h>

#include "otfs/dd_matrix.hpp"
#include "otfs/envelope_cholesky.hpp"
#include "otfs/errors.hpp"
#include "support/oracles.hpp"

using namespace otfs;

namespace {

OtfsGrid grid(int m, int n) { return OtfsGrid{m, n, 7.5e3, 4.0e9}; }

ChannelConfig small_channel(int m, int n, int paths) {
  ChannelConfig cfg;
  cfg.grid = grid(m, n);
  cfg.paths = paths;
  cfg.max_delay = m - 1;
  cfg.max_doppler = n / 2;
  return cfg;
}

std::vector<oracle::Path> as_paths(const TapSet& taps) {
  std::vector<oracle::Path> out;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    out.push_back({taps.gains[i], taps.delays[i], taps.dopplers[i]});
  }
  return out;
}

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("block DFT is unitary and inverted by its adjoint") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (auto [m, n] : {std::pair{4, 4}, std::pair{8, 8}, std::pair{32, 16}, std::pair{3, 5}}) {
    const OtfsGrid g = grid(m, n);
    std::vector<Complex> x(static_cast<std::size_t>(m * n));
    for (auto& v : x) v = Complex(nd(rng), nd(rng));
    const auto original = x;
    double norm_in = 0.0;
    for (auto v : x) norm_in += std::norm(v);
    apply_block_dft(x, g, false);
    double norm_out = 0.0;
    for (auto v : x) norm_out += std::norm(v);
    CHECK(std::abs(std::sqrt(norm_out) - std::sqrt(norm_in)) <= 1e-12 * std::sqrt(norm_in));
    apply_block_dft(x, g, true);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - original[i]) <= 1e-12);
  }
}

TEST_CASE("block DFT matches F_N kron I_M") {
  const OtfsGrid g = grid(3, 4);
  const Eigen::MatrixXcd dense = oracle::kron(oracle::unitary_dft(4, false), Eigen::MatrixXcd::Identity(3, 3));
  for (int col = 0; col < 12; ++col) {
    std::vector<Complex> e(12);
    e[static_cast<std::size_t>(col)] = 1.0;
    apply_block_dft(e, g, false);
    for (int row = 0; row < 12; ++row) CHECK(std::abs(e[static_cast<std::size_t>(row)] - dense(row, col)) <= 1e-14);
  }
}

TEST_CASE("delay shift and Doppler phase match their dense factors") {
  std::vector<Complex> x(8);
  for (int i = 0; i < 8; ++i) x[static_cast<std::size_t>(i)] = Complex(i, -i);
  auto shifted = x;
  apply_delay_shift(shifted, 3);
  for (int i = 0; i < 8; ++i) CHECK(shifted[static_cast<std::size_t>((i + 3) % 8)] == x[static_cast<std::size_t>(i)]);
  auto back = shifted;
  apply_delay_shift(back, -3);
  CHECK(back == x);

  auto phased = x;
  apply_doppler_phase(phased, 1.25);
  const Eigen::MatrixXcd d = oracle::doppler_diagonal(8, 1.25);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(phased[static_cast<std::size_t>(i)] - d(i, i) * x[static_cast<std::size_t>(i)]) <= 1e-14);
}

TEST_CASE("build_h_dd: trivial path is the identity") {
  const DdMatrix h = build_h_dd(TapSet{{1.0}, {0}, {0.0}}, grid(4, 4));
  CHECK(max_abs_diff(h.entries, Eigen::MatrixXcd::Identity(16, 16)) <= 1e-12);
}

TEST_CASE("build_h_dd: one-bin delay matches the dense product") {
  const DdMatrix h = build_h_dd(TapSet{{1.0}, {1}, {0.0}}, grid(4, 4));
  const auto ref = oracle::h_dd_dense_product({{1.0, 1, 0.0}}, 4, 4);
  CHECK(max_abs_diff(h.entries, ref) <= 1e-12);
}

TEST_CASE("build_h_dd: matches the dense-factor oracle on random channels, M,N <= 8") {
  std::mt19937_64 rng(3);
  for (auto [m, n] : {std::pair{4, 4}, std::pair{8, 4}, std::pair{4, 8}, std::pair{8, 8}}) {
    for (bool fractional : {false, true}) {
      auto cfg = small_channel(m, n, 3);
      cfg.fractional_doppler = fractional;
      for (int i = 0; i < 5; ++i) {
        const TapSet taps = sample_tapset(cfg, rng);
        const DdMatrix h = build_h_dd(taps, cfg.grid);
        CHECK(max_abs_diff(h.entries, oracle::h_dd_dense_product(as_paths(taps), m, n)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("build_h_dd: a single path is |h| times a unitary") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 20; ++i) {
    const Complex gain(nd(rng), nd(rng));
    const TapSet taps{{gain}, {i % 4}, {u(rng)}};
    const DdMatrix h = build_h_dd(taps, grid(4, 4));
    const Eigen::MatrixXcd gram = h.entries * h.entries.adjoint();
    CHECK(max_abs_diff(gram, std::norm(gain) * Eigen::MatrixXcd::Identity(16, 16)) <= 1e-8 * std::max(1.0, std::norm(gain)));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h.entries);
    for (Eigen::Index k = 0; k < 16; ++k) CHECK(std::abs(svd.singularValues()(k) - std::abs(gain)) <= 1e-10);
  }
}

TEST_CASE("build_h_dd: Frobenius norm is MN sum |h_i|^2") {
  std::mt19937_64 rng(5);
  const auto cfg = small_channel(8, 8, 5);
  for (int i = 0; i < 20; ++i) {
    const TapSet taps = sample_tapset(cfg, rng);
    const DdMatrix h = build_h_dd(taps, cfg.grid);
    const double expected = 64.0 * gain_power(taps);
    CHECK(std::abs(h.entries.squaredNorm() - expected) <= 1e-8 * expected);
  }
}

TEST_CASE("build_h_dd rejects delays outside the grid") {
  CHECK_THROWS_AS(build_h_dd(TapSet{{1.0}, {4}, {0.0}}, grid(4, 4)), ConfigError);
  CHECK_THROWS_AS(build_h_dd(TapSet{{1.0, 1.0}, {0}, {0.0}}, grid(4, 4)), ConfigError);
}

TEST_CASE("frame_capacity_bits: closed-form cases") {
  const OtfsGrid g = grid(4, 4);
  const DdMatrix zero{Eigen::MatrixXcd::Zero(16, 16), g};
  CHECK(frame_capacity_bits(zero, 5.0) == 0.0);
  const DdMatrix eye{Eigen::MatrixXcd::Identity(16, 16), g};
  CHECK(frame_capacity_bits(eye, 3.0) == doctest::Approx(32.0).epsilon(1e-14));
  CHECK(frame_capacity_bits(eye, 0.0) == 0.0);
  CHECK_THROWS_AS(frame_capacity_bits(eye, -1.0), DomainError);

  // |h|^2 = 0.5, g = 2: MN log2(2) = 16 bits regardless of (l, k, kappa).
  const Complex h = std::polar(std::sqrt(0.5), 0.3);
  for (auto [l, nu] : {std::pair{0, 0.0}, std::pair{2, 1.0}, std::pair{3, -1.37}}) {
    const TapSet taps{{h}, {l}, {nu}};
    CHECK(frame_capacity_bits(build_h_dd(taps, g), 2.0) == doctest::Approx(16.0).epsilon(1e-10));
    CHECK(frame_capacity_bits(taps, g, 2.0) == doctest::Approx(16.0).epsilon(1e-10));
  }
}

TEST_CASE("frame_capacity_bits agrees with the eigenvalue and singular-value oracles") {
  std::mt19937_64 rng(6);
  for (auto [m, n] : {std::pair{4, 4}, std::pair{8, 8}, std::pair{8, 4}}) {
    const auto cfg = small_channel(m, n, std::min(4, m));
    for (int i = 0; i < 10; ++i) {
      const TapSet taps = sample_tapset(cfg, rng);
      const DdMatrix h = build_h_dd(taps, cfg.grid);
      for (double g : {0.1, 1.0, 30.0}) {
        const double ref = oracle::log2_det_eigen(h.entries, g);
        CHECK(frame_capacity_bits(h, g) == doctest::Approx(ref).epsilon(1e-9));
        CHECK(frame_capacity_bits(taps, cfg.grid, g) == doctest::Approx(ref).epsilon(1e-9));
        CHECK(oracle::log2_det_singular(h.entries, g) == doctest::Approx(ref).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("frame_capacity_bits is non-decreasing in Es/N0") {
  std::mt19937_64 rng(7);
  const auto cfg = small_channel(8, 8, 4);
  const TapSet taps = sample_tapset(cfg, rng);
  const DdMatrix h = build_h_dd(taps, cfg.grid);
  double prev = 0.0;
  for (double g = 0.0; g < 100.0; g = g * 1.5 + 0.01) {
    const double c = frame_capacity_bits(h, g);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("frame_capacity_bits ignores a common phase on all gains") {
  std::mt19937_64 rng(8);
  const auto cfg = small_channel(8, 8, 5);
  for (int i = 0; i < 10; ++i) {
    TapSet taps = sample_tapset(cfg, rng);
    const double before = frame_capacity_bits(build_h_dd(taps, cfg.grid), 4.0);
    const Complex phase = std::polar(1.0, 0.7 + i);
    for (auto& h : taps.gains) h *= phase;
    CHECK(std::abs(frame_capacity_bits(build_h_dd(taps, cfg.grid), 4.0) - before) <= 1e-9);
  }
}

TEST_CASE("structured and dense capacity routes agree at the full grid size") {
  std::mt19937_64 rng(9);
  ChannelConfig cfg;
  cfg.grid = grid(32, 16);
  cfg.paths = 5;
  for (int i = 0; i < 2; ++i) {
    const TapSet taps = sample_tapset(cfg, rng);
    const DdMatrix h = build_h_dd(taps, cfg.grid);
    for (double g : {0.5, 10.0}) {
      CHECK(frame_capacity_bits(taps, cfg.grid, g) ==
            doctest::Approx(frame_capacity_bits(h, g)).epsilon(1e-10));
    }
  }
}

TEST_CASE("dd_core_gram is the Gram matrix of the DD core") {
  std::mt19937_64 rng(10);
  const auto cfg = small_channel(4, 4, 3);
  const TapSet taps = sample_tapset(cfg, rng);
  Eigen::MatrixXcd core = Eigen::MatrixXcd::Zero(16, 16);
  for (std::size_t p = 0; p < taps.size(); ++p) {
    core += taps.gains[p] * oracle::matrix_power(oracle::cyclic_shift(16), taps.delays[p]) *
            oracle::doppler_diagonal(16, taps.dopplers[p]);
  }
  CHECK(max_abs_diff(dd_core_gram(taps, cfg.grid), core.adjoint() * core) <= 1e-12);
}

TEST_CASE("theoretical_outage_indicator") {
  const OtfsGrid g = grid(4, 4);
  const DdMatrix eye{Eigen::MatrixXcd::Identity(16, 16), g};
  CHECK_FALSE(theoretical_outage_indicator(eye, 3.0, 16));
  CHECK(theoretical_outage_indicator(eye, 3.0, 33));
  const DdMatrix zero{Eigen::MatrixXcd::Zero(16, 16), g};
  CHECK(theoretical_outage_indicator(zero, 100.0, 1));
  CHECK_THROWS_AS(theoretical_outage_indicator(eye, 1.0, 0), DomainError);
}

TEST_CASE("theoretical_outage_indicator agrees with the eigenvalue oracle on 1000 draws") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> snr_db(-5.0, 10.0);
  const auto cfg = small_channel(4, 4, 3);
  const std::int64_t k = 13;  // round(0.8 * 16)
  int disagreements = 0;
  for (int i = 0; i < 1000; ++i) {
    const TapSet taps = sample_tapset(cfg, rng);
    const DdMatrix h = build_h_dd(taps, cfg.grid);
    const double g = std::pow(10.0, snr_db(rng) / 10.0);
    const bool ref = oracle::log2_det_eigen(h.entries, g) < static_cast<double>(k);
    disagreements += theoretical_outage_indicator(h, g, k) != ref;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("envelope Cholesky: dense and banded matrices") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd b(12, 12);
  for (Eigen::Index i = 0; i < 12; ++i)
    for (Eigen::Index j = 0; j < 12; ++j) b(i, j) = Complex(nd(rng), nd(rng));
  Eigen::MatrixXcd a = b.adjoint() * b + Eigen::MatrixXcd::Identity(12, 12);
  const double ref = std::log(a.llt().matrixL().toDenseMatrix().diagonal().real().array().prod()) * 2.0;
  Eigen::MatrixXcd work = a;
  CHECK(envelope_cholesky_logdet(work) == doctest::Approx(ref).epsilon(1e-12));

  Eigen::MatrixXcd not_pd = -Eigen::MatrixXcd::Identity(3, 3);
  CHECK_THROWS_AS(envelope_cholesky_logdet(not_pd), NumericalError);
}

TEST_CASE("H_DD binary dump round-trips at float precision") {
  std::mt19937_64 rng(13);
  const auto cfg = small_channel(4, 4, 2);
  const DdMatrix h = build_h_dd(sample_tapset(cfg, rng), cfg.grid);
  const auto path = std::filesystem::temp_directory_path() / "otfs_hdd_dump_test.bin";
  write_h_dd_binary(h, path);
  CHECK(std::filesystem::file_size(path) == 8 + 8 + 16 * 16 * 8);
  const DdMatrix back = read_h_dd_binary(path);
  CHECK(back.grid.delay_bins == 4);
  CHECK(back.grid.doppler_bins == 4);
  CHECK(max_abs_diff(back.entries, h.entries) <= 1e-6);
  std::filesystem::remove(path);
}
