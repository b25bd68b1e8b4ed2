// SPDX-License-Identifier: Apache-2.0
#include "otfs/dd_matrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "otfs/envelope_cholesky.hpp"
#include "otfs/errors.hpp"

namespace otfs {

namespace {

constexpr char kDumpMagic[8] = {'O', 'T', 'F', 'S', 'H', 'D', 'D', '1'};

void check_taps_against_grid(const TapSet& taps, const OtfsGrid& grid) {
  grid.validate();
  if (taps.gains.size() != taps.delays.size() || taps.gains.size() != taps.dopplers.size()) {
    throw ConfigError("taps: gains, delays and dopplers must have equal length");
  }
  for (int l : taps.delays) {
    if (l < 0 || l >= grid.delay_bins) {
      throw ConfigError("taps.delays: " + std::to_string(l) + " outside [0, M)");
    }
  }
}

double log2_det_from_cholesky_diagonal(const Eigen::MatrixXcd& factor) {
  double ln_det = 0.0;
  for (Eigen::Index i = 0; i < factor.rows(); ++i) ln_det += 2.0 * std::log(factor(i, i).real());
  return ln_det * std::numbers::log2e;
}

}  // namespace

void apply_block_dft(std::span<Complex> x, const OtfsGrid& grid, bool inverse) {
  const auto m_bins = static_cast<std::size_t>(grid.delay_bins);
  const auto n_bins = static_cast<std::size_t>(grid.doppler_bins);
  if (x.size() != m_bins * n_bins) throw ConfigError("apply_block_dft: vector length != MN");

  const double sign = inverse ? 1.0 : -1.0;
  std::vector<Complex> twiddle(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    twiddle[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                                     static_cast<double>(n_bins));
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_bins));
  std::vector<Complex> column(n_bins);
  for (std::size_t m = 0; m < m_bins; ++m) {
    for (std::size_t out = 0; out < n_bins; ++out) {
      Complex acc{};
      for (std::size_t in = 0; in < n_bins; ++in) {
        acc += twiddle[(out * in) % n_bins] * x[in * m_bins + m];
      }
      column[out] = acc * scale;
    }
    for (std::size_t n = 0; n < n_bins; ++n) x[n * m_bins + m] = column[n];
  }
}

void apply_delay_shift(std::span<Complex> x, int shift) {
  if (x.empty()) return;
  const auto size = static_cast<std::int64_t>(x.size());
  const auto offset = ((shift % size) + size) % size;
  // (Pi x)[i] = x[i-1]: rotating right by `offset`.
  std::rotate(x.begin(), x.begin() + (size - offset), x.end());
}

void apply_doppler_phase(std::span<Complex> x, double doppler) {
  const double step = 2.0 * std::numbers::pi * doppler / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= std::polar(1.0, step * static_cast<double>(i));
}

DdMatrix build_h_dd(const TapSet& taps, const OtfsGrid& grid) {
  check_taps_against_grid(taps, grid);
  const auto size = static_cast<Eigen::Index>(grid.size());
  DdMatrix h{Eigen::MatrixXcd::Zero(size, size), grid};
  std::vector<Complex> work(static_cast<std::size_t>(size));
  for (std::size_t p = 0; p < taps.size(); ++p) {
    for (Eigen::Index col = 0; col < size; ++col) {
      std::fill(work.begin(), work.end(), Complex{});
      work[static_cast<std::size_t>(col)] = 1.0;
      apply_block_dft(work, grid, /*inverse=*/true);
      apply_doppler_phase(work, taps.dopplers[p]);
      apply_delay_shift(work, taps.delays[p]);
      apply_block_dft(work, grid, /*inverse=*/false);
      for (Eigen::Index row = 0; row < size; ++row) {
        h.entries(row, col) += taps.gains[p] * work[static_cast<std::size_t>(row)];
      }
    }
  }
  return h;
}

double frame_capacity_bits(const DdMatrix& h, double es_n0) {
  if (!std::isfinite(es_n0) || es_n0 < 0.0) {
    throw DomainError("frame_capacity_bits: Es/N0 must be finite and non-negative");
  }
  const Eigen::Index size = h.entries.cols();
  if (es_n0 == 0.0 || size == 0) return 0.0;

  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(size, size);
  a.selfadjointView<Eigen::Lower>().rankUpdate(h.entries.adjoint(), es_n0);
  Eigen::LLT<Eigen::MatrixXcd, Eigen::Lower> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("frame_capacity_bits: Cholesky of I + g H^H H failed (size " +
                         std::to_string(size) + ", g = " + std::to_string(es_n0) +
                         ", |H|_F = " + std::to_string(h.entries.norm()) + ")");
  }
  return std::max(0.0, log2_det_from_cholesky_diagonal(llt.matrixLLT()));
}

bool theoretical_outage_indicator(const DdMatrix& h, double es_n0, std::int64_t k_bits) {
  if (k_bits < 1) throw DomainError("theoretical_outage_indicator: k must be >= 1");
  return frame_capacity_bits(h, es_n0) < static_cast<double>(k_bits);
}

Eigen::MatrixXcd dd_core_gram(const TapSet& taps, const OtfsGrid& grid) {
  check_taps_against_grid(taps, grid);
  const std::int64_t size = grid.size();
  const std::size_t paths = taps.size();
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(size, size);

  // Row r of G holds h_i alpha^(c s_i) at column c = r - l_i (mod MN).
  std::vector<std::int64_t> cols(paths);
  std::vector<Complex> vals(paths);
  const double base = 2.0 * std::numbers::pi / static_cast<double>(size);
  for (std::int64_t r = 0; r < size; ++r) {
    for (std::size_t i = 0; i < paths; ++i) {
      const std::int64_t c = ((r - taps.delays[i]) % size + size) % size;
      cols[i] = c;
      vals[i] = taps.gains[i] * std::polar(1.0, base * static_cast<double>(c) * taps.dopplers[i]);
    }
    for (std::size_t i = 0; i < paths; ++i) {
      for (std::size_t j = 0; j < paths; ++j) {
        gram(cols[i], cols[j]) += std::conj(vals[i]) * vals[j];
      }
    }
  }
  return gram;
}

double frame_capacity_bits(const TapSet& taps, const OtfsGrid& grid, double es_n0) {
  if (!std::isfinite(es_n0) || es_n0 < 0.0) {
    throw DomainError("frame_capacity_bits: Es/N0 must be finite and non-negative");
  }
  if (es_n0 == 0.0) return 0.0;
  Eigen::MatrixXcd a = dd_core_gram(taps, grid);
  a *= es_n0;
  a.diagonal().array() += 1.0;
  return std::max(0.0, envelope_cholesky_logdet(a) * std::numbers::log2e);
}

void write_h_dd_binary(const DdMatrix& h, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "dump format is little endian");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(kDumpMagic, sizeof kDumpMagic);
  const auto m = static_cast<std::uint32_t>(h.grid.delay_bins);
  const auto n = static_cast<std::uint32_t>(h.grid.doppler_bins);
  out.write(reinterpret_cast<const char*>(&m), sizeof m);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (Eigen::Index r = 0; r < h.entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < h.entries.cols(); ++c) {
      const float pair[2] = {static_cast<float>(h.entries(r, c).real()),
                             static_cast<float>(h.entries(r, c).imag())};
      out.write(reinterpret_cast<const char*>(pair), sizeof pair);
    }
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

DdMatrix read_h_dd_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  char magic[8];
  std::uint32_t m = 0;
  std::uint32_t n = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&m), sizeof m);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || std::memcmp(magic, kDumpMagic, sizeof magic) != 0) {
    throw IoError("'" + path.string() + "' is not an H_DD dump");
  }
  DdMatrix h;
  h.grid.delay_bins = static_cast<int>(m);
  h.grid.doppler_bins = static_cast<int>(n);
  const auto size = static_cast<Eigen::Index>(h.grid.size());
  h.entries.resize(size, size);
  for (Eigen::Index r = 0; r < size; ++r) {
    for (Eigen::Index c = 0; c < size; ++c) {
      float pair[2];
      in.read(reinterpret_cast<char*>(pair), sizeof pair);
      h.entries(r, c) = Complex(pair[0], pair[1]);
    }
  }
  if (!in) throw IoError("'" + path.string() + "' is truncated");
  return h;
}

}  // namespace otfs
