// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include <Eigen/Dense>

#include "otfs/dd_channel.hpp"

namespace otfs {

/// Dense effective delay-Doppler channel matrix (MN x MN).
struct DdMatrix {
  Eigen::MatrixXcd entries;
  OtfsGrid grid;
};

// Structured factors of the DD channel. Vectors are indexed n*M + m with
// m the delay bin and n the Doppler block, matching F_N (x) I_M.

/// x <- (F_N (x) I_M) x, or (F_N^H (x) I_M) x when `inverse`; F_N is the
/// unitary N-point DFT.
void apply_block_dft(std::span<Complex> x, const OtfsGrid& grid, bool inverse);

/// x <- Pi^shift x, Pi the forward cyclic shift by one position mod MN.
void apply_delay_shift(std::span<Complex> x, int shift);

/// x <- Delta^doppler x, Delta = diag(alpha^0, ..., alpha^(MN-1)),
/// alpha = exp(j 2 pi / MN); fractional powers use the principal value.
void apply_doppler_phase(std::span<Complex> x, double doppler);

/// Sum over paths of h_i (F_N (x) I_M) Pi^l_i Delta^(k_i+kappa_i) (F_N^H (x) I_M),
/// assembled column by column from the structured factors.
DdMatrix build_h_dd(const TapSet& taps, const OtfsGrid& grid);

/// log2 det(I + es_n0 H^H H) in bits per frame, via Cholesky of the dense
/// Hermitian matrix.
double frame_capacity_bits(const DdMatrix& h, double es_n0);

/// 1 iff frame_capacity_bits(h, es_n0) < k_bits.
bool theoretical_outage_indicator(const DdMatrix& h, double es_n0, std::int64_t k_bits);

/// Gram matrix G^H G of the DD core G = sum_i h_i Pi^l_i Delta^(k_i+kappa_i).
/// H_DD is a unitary similarity of G, so det(I + g H^H H) = det(I + g G^H G).
/// The result is cyclically banded with offsets l_i - l_j.
Eigen::MatrixXcd dd_core_gram(const TapSet& taps, const OtfsGrid& grid);

/// Same quantity as frame_capacity_bits(build_h_dd(taps, grid), es_n0),
/// computed from dd_core_gram with an envelope Cholesky. O(MN l_max^2 + l_max (MN)^2).
double frame_capacity_bits(const TapSet& taps, const OtfsGrid& grid, double es_n0);

/// Binary dump: 8-byte magic "OTFSHDD1", uint32 M, uint32 N (little endian),
/// then (MN)^2 row-major entries as float32 (re, im) pairs.
void write_h_dd_binary(const DdMatrix& h, const std::filesystem::path& path);
DdMatrix read_h_dd_binary(const std::filesystem::path& path);

}  // namespace otfs
