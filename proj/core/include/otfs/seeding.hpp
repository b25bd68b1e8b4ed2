// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>

namespace otfs {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Order-sensitive hash of a sequence of words into a 64-bit seed.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept;

/// Bit pattern of a double, for hashing real-valued keys.
std::uint64_t seed_word(double value) noexcept;

}  // namespace otfs
