// SPDX-License-Identifier: Apache-2.0
#include "otfs/seeding.hpp"

#include <bit>

namespace otfs {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t state = 0x243f6a8885a308d3ULL;
  for (std::uint64_t w : words) state = mix64(state ^ mix64(w));
  return state;
}

std::uint64_t seed_word(double value) noexcept {
  // +0.0 and -0.0 hash alike.
  return std::bit_cast<std::uint64_t>(value == 0.0 ? 0.0 : value);
}

}  // namespace otfs
