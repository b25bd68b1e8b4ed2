// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace otfs {

/// Argument outside the mathematical domain of a formula (negative SNR,
/// probability outside (0,1), non-finite input).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid configuration. Carries every violation found, each prefixed with
/// the key path it refers to.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::string message)
      : std::invalid_argument(message), violations_{std::move(message)} {}
  explicit ConfigError(std::vector<std::string> violations)
      : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& v : items) {
      if (!out.empty()) out += "; ";
      out += v;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

/// Factorization or other numerical breakdown.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Power allocation impossible (no path with usable gain).
class AllocationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace otfs
