// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "otfs/sim.hpp"

namespace otfs {

/// A sweep plus where to write its outputs.
struct RunConfig {
  std::optional<std::string> preset;
  SweepSpec spec;
  std::optional<std::filesystem::path> out_csv;
  std::optional<std::filesystem::path> out_plot;
  int verbosity = 1;
};

/// Names accepted by preset_spec.
const std::vector<std::string>& preset_names();

/// Fully populated sweep for one of the built-in experiments (fig3..fig6).
SweepSpec preset_spec(std::string_view name);

/// Default Es/N0 axis of the presets, in dB.
std::vector<double> default_es_n0_grid_db();

/// Parses a JSON run configuration. Unknown keys, type mismatches and
/// invariant violations are all collected into one ConfigError. A preset
/// (from the "preset" key or `preset_override`, which wins) seeds every
/// field; explicit keys override it. Empty text is an empty object.
RunConfig parse_config(std::string_view text,
                       const std::optional<std::string>& preset_override = std::nullopt);

/// Reads `path` and parses it with parse_config.
RunConfig parse_config_file(const std::filesystem::path& path,
                            const std::optional<std::string>& preset_override = std::nullopt);

/// Canonical JSON rendering of a sweep spec (stable key order, 2-space
/// indent). parse_config accepts it back.
std::string spec_to_json(const SweepSpec& spec);

}  // namespace otfs
