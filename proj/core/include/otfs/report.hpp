// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "otfs/sim.hpp"

namespace otfs {

/// Header of the result CSV.
inline constexpr std::string_view kCsvHeader =
    "estimator,L,Rc,esn0_db,outage,trials,ci_low,ci_high,seed";

/// CSV text: header plus one LF-terminated line per row, reals with 8
/// significant digits.
std::string format_csv(const SweepResult& result);
void emit_csv(const SweepResult& result, const std::filesystem::path& path);

/// Inverse of format_csv for the columns it carries.
SweepResult parse_csv(std::string_view text);

/// gnuplot script plotting outage (log scale) against Es/N0, one series per
/// (estimator, L, R_c). `csv_reference` is written verbatim into the script
/// and resolved relative to the directory gnuplot runs in.
std::string format_plot_script(const SweepResult& result, std::string_view csv_reference);

/// Writes the plot script, referencing `csv_path` relative to the script's
/// own directory.
void emit_plot_script(const SweepResult& result, const std::filesystem::path& path,
                      const std::filesystem::path& csv_path);

}  // namespace otfs
