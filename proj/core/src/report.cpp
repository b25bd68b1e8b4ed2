// SPDX-License-Identifier: Apache-2.0
#include "otfs/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>
#include <vector>

#include "otfs/errors.hpp"

namespace otfs {

namespace {

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& s, int line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw ConfigError("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& s, int line_no) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw ConfigError("csv line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  }
  return v;
}

std::string series_label(const SweepRow& r) {
  return std::string(to_string(r.estimator)) + " L=" + std::to_string(r.paths) + " Rc=" +
         real(r.coding_rate);
}

}  // namespace

std::string format_csv(const SweepResult& result) {
  std::string out(kCsvHeader);
  out += '\n';
  char seed[32];
  for (const auto& r : result.rows) {
    std::snprintf(seed, sizeof seed, "%" PRIu64, r.seed);
    out += std::string(to_string(r.estimator)) + ',' + std::to_string(r.paths) + ',' +
           real(r.coding_rate) + ',' + real(r.es_n0_db) + ',' + real(r.outage) + ',' +
           std::to_string(r.trials) + ',' + real(r.ci_low) + ',' + real(r.ci_high) + ',' + seed +
           '\n';
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
  if (result.rows.empty()) throw ConfigError("emit_csv: result has no rows");
  write_file(path, format_csv(result));
}

SweepResult parse_csv(std::string_view text) {
  SweepResult result;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != kCsvHeader) throw ConfigError("csv: unexpected header '" + line + "'");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) {
      throw ConfigError("csv line " + std::to_string(line_no) + ": expected 9 fields");
    }
    SweepRow r;
    r.estimator = estimator_from_string(f[0]);
    r.paths = static_cast<int>(parse_int(f[1], line_no));
    r.coding_rate = parse_real(f[2], line_no);
    r.es_n0_db = parse_real(f[3], line_no);
    r.outage = parse_real(f[4], line_no);
    r.trials = parse_int(f[5], line_no);
    r.ci_low = parse_real(f[6], line_no);
    r.ci_high = parse_real(f[7], line_no);
    r.seed = std::stoull(f[8]);
    result.rows.push_back(r);
  }
  return result;
}

std::string format_plot_script(const SweepResult& result, std::string_view csv_reference) {
  // Series keyed by (estimator, L, Rc) in row order of first appearance.
  std::vector<const SweepRow*> series;
  std::map<std::tuple<Estimator, int, double>, bool> seen;
  for (const auto& r : result.rows) {
    if (seen.emplace(std::make_tuple(r.estimator, r.paths, r.coding_rate), true).second) {
      series.push_back(&r);
    }
  }

  std::ostringstream s;
  s << "# gnuplot script: outage probability vs Es/N0\n"
    << "# run from this file's directory: gnuplot -p <this file>\n"
    << "set datafile separator ','\n"
    << "set logscale y\n"
    << "set format y '10^{%L}'\n"
    << "set xlabel 'E_s/N_0 (dB)'\n"
    << "set ylabel 'Outage probability'\n"
    << "set key outside right\n"
    << "set grid\n"
    << "csv = '" << csv_reference << "'\n"
    << "plot \\\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const SweepRow& r = *series[i];
    s << "  csv every ::1 using 4:((strcol(1) eq '" << to_string(r.estimator) << "' && $2 == "
      << r.paths << " && abs($3 - " << real(r.coding_rate)
      << ") < 1e-9 && $5 > 0) ? $5 : NaN) with linespoints title '" << series_label(r) << "'"
      << (i + 1 < series.size() ? ", \\\n" : "\n");
  }
  return s.str();
}

void emit_plot_script(const SweepResult& result, const std::filesystem::path& path,
                      const std::filesystem::path& csv_path) {
  if (result.rows.empty()) throw ConfigError("emit_plot_script: result has no rows");
  const auto script_dir = std::filesystem::absolute(path).lexically_normal().parent_path();
  const auto relative =
      std::filesystem::absolute(csv_path).lexically_normal().lexically_relative(script_dir);
  write_file(path, format_plot_script(result, relative.generic_string()));
}

}  // namespace otfs
