// SPDX-License-Identifier: Apache-2.0
#include "otfs/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "otfs/errors.hpp"

namespace otfs {

namespace {

using nlohmann::json;

const std::set<std::string> kTopKeys = {
    "preset",      "grid",     "channel",           "es_n0_db",       "coding_rates",
    "path_counts", "estimators", "trials",          "theoretical_trials", "seed",
    "blocklength", "total_power_model", "capacity_route", "threads",   "out_csv",
    "out_plot",    "verbosity"};
const std::set<std::string> kGridKeys = {"M", "N", "delta_f_hz", "carrier_hz"};
const std::set<std::string> kChannelKeys = {"max_delay", "max_doppler", "mean",
                                            "fractional_doppler", "delay_model"};
const std::set<std::string> kRangeKeys = {"start", "stop", "step"};
const std::vector<std::string> kRequiredWithoutPreset = {"es_n0_db", "coding_rates", "path_counts",
                                                         "estimators"};

// Collects violations while reading typed values out of a JSON object.
class Reader {
 public:
  std::vector<std::string> problems;

  void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.contains(key)) problems.push_back(prefix + key + ": unknown key");
    }
  }

  bool object(const json& obj, const std::string& path) {
    if (obj.is_object()) return true;
    problems.push_back(path + ": expected an object");
    return false;
  }

  template <typename Int>
  void integer(const json& obj, const char* key, const std::string& path, Int& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      problems.push_back(path + ": expected an integer");
      return;
    }
    if constexpr (std::is_unsigned_v<Int>) {
      if (v.is_number_unsigned()) {
        out = v.get<Int>();
      } else if (v.get<std::int64_t>() >= 0) {
        out = static_cast<Int>(v.get<std::int64_t>());
      } else {
        problems.push_back(path + ": must be non-negative");
      }
    } else {
      out = v.get<Int>();
    }
  }

  void number(const json& obj, const char* key, const std::string& path, double& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      problems.push_back(path + ": expected a number");
      return;
    }
    out = v.get<double>();
  }

  void boolean(const json& obj, const char* key, const std::string& path, bool& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
      problems.push_back(path + ": expected a boolean");
      return;
    }
    out = v.get<bool>();
  }

  std::optional<std::string> string(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      problems.push_back(path + ": expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  template <typename T>
  void list(const json& obj, const char* key, const std::string& path, std::vector<T>& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_array()) {
      problems.push_back(path + ": expected an array");
      return;
    }
    std::vector<T> values;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const json& item = v[i];
      const std::string item_path = path + "[" + std::to_string(i) + "]";
      if constexpr (std::is_integral_v<T>) {
        if (!item.is_number_integer()) {
          problems.push_back(item_path + ": expected an integer");
          continue;
        }
      } else {
        if (!item.is_number()) {
          problems.push_back(item_path + ": expected a number");
          continue;
        }
      }
      values.push_back(item.get<T>());
    }
    out = std::move(values);
  }

  template <typename F>
  void call(const std::string& path, F&& f) {
    try {
      f();
    } catch (const ConfigError& e) {
      for (const auto& v : e.violations()) {
        problems.push_back(v.starts_with(path) ? v : path + ": " + v);
      }
    }
  }
};

std::vector<double> db_range(double start, double stop, double step) {
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) {
    // Round to 1e-9 dB so 0.1-dB steps print cleanly.
    out.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
  }
  return out;
}

void read_es_n0(Reader& r, const json& root, SweepSpec& spec) {
  if (!root.contains("es_n0_db")) return;
  const json& v = root.at("es_n0_db");
  if (v.is_object()) {
    r.reject_unknown(v, kRangeKeys, "es_n0_db.");
    double start = NAN;
    double stop = NAN;
    double step = NAN;
    r.number(v, "start", "es_n0_db.start", start);
    r.number(v, "stop", "es_n0_db.stop", stop);
    r.number(v, "step", "es_n0_db.step", step);
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
      r.problems.push_back("es_n0_db: range needs finite start, stop and step");
      return;
    }
    if (!(step > 0.0) || stop < start) {
      r.problems.push_back("es_n0_db: range needs step > 0 and stop >= start");
      return;
    }
    spec.es_n0_db = db_range(start, stop, step);
    return;
  }
  r.list(root, "es_n0_db", "es_n0_db", spec.es_n0_db);
}

json range_or_list(const std::vector<double>& values) { return json(values); }

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig3", "fig4", "fig5", "fig6"};
  return names;
}

std::vector<double> default_es_n0_grid_db() { return db_range(-10.0, 20.0, 2.0); }

SweepSpec preset_spec(std::string_view name) {
  SweepSpec spec;
  spec.channel.grid = OtfsGrid{32, 16, 7.5e3, 4.0e9};
  spec.channel.max_delay = 8;
  spec.channel.max_doppler = 4;
  spec.channel.mean = 0.0;
  spec.channel.fractional_doppler = true;
  spec.channel.delay_model = DelayModel::kZeroDelayFirstPath;
  spec.es_n0_db = default_es_n0_grid_db();
  spec.bound_trials = 100000;
  spec.theoretical_trials = 10000;
  spec.base_seed = 1;

  if (name == "fig3") {
    spec.path_counts = {3, 5, 7};
    spec.coding_rates = {0.8};
    spec.estimators = {Estimator::kLowerAverage, Estimator::kLowerWaterFilling};
  } else if (name == "fig4") {
    spec.path_counts = {5};
    spec.coding_rates = {0.4, 0.6, 0.8};
    spec.estimators = {Estimator::kLowerAverage, Estimator::kLowerWaterFilling};
  } else if (name == "fig5") {
    spec.path_counts = {3};
    spec.coding_rates = {0.8};
    spec.estimators = {Estimator::kTheoretical, Estimator::kLowerAverage};
  } else if (name == "fig6") {
    spec.path_counts = {5};
    spec.coding_rates = {0.8};
    spec.estimators = {Estimator::kTheoretical, Estimator::kLowerAverage};
  } else {
    throw ConfigError("preset: unknown preset '" + std::string(name) + "' (expected fig3..fig6)");
  }
  return spec;
}

RunConfig parse_config(std::string_view text, const std::optional<std::string>& preset_override) {
  json root;
  const bool blank = text.find_first_not_of(" \t\r\n") == std::string_view::npos;
  if (blank) {
    root = json::object();
  } else {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
  }

  Reader r;
  if (!r.object(root, "config")) throw ConfigError(std::move(r.problems));
  r.reject_unknown(root, kTopKeys, "");

  RunConfig cfg;
  cfg.preset = r.string(root, "preset", "preset");
  if (preset_override) cfg.preset = preset_override;

  if (cfg.preset) {
    r.call("preset", [&] { cfg.spec = preset_spec(*cfg.preset); });
  } else {
    for (const auto& key : kRequiredWithoutPreset) {
      if (!root.contains(key)) r.problems.push_back(key + ": required when no preset is given");
    }
    cfg.spec.channel.grid = OtfsGrid{32, 16, 7.5e3, 4.0e9};
  }
  SweepSpec& spec = cfg.spec;

  if (root.contains("grid") && r.object(root["grid"], "grid")) {
    const json& g = root["grid"];
    r.reject_unknown(g, kGridKeys, "grid.");
    r.integer(g, "M", "grid.M", spec.channel.grid.delay_bins);
    r.integer(g, "N", "grid.N", spec.channel.grid.doppler_bins);
    r.number(g, "delta_f_hz", "grid.delta_f_hz", spec.channel.grid.subcarrier_spacing_hz);
    r.number(g, "carrier_hz", "grid.carrier_hz", spec.channel.grid.carrier_hz);
  }
  if (root.contains("channel") && r.object(root["channel"], "channel")) {
    const json& c = root["channel"];
    r.reject_unknown(c, kChannelKeys, "channel.");
    r.integer(c, "max_delay", "channel.max_delay", spec.channel.max_delay);
    r.integer(c, "max_doppler", "channel.max_doppler", spec.channel.max_doppler);
    r.number(c, "mean", "channel.mean", spec.channel.mean);
    r.boolean(c, "fractional_doppler", "channel.fractional_doppler", spec.channel.fractional_doppler);
    if (auto model = r.string(c, "delay_model", "channel.delay_model")) {
      r.call("channel.delay_model", [&] { spec.channel.delay_model = delay_model_from_string(*model); });
    }
  }

  read_es_n0(r, root, spec);
  r.list(root, "coding_rates", "coding_rates", spec.coding_rates);
  r.list(root, "path_counts", "path_counts", spec.path_counts);
  if (root.contains("estimators")) {
    const json& e = root["estimators"];
    if (!e.is_array()) {
      r.problems.push_back("estimators: expected an array");
    } else {
      std::vector<Estimator> estimators;
      for (std::size_t i = 0; i < e.size(); ++i) {
        const std::string path = "estimators[" + std::to_string(i) + "]";
        if (!e[i].is_string()) {
          r.problems.push_back(path + ": expected a string");
          continue;
        }
        r.call(path, [&] { estimators.push_back(estimator_from_string(e[i].get<std::string>())); });
      }
      spec.estimators = std::move(estimators);
    }
  }
  r.integer(root, "trials", "trials", spec.bound_trials);
  r.integer(root, "theoretical_trials", "theoretical_trials", spec.theoretical_trials);
  r.integer(root, "seed", "seed", spec.base_seed);
  if (root.contains("blocklength")) {
    std::int64_t n = 0;
    r.integer(root, "blocklength", "blocklength", n);
    spec.blocklength = n;
  }
  if (auto model = r.string(root, "total_power_model", "total_power_model")) {
    r.call("total_power_model", [&] { spec.power_model = power_model_from_string(*model); });
  }
  if (auto route = r.string(root, "capacity_route", "capacity_route")) {
    if (*route == "structured") {
      spec.capacity_route = CapacityRoute::kStructured;
    } else if (*route == "dense") {
      spec.capacity_route = CapacityRoute::kDense;
    } else {
      r.problems.push_back("capacity_route: unknown value '" + *route + "'");
    }
  }
  r.integer(root, "threads", "threads", spec.threads);
  if (auto p = r.string(root, "out_csv", "out_csv")) cfg.out_csv = *p;
  if (auto p = r.string(root, "out_plot", "out_plot")) cfg.out_plot = *p;
  r.integer(root, "verbosity", "verbosity", cfg.verbosity);

  // Invariant checks only make sense once the structure parsed.
  if (r.problems.empty()) r.call("spec", [&] { spec.validate(); });
  if (!r.problems.empty()) throw ConfigError(std::move(r.problems));
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path,
                            const std::optional<std::string>& preset_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), preset_override);
}

std::string spec_to_json(const SweepSpec& spec) {
  // nlohmann::ordered_json keeps insertion order for a stable rendering.
  nlohmann::ordered_json j;
  j["grid"] = {{"M", spec.channel.grid.delay_bins},
               {"N", spec.channel.grid.doppler_bins},
               {"delta_f_hz", spec.channel.grid.subcarrier_spacing_hz},
               {"carrier_hz", spec.channel.grid.carrier_hz}};
  j["channel"] = {{"max_delay", spec.channel.max_delay},
                  {"max_doppler", spec.channel.max_doppler},
                  {"mean", spec.channel.mean},
                  {"fractional_doppler", spec.channel.fractional_doppler},
                  {"delay_model", std::string(to_string(spec.channel.delay_model))}};
  j["es_n0_db"] = range_or_list(spec.es_n0_db);
  j["coding_rates"] = spec.coding_rates;
  j["path_counts"] = spec.path_counts;
  std::vector<std::string> estimators;
  for (Estimator e : spec.estimators) estimators.emplace_back(to_string(e));
  j["estimators"] = estimators;
  j["trials"] = spec.bound_trials;
  j["theoretical_trials"] = spec.theoretical_trials;
  j["seed"] = spec.base_seed;
  if (spec.blocklength) j["blocklength"] = *spec.blocklength;
  j["total_power_model"] = std::string(to_string(spec.power_model));
  j["capacity_route"] = spec.capacity_route == CapacityRoute::kStructured ? "structured" : "dense";
  return j.dump(2) + "\n";
}

}  // namespace otfs
