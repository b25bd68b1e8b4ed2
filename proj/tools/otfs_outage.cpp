// SPDX-License-Identifier: Apache-2.0
//
// otfs_outage: Monte-Carlo outage sweeps for OTFS at finite blocklength.
//
//   otfs_outage run --preset fig3 --out-csv fig3.csv --out-plot fig3.gp
//   otfs_outage run --config sweep.json --threads 4
//   otfs_outage presets
//
// Exit status 0 only when every trial succeeded and every output was written.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "otfs/errors.hpp"
#include "otfs/report.hpp"
#include "otfs/run_config.hpp"
#include "otfs/sim.hpp"

namespace {

int run(const std::optional<std::string>& config_path, const std::optional<std::string>& preset,
        const std::optional<std::string>& out_csv, const std::optional<std::string>& out_plot,
        const std::optional<std::uint64_t>& seed, const std::optional<std::int64_t>& trials,
        const std::optional<unsigned>& threads) {
  otfs::RunConfig cfg = config_path ? otfs::parse_config_file(*config_path, preset)
                                    : otfs::parse_config("", preset);
  if (out_csv) cfg.out_csv = *out_csv;
  if (out_plot) cfg.out_plot = *out_plot;
  if (seed) cfg.spec.base_seed = *seed;
  if (trials) {
    cfg.spec.bound_trials = *trials;
    cfg.spec.theoretical_trials = *trials;
  }
  if (threads) cfg.spec.threads = *threads;
  if (!cfg.out_csv) cfg.out_csv = cfg.preset ? *cfg.preset + ".csv" : std::string("outage.csv");

  const auto start = std::chrono::steady_clock::now();
  const otfs::SweepResult result = otfs::run_sweep(cfg.spec, [&](const otfs::SweepRow& row) {
    if (cfg.verbosity < 2) return;
    std::fprintf(stderr, "%-11s L=%d Rc=%.3g Es/N0=%6.2f dB  outage=%.4e  [%.3e, %.3e]%s\n",
                 std::string(otfs::to_string(row.estimator)).c_str(), row.paths, row.coding_rate,
                 row.es_n0_db, row.outage, row.ci_low, row.ci_high,
                 row.below_resolution ? "  (< 1/trials)" : "");
  });
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  otfs::emit_csv(result, *cfg.out_csv);
  if (cfg.out_plot) otfs::emit_plot_script(result, *cfg.out_plot, *cfg.out_csv);

  const auto failed = result.failed_trials();
  if (cfg.verbosity >= 1) {
    std::size_t unresolved = 0;
    for (const auto& r : result.rows) unresolved += r.below_resolution ? 1 : 0;
    std::fprintf(stderr, "%zu rows in %.1f s -> %s", result.rows.size(), seconds,
                 cfg.out_csv->string().c_str());
    if (cfg.out_plot) std::fprintf(stderr, ", %s", cfg.out_plot->string().c_str());
    std::fprintf(stderr, "\n");
    if (unresolved > 0) {
      std::fprintf(stderr, "%zu rows below resolution (estimate < 1/trials)\n", unresolved);
    }
  }
  if (failed > 0) {
    std::fprintf(stderr, "error: %lld failed trials\n", static_cast<long long>(failed));
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage probability of OTFS with finite blocklength"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::optional<std::string> preset;
  std::optional<std::string> out_csv;
  std::optional<std::string> out_plot;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<unsigned> threads;

  auto* run_cmd = app.add_subcommand("run", "Run an outage sweep");
  run_cmd->add_option("--config", config_path, "JSON run configuration");
  run_cmd->add_option("--preset", preset, "Built-in experiment")
      ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6"}));
  run_cmd->add_option("--out-csv", out_csv, "CSV output path");
  run_cmd->add_option("--out-plot", out_plot, "gnuplot script output path");
  run_cmd->add_option("--seed", seed, "Base seed (u64)");
  run_cmd->add_option("--trials", trials, "Trials per point for every estimator")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--threads", threads, "Worker threads (default: OTFS_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  auto* presets_cmd = app.add_subcommand("presets", "Print the built-in presets as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*presets_cmd) {
      for (const auto& name : otfs::preset_names()) {
        std::cout << "// " << name << "\n" << otfs::spec_to_json(otfs::preset_spec(name));
      }
      return 0;
    }
    return run(config_path, preset, out_csv, out_plot, seed, trials, threads);
  } catch (const otfs::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
