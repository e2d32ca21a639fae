/**
 * @file relaybeam_main.cpp
 * @brief Command-line front end.
 *
 *   relaybeam run      [--config PATH] [--out DIR] [--seed N] [--key value ...]
 *   relaybeam sweep    [--axis A] [--grid G] [--config PATH] [--out DIR] ...
 *   relaybeam validate [--inject-fault NAME] [--key value ...]
 *
 * Any `--key value` pair matching a config key overrides the config file.
 * Exit codes: 0 success, 1 validation-suite failure, 2 configuration error,
 * 3 runtime numerical failure.
 */
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "relaybeam/config.hpp"
#include "relaybeam/errors.hpp"
#include "relaybeam/report.hpp"
#include "relaybeam/simulator.hpp"
#include "relaybeam/validate.hpp"

namespace {

namespace fs = std::filesystem;
using namespace relaybeam;

std::map<std::string, std::string> parse_overrides(
    const std::vector<std::string>& tokens) {
  std::map<std::string, std::string> overrides;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string key = tokens[i];
    if (key.rfind("--", 0) != 0)
      throw config_error(key, "overrides take the form --key value");
    key.erase(0, 2);
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      overrides[key.substr(0, eq)] = key.substr(eq + 1);
      continue;
    }
    if (i + 1 >= tokens.size())
      throw config_error(key, "missing value for override");
    overrides[key] = tokens[++i];
  }
  return overrides;
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

ScenarioConfig assemble_config(const CommonArgs& args,
                               const std::vector<std::string>& extra) {
  ScenarioConfig cfg;
  if (!args.config_path.empty()) cfg = load_config_file(args.config_path);
  apply_overrides(cfg, parse_overrides(extra));
  if (args.seed_set) cfg.seed = args.seed;
  return cfg;
}

int execute_experiment(ScenarioConfig cfg, const std::string& out_dir) {
  validate(cfg);
  RunManifest manifest;
  manifest.started = utc_timestamp();
  const SinrReport report = run_experiment(cfg);
  manifest.finished = utc_timestamp();
  manifest.config = cfg;
  manifest.outputs = {"results.csv", "results.dat"};

  fs::create_directories(out_dir);
  const fs::path base(out_dir);
  write_file((base / "results.csv").string(), report_to_csv(report));
  write_file((base / "results.dat").string(), report_to_dat(report));
  write_file((base / "manifest.txt").string(), manifest_text(manifest));

  std::cout << "axis: " << report.axis_name << " (" << report.axis.size()
            << " points, " << cfg.trials << " trials, " << cfg.snapshots
            << " snapshots, seed " << cfg.seed << ")\n";
  for (const auto& series : report.series) {
    std::cout << "  " << series.algorithm << ":";
    for (const double v : series.sinr_db)
      std::cout << ' ' << format_sig9(v);
    std::cout << " dB\n";
  }
  std::cout << "wrote " << (base / "results.csv").string() << ", "
            << (base / "results.dat").string() << ", "
            << (base / "manifest.txt").string() << "\n";
  return 0;
}

int run_validate(const std::string& inject_fault,
                 const std::vector<std::string>& extra) {
  ValidateOptions options;
  apply_overrides(options.config, parse_overrides(extra));
  options.inject_fault = inject_fault;
  const auto results = run_validation(options);
  std::size_t passed = 0;
  for (const auto& r : results) {
    std::printf("[%s] %-36s %s\n", r.pass ? " OK " : "FAIL", r.name.c_str(),
                r.detail.c_str());
    if (r.pass) ++passed;
  }
  std::printf("%zu/%zu checks passed\n", passed, results.size());
  return passed == results.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relaybeam: distributed relay beamforming simulator"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args;
  std::string sweep_axis, sweep_grid, inject_fault;

  CLI::App* run_cmd =
      app.add_subcommand("run", "run the experiment described by the config");
  run_cmd->allow_extras();
  run_cmd->add_option("--config", run_args.config_path, "config file path");
  run_cmd->add_option("--out", run_args.out_dir, "output directory");
  run_cmd->add_option("--seed", run_args.seed, "master seed")
      ->trigger_on_parse()
      ->each([&](const std::string&) { run_args.seed_set = true; });

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "run a sweep over pt_dbw, snr_db, or snapshots");
  sweep_cmd->allow_extras();
  sweep_cmd->add_option("--config", sweep_args.config_path,
                        "config file path");
  sweep_cmd->add_option("--out", sweep_args.out_dir, "output directory");
  sweep_cmd->add_option("--seed", sweep_args.seed, "master seed")
      ->trigger_on_parse()
      ->each([&](const std::string&) { sweep_args.seed_set = true; });
  sweep_cmd->add_option("--axis", sweep_axis,
                        "sweep axis: pt_dbw | snr_db | snapshots");
  sweep_cmd->add_option("--grid", sweep_grid,
                        "axis grid, start:stop:step or comma list");

  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "run the invariant and oracle suite");
  validate_cmd->allow_extras();
  validate_cmd->add_option("--inject-fault", inject_fault,
                           "corrupt the named check's inputs (test hook)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (run_cmd->parsed()) {
      return execute_experiment(
          assemble_config(run_args, run_cmd->remaining()), run_args.out_dir);
    }
    if (sweep_cmd->parsed()) {
      ScenarioConfig cfg =
          assemble_config(sweep_args, sweep_cmd->remaining());
      if (!sweep_axis.empty()) cfg.sweep_axis = sweep_axis;
      if (!sweep_grid.empty()) cfg.sweep_grid = sweep_grid;
      return execute_experiment(cfg, sweep_args.out_dir);
    }
    return run_validate(inject_fault, validate_cmd->remaining());
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
