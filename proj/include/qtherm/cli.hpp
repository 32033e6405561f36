// Command-line front end. Subcommands: run, list-scenarios, validate-config,
// version. Exit codes: 0 success, 2 configuration or usage errors, 3 problem
// size over the supported caps, 4 numerical or validation failures during a
// run, 5 output I/O failures, 1 anything unexpected.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qtherm/config.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/results.hpp"
#include "qtherm/scenarios.hpp"

namespace qtherm {

inline std::string scenario_blurb(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::typicality:
      return "reduced states of random constrained global states vs the canonical state";
    case ScenarioKind::bounce:
      return "momentum mirror acting on one particle, with unitary dilation cross-check";
    case ScenarioKind::expansion_unitary:
      return "confined thermal state released and evolved unitarily in a larger box";
    case ScenarioKind::expansion_entangling:
      return "gas qubits entangling with environment qubits at fixed total energy";
    case ScenarioKind::relaxation_scan:
      return "gas marginal entropy vs time under random couplings, with relaxation fit";
  }
  return "";
}

inline int cli_main(int argc, const char* const* argv, std::ostream& out,
                    std::ostream& err) {
  CLI::App app{"finite-dimensional quantum thermalization scenarios"};
  app.set_version_flag("--version", std::string(QTHERM_VERSION));
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_dir;
  std::string format_name = "both";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  int workers = 1;

  auto add_config_options = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "JSON config file")->required();
    cmd->add_option("--set", overrides,
                    "override a config key, key=value (repeatable; one dot "
                    "reaches nested objects)");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { seed = v; },
        "override the random seed");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run a scenario and write results");
  add_config_options(run_cmd);
  run_cmd->add_option("-o,--out", out_dir, "output directory (default from config)");
  run_cmd->add_option("--format", format_name, "results format: csv, json, or both")
      ->capture_default_str();
  run_cmd->add_option("--workers", workers, "worker threads (results do not depend on this)")
      ->capture_default_str();

  CLI::App* list_cmd =
      app.add_subcommand("list-scenarios", "list scenario names with descriptions");
  CLI::App* validate_cmd = app.add_subcommand(
      "validate-config", "check a config and print its effective form");
  add_config_options(validate_cmd);
  CLI::App* version_cmd = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list_cmd->parsed()) {
      for (const auto& [kind, name] : scenario_names()) {
        out << name << "  " << scenario_blurb(kind) << "\n";
      }
      return 0;
    }
    if (version_cmd->parsed()) {
      out << QTHERM_VERSION << "\n";
      return 0;
    }
    if (validate_cmd->parsed()) {
      const ScenarioConfig config = load_config_file(config_path, overrides, seed);
      const nlohmann::json effective{{"scenario", to_string(config.scenario)},
                                     {"parameters", config.parameters},
                                     {"output_path", config.output_path}};
      out << effective.dump(2) << "\n";
      return 0;
    }
    if (run_cmd->parsed()) {
      if (workers < 1 || workers > 256) {
        throw ConfigError("--workers must be in [1, 256]");
      }
      const OutputFormat format = output_format_from_string(format_name);
      ScenarioConfig config = load_config_file(config_path, overrides, seed);
      if (!out_dir.empty()) config.output_path = out_dir;

      const std::vector<RunRecord> records = run_scenario(config, workers);
      const std::vector<std::string> files =
          write_results(config, records, format, workers);

      out << "scenario: " << to_string(config.scenario) << "\n";
      out << "records: " << records.size() << "\n";
      out << "wall_clock_seconds: "
          << (records.empty() ? 0.0 : records.front().wall_clock_seconds) << "\n";
      out << "wrote:";
      for (const auto& f : files) out << " " << (std::filesystem::path(config.output_path) / f).string();
      out << "\n";
      return 0;
    }
    err << app.help();
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int cli_main(const std::vector<std::string>& args, std::ostream& out,
                    std::ostream& err) {
  std::vector<std::string> argv_store;
  argv_store.push_back("qtherm");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace qtherm
