#pragma once

// Subcommands of the batch front end. Each writes its reports into out_dir
// and returns the process exit code.

#include <json.hpp>
#include <string>
#include <vector>

#include "superliouville/run_config.hpp"

namespace superliouville {

inline constexpr int kExitPass = 0;
inline constexpr int kExitGateFailure = 1;
inline constexpr int kExitConfigError = 2;

struct GateResult {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

struct CommandResult {
  int exit_code = kExitPass;
  nlohmann::ordered_json report;
  std::vector<std::string> files;  // written, relative to out_dir
};

/// The configured pair, perturbations applied.
SolutionPair build_pair(const RunConfig& config);

/// Diagnostics of `pair` plus the configured gates.
CommandResult verify_pair(const SolutionPair& pair, const RunConfig& config);

CommandResult cmd_verify(const RunConfig& config, const std::string& out_dir);
CommandResult cmd_solve(const RunConfig& config, const std::string& out_dir);
CommandResult cmd_blowup(const RunConfig& config, const std::string& out_dir);
CommandResult cmd_export(const RunConfig& config, const std::string& out_dir);
CommandResult cmd_kelvin(const RunConfig& config, const std::string& out_dir);

/// Loads the config, dispatches on the command name and maps library errors
/// to exit codes: ConfigError, InvalidThreshold and domain errors give 2,
/// NoConvergence, LinearSolveFailure and NotASolution give 1.
int run_command(const std::string& command, const std::string& config_path, const std::string& out_dir,
                std::string* message = nullptr);

nlohmann::ordered_json to_json(const SolveReport& report);
nlohmann::ordered_json to_json(const StressTensor& stress);
nlohmann::ordered_json to_json(const GreenResult& green);

}  // namespace superliouville
