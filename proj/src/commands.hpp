// SPDX-License-Identifier: Apache-2.0
//
// Subcommand drivers shared by the C API and the CLI. Each returns a JSON
// report plus the process exit code and writes its CSVs under the output dir.

#pragma once

#include <optional>
#include <string>

#include "bcurrent/scenario.hpp"
#include "json.hpp"

namespace bcurrent {

using ordered_json = nlohmann::ordered_json;

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitGeometry = 3,
  kExitNoOutwardVector = 4,
  kExitBudget = 5,
  kExitWeinstock = 6,
  kExitGrowth = 7,
  kExitReproduce = 8,
  kExitInternal = 9,
};

struct CommandOptions {
  std::string out_dir;  // overrides scenario.output_dir
  std::string input;    // asymptotics: pairing CSV to fit
  bool diagnostics = false;
  unsigned threads = 1;
};

struct CommandResult {
  int exit_code = kExitOk;
  ordered_json report;
  std::optional<ErrorCode> error;  // set when the command threw
  bool internal_error = false;
};

/// Exit code for an error raised while running `command`.
int exit_code_for(ErrorCode code, const std::string& command);

CommandResult cmd_classify(const Scenario& scenario, const CommandOptions& options);
CommandResult cmd_pair(const Scenario& scenario, const CommandOptions& options);
/// Fits `options.input` when given, else runs the closed-form oracle suite.
CommandResult cmd_asymptotics(const Scenario* scenario, const CommandOptions& options);
CommandResult cmd_weinstock(const Scenario& scenario, const CommandOptions& options);
CommandResult cmd_growth(const Scenario& scenario, const CommandOptions& options);
CommandResult cmd_reproduce_paper(const CommandOptions& options);

/// Runs a command by name, mapping thrown errors to exit codes and an
/// "error" entry in the report.
CommandResult run_command(const std::string& command, const Scenario* scenario, const CommandOptions& options);

/// "epsilon,re,im,err_est" rows.
std::string pairing_csv(const std::vector<PairingSample>& samples);
/// Parses the pairing CSV format. Throws ConfigParse.
std::vector<PairingSample> parse_pairing_csv(const std::string& text);

}  // namespace bcurrent
