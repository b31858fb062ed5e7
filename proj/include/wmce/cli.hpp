#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wmce {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumeric = 2 };

enum class Subcommand { Simulate, Estimate, Experiment, Rates, Compare };

enum class OutputFormat { Csv, Json };

struct CliInvocation {
  Subcommand subcommand = Subcommand::Experiment;
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  unsigned threads = 0;
  OutputFormat format = OutputFormat::Csv;
  /// Paths file for `estimate` (overrides the config's paths_file).
  std::string paths_file;
};

/// Runs one invocation; returns the process exit code. On failure every
/// file written by the run is removed.
int run_cli(const CliInvocation& invocation, std::ostream& log);

/// Parses argv and dispatches to run_cli.
int cli_main(int argc, char** argv);

}  // namespace wmce
