#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "glcorner/records.hpp"

namespace glcorner {

// One entry of the defaults table: parameter name, default value, help text.
struct ParamDoc {
  std::string name;
  Json value;
  std::string help;
};

std::vector<std::string> command_names();
std::string command_summary(const std::string& command);
// Every tunable of a command with its default. This table is the single
// source of defaults for the CLI, config files, sweeps and the Python module.
const std::vector<ParamDoc>& command_params(const std::string& command);

struct CommandContext {
  std::filesystem::path cache_dir = ".glcorner-cache";
  bool use_cache = true;
  std::function<void(const std::string&)> log;  // progress lines; may be empty
};

// defaults <- config <- overrides; unknown keys are a UsageError.
Json merge_params(const std::string& command, const Json& config, const Json& overrides);

// Runs a command on fully merged parameters and returns its RunRecord.
// Throws UsageError / GeometryError (bad input) or NumericalError.
RunRecord run_command(const std::string& command, const Json& params, const CommandContext& ctx = {});

// Plain-text table of the scalar entries of a result.
std::string format_result(const RunRecord& rec);

struct SweepSummary {
  std::filesystem::path output;
  int cells = 0, failed = 0;
  bool complete = false;
};

// Sweep file: {"command", "base", "grid": {param: [values]}, "output", "workers"}.
// Writes cells/cell_NNN.json, results.csv, summary.svg and bundle.json.
SweepSummary run_sweep(const Json& spec, const CommandContext& ctx = {});

}  // namespace glcorner
