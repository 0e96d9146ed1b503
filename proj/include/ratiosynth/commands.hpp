#pragma once

#include "ratiosynth/lfp.hpp"
#include "ratiosynth/model.hpp"
#include "ratiosynth/simulation.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ratiosynth {

/// Process exit codes shared by all commands.
enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 1,
  kExitUnrealizable = 2,
  kExitMultichain = 3,
  kExitNumerical = 4,
};

/// Result of one command: exit code, machine-readable record and
/// human-readable lines (violations, notes).
struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json record;
  std::vector<std::string> messages;
};

/// Specification files. Repeated files of one role are composed: automata
/// synchronously with added costs, environments as independent products.
struct SpecFiles {
  std::vector<std::string> qual;
  std::vector<std::string> quant;
  std::vector<std::string> env;
};

struct LoadedSpecs {
  CostAutomaton qual;
  CostAutomaton quant;
  LabeledMDP env;
  nlohmann::json inputs = nlohmann::json::array();
};

/// FNV-1a 64-bit digest as 16 hex digits.
std::string fnv1a64_hex(std::string_view data);

/// Parses, composes and validates. Throws InputError/ParseError.
LoadedSpecs load_specs(const SpecFiles& files);

/// {"decimal": d, "exact": "n/d"} or the string "infinity".
nlohmann::json value_json(const ExtendedValue& value);

CommandResult cmd_validate(const std::vector<std::string>& paths);

struct ValueArgs {
  std::string system;
  SpecFiles specs;
};
CommandResult cmd_value(const ValueArgs& args);

struct SynthArgs {
  SpecFiles specs;
  std::optional<std::string> out;
  /// Accept MDPs that fail the unichain precheck.
  bool force = false;
  /// Reference size (states, edges) to compare the constructed MDP against.
  std::optional<std::pair<std::size_t, std::size_t>> expect_size;
};
CommandResult cmd_synth(const SynthArgs& args);

struct SimulateArgs {
  std::optional<std::string> system;
  /// Record written by synth; its strategy table is replayed on the MDP.
  std::optional<std::string> strategy;
  SpecFiles specs;
  SimConfig config;
  /// Report estimates at horizons 10^4, 10^5, ... up to the configured one.
  bool ladder = false;
};
CommandResult cmd_simulate(const SimulateArgs& args);

struct ExportArgs {
  /// Model file to render; when empty the synthesis MDP of `specs` is rendered.
  std::string path;
  SpecFiles specs;
  bool pruned = false;
  std::optional<std::string> out;
};
CommandResult cmd_export_dot(const ExportArgs& args);

}  // namespace ratiosynth
