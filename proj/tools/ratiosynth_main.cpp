// Command-line front end: validate, value, synth, simulate, export-dot.
#include "ratiosynth/commands.hpp"
#include "ratiosynth/model_io.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace ratiosynth;

namespace {

void add_specs(CLI::App* cmd, SpecFiles& specs, bool quant_required) {
  cmd->add_option("--qual", specs.qual, "Qualitative (safety) automaton; repeat to compose")->check(CLI::ExistingFile);
  auto* q = cmd->add_option("--quant", specs.quant, "Quantitative automaton; repeat to compose")
                ->check(CLI::ExistingFile);
  auto* e = cmd->add_option("--env", specs.env, "Environment MDP; repeat to compose")->check(CLI::ExistingFile);
  if (quant_required) {
    q->required();
    e->required();
  }
}

std::pair<std::size_t, std::size_t> parse_size(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--expect-size", "expected STATES,EDGES");
  return {std::stoul(text.substr(0, comma)), std::stoul(text.substr(comma + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesis and evaluation of systems for ratio objectives under probabilistic environments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string record_path;
  app.add_option("--record", record_path, "Also write the JSON record to this file");

  std::vector<std::string> validate_paths;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate model files");
  validate_cmd->add_option("files", validate_paths, "Model files")->required();

  ValueArgs value_args;
  auto* value_cmd = app.add_subcommand("value", "Value of a system for the given automata and environment");
  value_cmd->add_option("--system", value_args.system, "System file")->required()->check(CLI::ExistingFile);
  add_specs(value_cmd, value_args.specs, true);

  SynthArgs synth_args;
  std::string out_path;
  std::string expect_size;
  auto* synth_cmd = app.add_subcommand("synth", "Synthesize an optimal system");
  add_specs(synth_cmd, synth_args.specs, true);
  synth_cmd->add_option("--out", out_path, "Write the synthesized system here");
  synth_cmd->add_flag("--force", synth_args.force, "Proceed when the MDP may be multichain");
  synth_cmd->add_option("--expect-size", expect_size, "Reference MDP size STATES,EDGES to compare against");

  SimulateArgs sim_args;
  std::string sim_system;
  std::string sim_strategy;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo estimate of a system or synthesized strategy");
  sim_cmd->add_option("--system", sim_system, "System file")->check(CLI::ExistingFile);
  sim_cmd->add_option("--strategy", sim_strategy, "Record written by synth")->check(CLI::ExistingFile);
  add_specs(sim_cmd, sim_args.specs, true);
  sim_cmd->add_option("--seed", sim_args.config.seed, "Random seed")->capture_default_str();
  sim_cmd->add_option("--horizon", sim_args.config.horizon, "Steps per run")->capture_default_str();
  sim_cmd->add_option("--burnin", sim_args.config.burn_in, "Discarded prefix")->capture_default_str();
  sim_cmd->add_option("--runs", sim_args.config.runs, "Independent runs")->capture_default_str();
  sim_cmd->add_option("--threads", sim_args.config.threads, "Worker threads (0: all cores)");
  sim_cmd->add_flag("--ladder", sim_args.ladder, "Also report estimates at increasing horizons");

  ExportArgs export_args;
  std::string export_out;
  auto* export_cmd = app.add_subcommand("export-dot", "Render a model or the synthesis MDP as a dot graph");
  export_cmd->add_option("file", export_args.path, "Model file (omit to render the synthesis MDP)");
  add_specs(export_cmd, export_args.specs, false);
  export_cmd->add_flag("--pruned", export_args.pruned, "Render the MDP after removing unsafe states");
  export_cmd->add_option("--out", export_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
    if (!expect_size.empty()) synth_args.expect_size = parse_size(expect_size);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  CommandResult result;
  bool print_record = true;
  if (*validate_cmd) {
    result = cmd_validate(validate_paths);
    for (const auto& m : result.messages) std::cout << m << '\n';
    print_record = false;
  } else if (*value_cmd) {
    result = cmd_value(value_args);
  } else if (*synth_cmd) {
    if (!out_path.empty()) synth_args.out = out_path;
    result = cmd_synth(synth_args);
  } else if (*sim_cmd) {
    if (!sim_system.empty()) sim_args.system = sim_system;
    if (!sim_strategy.empty()) sim_args.strategy = sim_strategy;
    result = cmd_simulate(sim_args);
  } else if (*export_cmd) {
    if (!export_out.empty()) export_args.out = export_out;
    result = cmd_export_dot(export_args);
    if (!export_args.out && result.exit_code == kExitOk) {
      for (const auto& m : result.messages) std::cout << m;
      print_record = false;
    }
  }
  if (print_record) {
    std::cout << result.record.dump(2) << '\n';
    if (result.exit_code != kExitOk)
      for (const auto& m : result.messages) std::cerr << m << '\n';
  }
  if (!record_path.empty()) {
    try {
      write_file_atomic(record_path, result.record.dump(2) + "\n");
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitInvalid;
    }
  }
  return result.exit_code;
}
