#include "ratiosynth/commands.hpp"

#include "ratiosynth/end_components.hpp"
#include "ratiosynth/errors.hpp"
#include "ratiosynth/mc_analysis.hpp"
#include "ratiosynth/model_io.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

namespace ratiosynth {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string describe_violations(const std::string& path, const std::vector<Violation>& vs,
                                std::vector<std::string>& messages) {
  for (const auto& v : vs) messages.push_back(path + ": " + v.invariant + ": " + v.element);
  return vs.empty() ? "" : vs.front().invariant;
}

json input_entry(const std::string& role, const std::string& path, const std::string& content) {
  return json{{"role", role}, {"path", path}, {"fnv1a64", fnv1a64_hex(content)}};
}

template <typename T>
std::vector<T> load_all(const std::vector<std::string>& paths, const char* role, json& inputs,
                        T (*parse)(std::string_view)) {
  std::vector<T> out;
  for (const auto& p : paths) {
    const std::string text = read_file(p);
    inputs.push_back(input_entry(role, p, text));
    try {
      out.push_back(parse(text));
    } catch (const ParseError& e) {
      throw ParseError(p + ": " + e.what(), e.line(), e.column());
    } catch (const InputError& e) {
      throw InputError(p + ": " + e.what());
    }
  }
  return out;
}

void require_valid(const std::vector<Violation>& vs, const std::string& what) {
  if (vs.empty()) return;
  std::string msg = what + " is invalid:";
  for (const auto& v : vs) msg += " [" + v.invariant + ": " + v.element + "]";
  throw InputError(msg);
}

json chain_structure_json(const ChainStructure& s) {
  json classes = json::array();
  for (const auto& c : s.recurrent_classes) classes.push_back(c.size());
  return json{{"recurrent_classes", s.recurrent_classes.size()},
              {"class_sizes", classes},
              {"transient_states", s.transient.size()}};
}

template <typename F>
CommandResult guarded(const char* command, F&& body) {
  CommandResult result;
  result.record = json{{"command", command}};
  auto fail = [&](int code, const char* kind, const std::string& what) {
    result.exit_code = code;
    result.record["error"] = json{{"kind", kind}, {"message", what}};
    result.messages.push_back(std::string(kind) + ": " + what);
  };
  try {
    body(result);
  } catch (const ParseError& e) {
    fail(kExitInvalid, "parse", e.what());
  } catch (const InputError& e) {
    fail(kExitInvalid, "input", e.what());
  } catch (const MultichainError& e) {
    fail(kExitMultichain, "multichain", e.what());
    result.record["error"]["structure"] = chain_structure_json(e.structure());
  } catch (const MultichainSuspect& e) {
    fail(kExitMultichain, "multichain-suspect", e.what());
    result.record["error"]["bottom_components"] = e.bottom_components();
  } catch (const NumericalError& e) {
    fail(kExitNumerical, "numerical", e.what());
  } catch (const ConsistencyError& e) {
    fail(kExitNumerical, "consistency", e.what());
  }
  return result;
}

json size_json(const SynthesisMDP& mdp) { return json{{"states", mdp.size()}, {"edges", mdp.edge_count()}}; }

FiniteStateSystem load_system(const std::string& path, json& inputs) {
  const std::string text = read_file(path);
  inputs.push_back(input_entry("system", path, text));
  FiniteStateSystem sys;
  try {
    sys = parse_system(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line(), e.column());
  }
  require_valid(validate(sys), path);
  return sys;
}

SynthesisMDP pruned_or_throw(const LoadedSpecs& specs, std::string* reason) {
  auto pruned = prune_unsafe(build_synthesis_mdp(specs.qual, specs.quant, specs.env));
  if (auto* u = std::get_if<Unrealizable>(&pruned)) {
    if (reason) *reason = u->reason;
    throw InputError("instance is unrealizable: " + u->reason);
  }
  return std::get<SynthesisMDP>(std::move(pruned));
}

json estimate_json(const SimEstimate& est, const std::vector<std::string>& names) {
  json visits = json::object();
  for (std::size_t i = 0; i < names.size() && i < est.visit_fractions.size(); ++i)
    if (est.visit_fractions[i] > 0) visits[names[i]] = est.visit_fractions[i];
  return json{{"mean", est.mean},
              {"stderr", est.std_error},
              {"sample_sd", est.sample_sd},
              {"per_run", est.per_run},
              {"visit_fractions", visits}};
}

}  // namespace

std::string fnv1a64_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xF];
  return out;
}

LoadedSpecs load_specs(const SpecFiles& files) {
  LoadedSpecs specs;
  if (files.quant.empty()) throw InputError("at least one --quant automaton is required");
  if (files.env.empty()) throw InputError("at least one --env model is required");
  auto quals = load_all<CostAutomaton>(files.qual, "qual", specs.inputs, parse_automaton);
  auto quants = load_all<CostAutomaton>(files.quant, "quant", specs.inputs, parse_automaton);
  auto envs = load_all<LabeledMDP>(files.env, "env", specs.inputs, parse_mdp);
  for (std::size_t i = 0; i < quals.size(); ++i) require_valid(validate(quals[i]), files.qual[i]);
  for (std::size_t i = 0; i < quants.size(); ++i) require_valid(validate(quants[i]), files.quant[i]);
  for (std::size_t i = 0; i < envs.size(); ++i) require_valid(validate(envs[i], true), files.env[i]);
  specs.env = compose_environments(envs);
  specs.quant = compose_automata(quants);
  specs.qual = quals.empty() ? CostAutomaton::trivial(specs.env.labels, specs.env.actions) : compose_automata(quals);
  return specs;
}

json value_json(const ExtendedValue& value) {
  if (value.is_infinite()) return "infinity";
  json out{{"decimal", value.to_double()}};
  if (value.has_exact()) out["exact"] = value.to_string();
  return out;
}

CommandResult cmd_validate(const std::vector<std::string>& paths) {
  return guarded("validate", [&](CommandResult& r) {
    json files = json::array();
    bool ok = true;
    for (const auto& path : paths) {
      json entry{{"path", path}};
      try {
        const std::string text = read_file(path);
        entry["fnv1a64"] = fnv1a64_hex(text);
        const AnyModel model = parse_model(text);
        std::vector<Violation> vs = std::visit(
            [](const auto& m) {
              using T = std::decay_t<decltype(m)>;
              if constexpr (std::is_same_v<T, LabeledMDP>) return validate(m, true);
              else return validate(m);
            },
            model);
        entry["violations"] = json::array();
        for (const auto& v : vs) entry["violations"].push_back({{"invariant", v.invariant}, {"element", v.element}});
        describe_violations(path, vs, r.messages);
        if (!vs.empty()) ok = false;
        else r.messages.push_back(path + ": ok");
      } catch (const ParseError& e) {
        ok = false;
        entry["parse_error"] = {{"line", e.line()}, {"column", e.column()}, {"message", e.what()}};
        r.messages.push_back(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                             e.what());
      } catch (const InputError& e) {
        ok = false;
        entry["error"] = e.what();
        r.messages.push_back(path + ": " + e.what());
      }
      files.push_back(std::move(entry));
    }
    r.record["files"] = std::move(files);
    r.record["valid"] = ok;
    r.exit_code = ok ? kExitOk : kExitInvalid;
  });
}

CommandResult cmd_value(const ValueArgs& args) {
  return guarded("value", [&](CommandResult& r) {
    const auto start = Clock::now();
    LoadedSpecs specs = load_specs(args.specs);
    const FiniteStateSystem sys = load_system(args.system, specs.inputs);
    r.record["inputs"] = specs.inputs;
    const AnalysisOptions options = AnalysisOptions::from_environment();
    const SystemValueReport report = evaluate_system(sys, specs.qual, specs.quant, specs.env, options);
    r.record["satisfied"] = report.satisfaction.satisfied;
    r.record["satisfaction_chain_states"] = report.satisfaction.chain_states;
    r.record["value"] = value_json(report.value);
    r.record["warnings"] = json::array();
    if (report.satisfaction.multichain)
      r.record["warnings"].push_back("satisfaction chain is multichain; zero test applied per recurrent class");
    if (report.satisfaction.satisfied) {
      r.record["value_chain_states"] = report.value_chain_states;
      r.record["solver_mode"] = to_string(report.mode);
    } else {
      r.record["warnings"].push_back("the system reaches an unsafe state of the qualitative automaton");
    }
    r.record["timings_ms"] = {{"total", ms_since(start)}};
    r.messages.push_back("value " + report.value.to_string());
  });
}

CommandResult cmd_synth(const SynthArgs& args) {
  return guarded("synth", [&](CommandResult& r) {
    const auto start = Clock::now();
    const LoadedSpecs specs = load_specs(args.specs);
    r.record["inputs"] = specs.inputs;
    json warnings = json::array();

    auto t = Clock::now();
    const SynthesisMDP mdp = build_synthesis_mdp(specs.qual, specs.quant, specs.env);
    const double build_ms = ms_since(t);
    json size = size_json(mdp);

    t = Clock::now();
    auto pruned_or = prune_unsafe(mdp);
    const double prune_ms = ms_since(t);
    if (auto* u = std::get_if<Unrealizable>(&pruned_or)) {
      r.record["mdp"] = size;
      r.record["realizable"] = false;
      r.record["value"] = "infinity";
      r.record["reason"] = u->reason;
      r.exit_code = kExitUnrealizable;
      r.messages.push_back("unrealizable: " + u->reason);
      return;
    }
    const SynthesisMDP& pruned = std::get<SynthesisMDP>(pruned_or);
    size["pruned_states"] = pruned.size();
    size["pruned_edges"] = pruned.edge_count();

    if (args.expect_size) {
      const auto [es, ee] = *args.expect_size;
      size["expected"] = {{"states", es}, {"edges", ee}};
      const bool match = (mdp.size() == es && mdp.edge_count() == ee) ||
                         (pruned.size() == es && pruned.edge_count() == ee);
      size["matches_expected"] = match;
      if (!match) {
        std::ostringstream os;
        os << "synthesis MDP has " << mdp.size() << " states / " << mdp.edge_count() << " edges ("
           << pruned.size() << " / " << pruned.edge_count() << " after removing unsafe states), expected " << es
           << " / " << ee << ". The size depends on how an output is paired with environment labels: outputs "
           << "here are read with the label of the environment state entered next (Moore semantics)";
        // Pairing each output with the current label instead is the other natural construction.
        const auto alt = prune_unsafe(build_synthesis_mdp(specs.qual, specs.quant, specs.env, LabelTiming::Current));
        if (const auto* a = std::get_if<SynthesisMDP>(&alt)) {
          os << "; pairing outputs with the current label gives " << a->size() << " states / " << a->edge_count()
             << " edges after removing unsafe states";
          size["current_label_pairing"] = {{"pruned_states", a->size()}, {"pruned_edges", a->edge_count()}};
        }
        warnings.push_back(os.str());
      }
    }
    r.record["mdp"] = size;
    r.record["realizable"] = true;

    t = Clock::now();
    LfpOptions options;
    options.allow_multichain = args.force;
    const LfpResult lfp = solve_lfp(pruned, options);
    const double solve_ms = ms_since(t);
    for (const auto& w : lfp.warnings) warnings.push_back(w);

    const ExtractedSystem extracted = extract_system(pruned, lfp.strategy);
    for (const auto& n : extracted.notes) warnings.push_back(n);

    // Independent check: value of the extracted system through the
    // system-value pipeline.
    t = Clock::now();
    const SystemValueReport check =
        evaluate_system(extracted.system, specs.qual, specs.quant, specs.env, options.analysis);
    const double check_ms = ms_since(t);
    if (!check.satisfaction.satisfied)
      throw ConsistencyError("synthesized system violates the qualitative automaton");
    if (lfp.value.is_infinite() != check.value.is_infinite() ||
        (lfp.value.is_finite() &&
         std::abs(lfp.value.to_double() - check.value.to_double()) > 1e-6 * std::max(1.0, lfp.value.to_double())))
      throw ConsistencyError("synthesized value " + lfp.value.to_string() + " differs from system value " +
                             check.value.to_string());

    r.record["value"] = value_json(lfp.value);
    r.record["system_value"] = value_json(check.value);
    r.record["solver_mode"] = to_string(lfp.mode);
    r.record["path"] = lfp.path;
    r.record["initial_point"] = lfp.initial_path;
    r.record["iterations"] = {{"count", lfp.iterations}, {"history", lfp.history}, {"lp_optima", lfp.lp_optima}};
    json table = json::array();
    for (StateId s = 0; s < pruned.size(); ++s)
      table.push_back({{"state", pruned.names[s]}, {"action", pruned.actions.letter_name(lfp.strategy.choice[s])}});
    r.record["strategy"] = std::move(table);
    r.record["system"] = {{"states", extracted.system.states.size()}};
    if (args.out) {
      write_file_atomic(*args.out, print_model(extracted.system));
      r.record["system"]["path"] = *args.out;
    }
    r.record["warnings"] = std::move(warnings);
    r.record["timings_ms"] = {{"build", build_ms}, {"prune", prune_ms}, {"solve", solve_ms},
                              {"check", check_ms}, {"total", ms_since(start)}};
    r.messages.push_back("value " + lfp.value.to_string());
  });
}

CommandResult cmd_simulate(const SimulateArgs& args) {
  return guarded("simulate", [&](CommandResult& r) {
    const auto start = Clock::now();
    if (args.system.has_value() == args.strategy.has_value())
      throw InputError("give exactly one of --system and --strategy");
    args.config.check();
    LoadedSpecs specs = load_specs(args.specs);
    json warnings = json::array();
    CostMarkovChain chain;
    if (args.system) {
      const FiniteStateSystem sys = load_system(*args.system, specs.inputs);
      if (unsafe_reachable(sys, specs.qual, specs.env))
        warnings.push_back("the system reaches an unsafe state of the qualitative automaton");
      chain = build_value_chain(sys, specs.quant, specs.env);
    } else {
      const std::string text = read_file(*args.strategy);
      specs.inputs.push_back(input_entry("strategy", *args.strategy, text));
      json rec;
      try {
        rec = json::parse(text);
      } catch (const json::exception& e) {
        throw InputError(*args.strategy + ": " + e.what());
      }
      if (!rec.contains("strategy") || !rec["strategy"].is_array())
        throw InputError(*args.strategy + ": no strategy table");
      const SynthesisMDP mdp = pruned_or_throw(specs, nullptr);
      std::map<std::string, StateId> ids;
      for (StateId s = 0; s < mdp.size(); ++s) ids.emplace(mdp.names[s], s);
      Strategy strat;
      strat.choice.assign(mdp.size(), kNoLetter);
      for (const auto& row : rec["strategy"]) {
        const std::string state = row.value("state", "");
        const std::string action = row.value("action", "");
        const auto it = ids.find(state);
        if (it == ids.end()) throw InputError("strategy names unknown MDP state '" + state + "'");
        const auto letter = mdp.actions.find_letter(action);
        if (!letter) throw InputError("strategy names unknown action '" + action + "'");
        strat.choice[it->second] = *letter;
      }
      for (StateId s = 0; s < mdp.size(); ++s)
        if (strat.choice[s] == kNoLetter) throw InputError("strategy does not cover state " + mdp.names[s]);
      if (rec.contains("inputs")) {
        std::map<std::string, std::string> old;
        for (const auto& in : rec["inputs"]) old[in.value("path", "")] = in.value("fnv1a64", "");
        for (const auto& in : specs.inputs)
          if (old.count(in["path"]) && old[in["path"]] != in["fnv1a64"])
            warnings.push_back("input " + in["path"].get<std::string>() + " changed since the strategy was synthesized");
      }
      chain = induced_chain(mdp, strat);
    }
    r.record["inputs"] = specs.inputs;
    r.record["config"] = {{"seed", args.config.seed},
                          {"horizon", args.config.horizon},
                          {"burn_in", args.config.burn_in},
                          {"runs", args.config.runs}};
    r.record["chain_states"] = chain.size();
    try {
      r.record["analytic_value"] = value_json(expected_ratio(chain, AnalysisOptions::from_environment()));
    } catch (const MultichainError& e) {
      r.record["analytic_value"] = nullptr;
      warnings.push_back(std::string("no analytic value: ") + e.what());
    }
    const SimEstimate est = simulate_chain(chain, args.config);
    r.record["estimate"] = estimate_json(est, chain.names);
    const bool infinite = r.record["analytic_value"].is_string();
    if (args.ladder || infinite) {
      std::vector<std::uint64_t> horizons;
      for (std::uint64_t h = 10'000; h < args.config.horizon; h *= 10) horizons.push_back(h);
      horizons.push_back(args.config.horizon);
      const auto ladder = horizon_ladder(chain, args.config, horizons);
      json rows = json::array();
      for (const auto& p : ladder) rows.push_back({{"horizon", p.horizon}, {"mean", p.mean}, {"stderr", p.std_error}});
      r.record["ladder"] = {{"points", rows}, {"grows", ladder_grows(ladder)}};
    }
    r.record["warnings"] = std::move(warnings);
    r.record["timings_ms"] = {{"total", ms_since(start)}};
    std::ostringstream os;
    os << "mean " << est.mean << " stderr " << est.std_error;
    r.messages.push_back(os.str());
  });
}

CommandResult cmd_export_dot(const ExportArgs& args) {
  return guarded("export-dot", [&](CommandResult& r) {
    std::string dot;
    if (!args.path.empty()) {
      const std::string text = read_file(args.path);
      r.record["inputs"] = json::array({input_entry("model", args.path, text)});
      AnyModel model;
      try {
        model = parse_model(text);
      } catch (const ParseError& e) {
        throw ParseError(args.path + ": " + e.what(), e.line(), e.column());
      }
      dot = std::visit([](const auto& m) { return to_dot(m); }, model);
      r.record["nodes"] = std::visit([](const auto& m) { return m.states.size(); }, model);
    } else {
      const LoadedSpecs specs = load_specs(args.specs);
      r.record["inputs"] = specs.inputs;
      SynthesisMDP mdp = build_synthesis_mdp(specs.qual, specs.quant, specs.env);
      if (args.pruned) mdp = pruned_or_throw(specs, nullptr);
      dot = to_dot(mdp);
      r.record["nodes"] = mdp.size();
    }
    if (args.out) {
      write_file_atomic(*args.out, dot);
      r.record["out"] = *args.out;
    } else {
      r.messages.push_back(dot);
    }
  });
}

}  // namespace ratiosynth
