#pragma once

#include "ratiosynth/model.hpp"

#include <string>
#include <variant>
#include <vector>

namespace ratiosynth {

/// Markov chain with per-state expected costs. State 0 is the initial
/// state; only states reachable from it are present. `origin` records the
/// component states each chain state was built from.
struct CostMarkovChain {
  std::vector<std::string> names;
  std::vector<std::vector<StateId>> origin;
  StateId initial = 0;
  std::vector<Distribution> trans;
  std::vector<Rational> cost1;
  std::vector<Rational> cost2;

  std::size_t size() const { return trans.size(); }
};

/// Product of a qualitative automaton, a quantitative automaton and the
/// environment. Tables are indexed by state * action_count() + action; an
/// empty distribution marks a disabled action.
struct SynthesisMDP {
  struct Tag {
    StateId qual;
    StateId quant;
    StateId env;
    bool operator==(const Tag&) const = default;
  };

  Alphabet labels;
  Alphabet actions;
  std::vector<std::string> names;
  std::vector<Tag> tags;
  std::vector<LetterId> label;
  std::vector<bool> unsafe;
  StateId initial = 0;
  std::vector<Distribution> trans;
  std::vector<Rational> cost1;
  std::vector<Rational> cost2;

  std::size_t size() const { return names.size(); }
  std::size_t action_count() const { return actions.size(); }
  std::size_t index(StateId s, LetterId a) const { return s * action_count() + a; }
  const Distribution& at(StateId s, LetterId a) const { return trans[index(s, a)]; }
  bool enabled(StateId s, LetterId a) const { return !at(s, a).empty(); }
  std::vector<LetterId> enabled_actions(StateId s) const;
  /// Number of (state, enabled action, successor) triples.
  std::size_t edge_count() const;
};

/// Which environment label is paired with an output in the joint letter.
/// Successor: the output at step i is read together with the label of the
/// environment state entered next (the transducer semantics used throughout).
/// Current: the label of the environment state the output is chosen in.
enum class LabelTiming { Successor, Current };

/// Product S x A x M with cost (0,1) on safe and (1,0) on unsafe automaton states.
CostMarkovChain build_satisfaction_chain(const FiniteStateSystem& sys, const CostAutomaton& qual,
                                         const LabeledMDP& env);

/// Product S x B x M with expected automaton costs per state.
CostMarkovChain build_value_chain(const FiniteStateSystem& sys, const CostAutomaton& quant,
                                  const LabeledMDP& env);

SynthesisMDP build_synthesis_mdp(const CostAutomaton& qual, const CostAutomaton& quant,
                                 const LabeledMDP& env,
                                 LabelTiming timing = LabelTiming::Successor);

struct Unrealizable {
  std::string reason;
};

/// Restricts the MDP to the greatest set of safe states in which some action
/// keeps every positive-probability successor inside the set, then drops
/// states no longer reachable from the initial state.
std::variant<SynthesisMDP, Unrealizable> prune_unsafe(const SynthesisMDP& mdp);

struct ExtractedSystem {
  FiniteStateSystem system;
  /// MDP state behind each system state.
  std::vector<StateId> mdp_state;
  /// Inputs the environment can never produce in a state; those transitions
  /// were completed with self-loops.
  std::vector<std::string> notes;
};

/// Moore machine following `strat` on the states reachable under it.
ExtractedSystem extract_system(const SynthesisMDP& mdp, const Strategy& strat);

/// Chain induced by `strat` on the states reachable from the initial state.
/// origin[i] = {mdp state}; successor order follows the MDP distributions.
CostMarkovChain induced_chain(const SynthesisMDP& mdp, const Strategy& strat);

/// Synchronous product of automata over the union of their variables; a
/// product state is safe when all components are, and costs are added.
CostAutomaton compose_automata(const std::vector<CostAutomaton>& parts);

/// Independent product of environment models with disjoint variables:
/// joint labels and actions are tuples, probabilities multiply.
LabeledMDP compose_environments(const std::vector<LabeledMDP>& parts);

}  // namespace ratiosynth
