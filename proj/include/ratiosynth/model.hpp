#pragma once

#include "ratiosynth/alphabet.hpp"
#include "ratiosynth/rational.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace ratiosynth {

using StateId = std::uint32_t;
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();

/// Sparse probability distribution. Model files and MDPs keep entries ordered
/// by state id; product chains keep the order successors were generated in.
struct Distribution {
  std::vector<std::pair<StateId, Rational>> entries;

  bool empty() const { return entries.empty(); }
  Rational mass() const;
  bool operator==(const Distribution&) const = default;
};

/// Deterministic safety automaton over L x A with two cost functions.
/// Tables are indexed by state * letter_count() + letter; a missing
/// transition is kNoState.
struct CostAutomaton {
  std::string name;
  Alphabet inputs;
  Alphabet outputs;
  std::vector<std::string> states;
  StateId initial = 0;
  std::vector<bool> safe;
  std::vector<StateId> delta;
  std::vector<std::int64_t> cost1;
  std::vector<std::int64_t> cost2;

  std::size_t letter_count() const { return inputs.size() * outputs.size(); }
  std::size_t index(StateId q, LetterId letter) const { return q * letter_count() + letter; }
  StateId next(StateId q, LetterId letter) const { return delta[index(q, letter)]; }

  /// Automaton with every state safe, one state and all costs zero.
  static CostAutomaton trivial(Alphabet inputs, Alphabet outputs);

  bool operator==(const CostAutomaton&) const = default;
};

/// Environment model: MDP over actions A whose states carry letters of L.
/// trans[s * |A| + a] is empty when a is not enabled in s.
struct LabeledMDP {
  std::string name;
  Alphabet labels;
  Alphabet actions;
  std::vector<std::string> states;
  StateId initial = 0;
  std::vector<LetterId> label;
  std::vector<Distribution> trans;

  std::size_t action_count() const { return actions.size(); }
  const Distribution& at(StateId s, LetterId a) const { return trans[s * action_count() + a]; }
  bool enabled(StateId s, LetterId a) const { return !at(s, a).empty(); }

  bool operator==(const LabeledMDP&) const = default;
};

/// Moore machine: input-driven transitions plus one output letter per state.
struct FiniteStateSystem {
  std::string name;
  Alphabet inputs;
  Alphabet outputs;
  std::vector<std::string> states;
  StateId initial = 0;
  std::vector<StateId> delta;  // state * |L| + input
  std::vector<LetterId> output;

  StateId next(StateId s, LetterId input) const { return delta[s * inputs.size() + input]; }

  bool operator==(const FiniteStateSystem&) const = default;
};

/// Pure memoryless strategy: one action letter per MDP state.
struct Strategy {
  std::vector<LetterId> choice;
  bool operator==(const Strategy&) const = default;
};

struct Violation {
  std::string invariant;
  std::string element;
};

std::vector<Violation> validate(const CostAutomaton& aut);
/// `environment` additionally requires every action to be enabled everywhere.
std::vector<Violation> validate(const LabeledMDP& mdp, bool environment = true);
std::vector<Violation> validate(const FiniteStateSystem& sys);

/// Makes Q \ F closed under delta by routing transitions that leave an unsafe
/// state into a fresh unsafe sink (added at most once, self-loops cost (0,0)).
/// Redirected transitions keep their original costs. Returns the input
/// unchanged when it is already closed.
CostAutomaton normalize_automaton(const CostAutomaton& aut);

struct StepResult {
  StateId next;
  LetterId output;
};

/// One transducer step: next = delta(state, input), output = tau(next).
/// Throws InputError on an unknown state or letter.
StepResult system_step(const FiniteStateSystem& sys, StateId state, LetterId input);

/// Joint input/output word produced on an input word: (w_i, tau(delta*(s0, w_0..w_{i-1}))).
std::vector<std::pair<LetterId, LetterId>> transduce(const FiniteStateSystem& sys,
                                                     const std::vector<LetterId>& inputs);

/// (sum_{i=first..last} c1_i) / (1 + sum_{i=first..last} c2_i), exactly.
Rational finite_ratio(const std::vector<std::int64_t>& costs1,
                      const std::vector<std::int64_t>& costs2, std::size_t first,
                      std::size_t last);

}  // namespace ratiosynth
