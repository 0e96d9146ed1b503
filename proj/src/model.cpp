#include "ratiosynth/model.hpp"

#include "ratiosynth/errors.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ratiosynth {

Rational Distribution::mass() const {
  Rational total = 0;
  for (const auto& [state, p] : entries) total += p;
  return total;
}

CostAutomaton CostAutomaton::trivial(Alphabet inputs, Alphabet outputs) {
  CostAutomaton aut;
  aut.name = "true";
  aut.inputs = std::move(inputs);
  aut.outputs = std::move(outputs);
  aut.states = {"q0"};
  aut.safe = {true};
  aut.delta.assign(aut.letter_count(), 0);
  aut.cost1.assign(aut.letter_count(), 0);
  aut.cost2.assign(aut.letter_count(), 0);
  return aut;
}

namespace {

std::string state_ref(const std::vector<std::string>& names, StateId s) {
  return s < names.size() ? names[s] : "#" + std::to_string(s);
}

}  // namespace

std::vector<Violation> validate(const CostAutomaton& aut) {
  std::vector<Violation> out;
  const std::size_t n = aut.states.size();
  const std::size_t k = aut.letter_count();
  if (n == 0) {
    out.push_back({"nonempty state set", aut.name});
    return out;
  }
  if (aut.initial >= n) out.push_back({"initial state", "initial = #" + std::to_string(aut.initial)});
  if (aut.safe.size() != n) out.push_back({"safe set dimension", aut.name});
  if (aut.delta.size() != n * k || aut.cost1.size() != n * k || aut.cost2.size() != n * k) {
    out.push_back({"transition table dimension", aut.name});
    return out;
  }
  for (StateId q = 0; q < n; ++q) {
    for (LetterId l = 0; l < k; ++l) {
      auto where = [&] {
        return state_ref(aut.states, q) + " on '" +
               aut.inputs.letter_name(static_cast<LetterId>(l / aut.outputs.size())) + " " +
               aut.outputs.letter_name(static_cast<LetterId>(l % aut.outputs.size())) + "'";
      };
      StateId t = aut.next(q, l);
      if (t == kNoState || t >= n) out.push_back({"delta total", where()});
      if (aut.cost1[aut.index(q, l)] < 0 || aut.cost2[aut.index(q, l)] < 0)
        out.push_back({"cost nonnegative", where()});
    }
  }
  return out;
}

std::vector<Violation> validate(const LabeledMDP& mdp, bool environment) {
  std::vector<Violation> out;
  const std::size_t n = mdp.states.size();
  const std::size_t k = mdp.action_count();
  if (n == 0) {
    out.push_back({"nonempty state set", mdp.name});
    return out;
  }
  if (mdp.initial >= n) out.push_back({"initial state", "initial = #" + std::to_string(mdp.initial)});
  if (mdp.label.size() != n) {
    out.push_back({"label defined", mdp.name});
    return out;
  }
  for (StateId s = 0; s < n; ++s)
    if (mdp.label[s] >= mdp.labels.size()) out.push_back({"label defined", state_ref(mdp.states, s)});
  if (mdp.trans.size() != n * k) {
    out.push_back({"transition table dimension", mdp.name});
    return out;
  }
  for (StateId s = 0; s < n; ++s) {
    std::size_t enabled = 0;
    for (LetterId a = 0; a < k; ++a) {
      const Distribution& d = mdp.at(s, a);
      const std::string where = state_ref(mdp.states, s) + " under '" + mdp.actions.letter_name(a) + "'";
      if (d.empty()) {
        if (environment) out.push_back({"action enabled", where});
        continue;
      }
      ++enabled;
      bool targets_ok = true;
      for (const auto& [t, p] : d.entries) {
        if (t >= n) {
          out.push_back({"successor state", where});
          targets_ok = false;
        }
        if (p <= 0 || p > 1) out.push_back({"probability range", where + " -> " + state_ref(mdp.states, t)});
      }
      if (d.mass() != 1) out.push_back({"distribution mass ≠ 1", where + " (mass " + to_string(d.mass()) + ")"});
      if (!targets_ok) continue;
      std::set<LetterId> seen;
      std::set<StateId> targets;
      bool clash = false;
      for (const auto& [t, p] : d.entries) {
        if (p <= 0 || !targets.insert(t).second) continue;
        if (!seen.insert(mdp.label[t]).second) clash = true;
      }
      if (clash) out.push_back({"label-determinism", where});
    }
    if (enabled == 0 && !environment) out.push_back({"enabled action", state_ref(mdp.states, s)});
  }
  return out;
}

std::vector<Violation> validate(const FiniteStateSystem& sys) {
  std::vector<Violation> out;
  const std::size_t n = sys.states.size();
  const std::size_t k = sys.inputs.size();
  if (n == 0) {
    out.push_back({"nonempty state set", sys.name});
    return out;
  }
  if (sys.initial >= n) out.push_back({"initial state", "initial = #" + std::to_string(sys.initial)});
  if (sys.delta.size() != n * k) {
    out.push_back({"transition table dimension", sys.name});
  } else {
    for (StateId s = 0; s < n; ++s)
      for (LetterId l = 0; l < k; ++l)
        if (sys.next(s, l) == kNoState || sys.next(s, l) >= n)
          out.push_back({"delta total", state_ref(sys.states, s) + " on '" + sys.inputs.letter_name(l) + "'"});
  }
  if (sys.output.size() != n) {
    out.push_back({"output defined", sys.name});
  } else {
    for (StateId s = 0; s < n; ++s)
      if (sys.output[s] >= sys.outputs.size()) out.push_back({"output defined", state_ref(sys.states, s)});
  }
  return out;
}

CostAutomaton normalize_automaton(const CostAutomaton& aut) {
  const std::size_t k = aut.letter_count();
  bool closed = true;
  for (StateId q = 0; q < aut.states.size() && closed; ++q) {
    if (aut.safe[q]) continue;
    for (LetterId l = 0; l < k; ++l)
      if (aut.safe[aut.next(q, l)]) {
        closed = false;
        break;
      }
  }
  if (closed) return aut;

  CostAutomaton out = aut;
  const auto sink = static_cast<StateId>(out.states.size());
  std::string sink_name = "q_sink";
  while (std::find(out.states.begin(), out.states.end(), sink_name) != out.states.end()) sink_name += "_";
  out.states.push_back(sink_name);
  out.safe.push_back(false);
  for (StateId q = 0; q < sink; ++q) {
    if (out.safe[q]) continue;
    for (LetterId l = 0; l < k; ++l)
      if (out.safe[out.next(q, l)]) out.delta[out.index(q, l)] = sink;
  }
  out.delta.resize(out.delta.size() + k, sink);
  out.cost1.resize(out.cost1.size() + k, 0);
  out.cost2.resize(out.cost2.size() + k, 0);
  return out;
}

StepResult system_step(const FiniteStateSystem& sys, StateId state, LetterId input) {
  if (state >= sys.states.size()) throw InputError("unknown system state #" + std::to_string(state));
  if (input >= sys.inputs.size()) throw InputError("unknown input letter #" + std::to_string(input));
  StateId next = sys.next(state, input);
  if (next >= sys.states.size()) throw InputError("system transition undefined");
  return {next, sys.output[next]};
}

std::vector<std::pair<LetterId, LetterId>> transduce(const FiniteStateSystem& sys,
                                                     const std::vector<LetterId>& inputs) {
  std::vector<std::pair<LetterId, LetterId>> word;
  word.reserve(inputs.size());
  StateId s = sys.initial;
  LetterId out = sys.output.at(s);
  for (LetterId l : inputs) {
    word.emplace_back(l, out);
    auto step = system_step(sys, s, l);
    s = step.next;
    out = step.output;
  }
  return word;
}

Rational finite_ratio(const std::vector<std::int64_t>& costs1,
                      const std::vector<std::int64_t>& costs2, std::size_t first,
                      std::size_t last) {
  if (first > last || last >= costs1.size() || last >= costs2.size())
    throw std::invalid_argument("finite_ratio window out of range");
  mpz_class num = 0;
  mpz_class den = 1;
  for (std::size_t i = first; i <= last; ++i) {
    num += static_cast<long>(costs1[i]);
    den += static_cast<long>(costs2[i]);
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace ratiosynth
