#include "ratiosynth/product.hpp"

#include "ratiosynth/errors.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>

namespace ratiosynth {

std::vector<LetterId> SynthesisMDP::enabled_actions(StateId s) const {
  std::vector<LetterId> out;
  for (LetterId a = 0; a < action_count(); ++a)
    if (enabled(s, a)) out.push_back(a);
  return out;
}

std::size_t SynthesisMDP::edge_count() const {
  std::size_t edges = 0;
  for (const auto& d : trans) edges += d.entries.size();
  return edges;
}

namespace {

Projection project_or_throw(const Alphabet& from, const Alphabet& onto, const std::string& what) {
  if (!Projection::possible(from, onto)) throw InputError("alphabet mismatch: " + what);
  return Projection(from, onto);
}

// Letter of an automaton for the joint letter (l, a) of the surrounding product.
struct AutomatonView {
  const CostAutomaton& aut;
  Projection inputs;
  Projection outputs;

  AutomatonView(const CostAutomaton& a, const Alphabet& L, const Alphabet& A, const std::string& role)
      : aut(a),
        inputs(project_or_throw(L, a.inputs, role + " inputs")),
        outputs(project_or_throw(A, a.outputs, role + " outputs")) {}

  LetterId letter(LetterId l, LetterId act) const {
    return joint_letter(inputs(l), outputs(act), aut.outputs.size());
  }
};

template <std::size_t N>
struct Explorer {
  using Key = std::array<StateId, N>;
  std::map<Key, StateId> ids;
  std::vector<Key> keys;

  StateId intern(const Key& key) {
    auto [it, inserted] = ids.emplace(key, static_cast<StateId>(keys.size()));
    if (inserted) keys.push_back(key);
    return it->second;
  }
};

std::string tuple_name(std::initializer_list<const std::string*> parts) {
  std::string out = "(";
  bool first = true;
  for (const auto* p : parts) {
    if (!first) out += ",";
    out += *p;
    first = false;
  }
  return out + ")";
}

enum class CostRule { Safety, Copy };

CostMarkovChain build_system_chain(const FiniteStateSystem& sys, const CostAutomaton& raw,
                                   const LabeledMDP& env, CostRule rule) {
  if (sys.states.empty() || raw.states.empty() || env.states.empty())
    throw InputError("empty model in product construction");
  const CostAutomaton aut = rule == CostRule::Safety ? normalize_automaton(raw) : raw;
  const Alphabet& L = env.labels;
  const Alphabet& A = sys.outputs;
  Projection sys_inputs = project_or_throw(L, sys.inputs, "environment labels vs system inputs");
  Projection env_actions = project_or_throw(A, env.actions, "system outputs vs environment actions");
  AutomatonView view(aut, L, A, "automaton");

  CostMarkovChain chain;
  Explorer<3> ex;
  ex.intern({sys.initial, aut.initial, env.initial});
  for (std::size_t i = 0; i < ex.keys.size(); ++i) {
    const auto [s, q, m] = ex.keys[i];
    const LetterId act = sys.output[s];
    const Distribution& d = env.at(m, env_actions(act));
    if (d.empty()) throw InputError("environment action not enabled in " + env.states[m]);
    Distribution out;
    Rational c1 = 0;
    Rational c2 = 0;
    for (const auto& [m2, p] : d.entries) {
      const LetterId l = env.label[m2];
      const LetterId letter = view.letter(l, act);
      const StateId s2 = sys.next(s, sys_inputs(l));
      const StateId q2 = aut.next(q, letter);
      if (s2 == kNoState || q2 == kNoState) throw InputError("transition function is not total");
      out.entries.emplace_back(ex.intern({s2, q2, m2}), p);
      if (rule == CostRule::Copy) {
        c1 += p * Rational(static_cast<long>(aut.cost1[aut.index(q, letter)]));
        c2 += p * Rational(static_cast<long>(aut.cost2[aut.index(q, letter)]));
      }
    }
    if (rule == CostRule::Safety) {
      c1 = aut.safe[q] ? 0 : 1;
      c2 = aut.safe[q] ? 1 : 0;
    }
    chain.names.push_back(tuple_name({&sys.states[s], &aut.states[q], &env.states[m]}));
    chain.origin.push_back({s, q, m});
    chain.trans.push_back(std::move(out));
    chain.cost1.push_back(c1);
    chain.cost2.push_back(c2);
  }
  return chain;
}

}  // namespace

CostMarkovChain build_satisfaction_chain(const FiniteStateSystem& sys, const CostAutomaton& qual,
                                         const LabeledMDP& env) {
  return build_system_chain(sys, qual, env, CostRule::Safety);
}

CostMarkovChain build_value_chain(const FiniteStateSystem& sys, const CostAutomaton& quant,
                                  const LabeledMDP& env) {
  return build_system_chain(sys, quant, env, CostRule::Copy);
}

SynthesisMDP build_synthesis_mdp(const CostAutomaton& raw_qual, const CostAutomaton& quant,
                                 const LabeledMDP& env, LabelTiming timing) {
  if (raw_qual.states.empty() || quant.states.empty() || env.states.empty())
    throw InputError("empty model in product construction");
  const CostAutomaton qual = normalize_automaton(raw_qual);
  SynthesisMDP mdp;
  mdp.labels = env.labels;
  try {
    mdp.actions = merge_alphabets({env.actions, qual.outputs, quant.outputs});
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("alphabet mismatch: ") + e.what());
  }
  const Alphabet& L = mdp.labels;
  const Alphabet& A = mdp.actions;
  Projection env_actions = project_or_throw(A, env.actions, "outputs vs environment actions");
  AutomatonView qv(qual, L, A, "qualitative automaton");
  AutomatonView bv(quant, L, A, "quantitative automaton");
  const std::size_t k = A.size();

  Explorer<3> ex;
  ex.intern({qual.initial, quant.initial, env.initial});
  for (std::size_t i = 0; i < ex.keys.size(); ++i) {
    const auto [q, b, m] = ex.keys[i];
    mdp.names.push_back(tuple_name({&qual.states[q], &quant.states[b], &env.states[m]}));
    mdp.tags.push_back({q, b, m});
    mdp.label.push_back(env.label[m]);
    mdp.unsafe.push_back(!qual.safe[q]);
    for (LetterId act = 0; act < k; ++act) {
      const Distribution& d = env.at(m, env_actions(act));
      Distribution out;
      Rational c1 = 0;
      Rational c2 = 0;
      for (const auto& [m2, p] : d.entries) {
        const LetterId l = timing == LabelTiming::Successor ? env.label[m2] : env.label[m];
        const LetterId ql = qv.letter(l, act);
        const LetterId bl = bv.letter(l, act);
        const StateId q2 = qual.next(q, ql);
        const StateId b2 = quant.next(b, bl);
        if (q2 == kNoState || b2 == kNoState) throw InputError("transition function is not total");
        out.entries.emplace_back(ex.intern({q2, b2, m2}), p);
        c1 += p * Rational(static_cast<long>(quant.cost1[quant.index(b, bl)]));
        c2 += p * Rational(static_cast<long>(quant.cost2[quant.index(b, bl)]));
      }
      mdp.trans.push_back(std::move(out));
      mdp.cost1.push_back(c1);
      mdp.cost2.push_back(c2);
    }
  }
  return mdp;
}

namespace {

// Copies the states in `keep` (in the given order) with the allowed actions.
SynthesisMDP restrict_mdp(const SynthesisMDP& mdp, const std::vector<StateId>& keep,
                          const std::vector<bool>& allowed) {
  std::vector<StateId> remap(mdp.size(), kNoState);
  for (std::size_t i = 0; i < keep.size(); ++i) remap[keep[i]] = static_cast<StateId>(i);
  SynthesisMDP out;
  out.labels = mdp.labels;
  out.actions = mdp.actions;
  out.initial = remap[mdp.initial];
  for (StateId s : keep) {
    out.names.push_back(mdp.names[s]);
    out.tags.push_back(mdp.tags[s]);
    out.label.push_back(mdp.label[s]);
    out.unsafe.push_back(mdp.unsafe[s]);
    for (LetterId a = 0; a < mdp.action_count(); ++a) {
      const std::size_t idx = mdp.index(s, a);
      Distribution d;
      if (allowed[idx]) {
        for (const auto& [t, p] : mdp.trans[idx].entries) d.entries.emplace_back(remap[t], p);
        std::sort(d.entries.begin(), d.entries.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
      }
      out.trans.push_back(std::move(d));
      out.cost1.push_back(allowed[idx] ? mdp.cost1[idx] : Rational(0));
      out.cost2.push_back(allowed[idx] ? mdp.cost2[idx] : Rational(0));
    }
  }
  return out;
}

}  // namespace

std::variant<SynthesisMDP, Unrealizable> prune_unsafe(const SynthesisMDP& mdp) {
  const std::size_t n = mdp.size();
  const std::size_t k = mdp.action_count();
  std::vector<bool> in_w(n);
  std::vector<bool> allowed(n * k);
  for (StateId s = 0; s < n; ++s) {
    in_w[s] = !mdp.unsafe[s];
    for (LetterId a = 0; a < k; ++a) allowed[mdp.index(s, a)] = in_w[s] && mdp.enabled(s, a);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (!in_w[s]) continue;
      bool any = false;
      for (LetterId a = 0; a < k; ++a) {
        const std::size_t idx = mdp.index(s, a);
        if (!allowed[idx]) continue;
        for (const auto& [t, p] : mdp.trans[idx].entries)
          if (p > 0 && !in_w[t]) {
            allowed[idx] = false;
            changed = true;
            break;
          }
        any = any || allowed[idx];
      }
      if (!any) {
        in_w[s] = false;
        changed = true;
      }
    }
  }
  if (!in_w[mdp.initial])
    return Unrealizable{"no output strategy keeps the initial state " + mdp.names[mdp.initial] +
                        " safe with probability one"};

  std::vector<bool> seen(n);
  std::vector<StateId> order{mdp.initial};
  seen[mdp.initial] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const StateId s = order[i];
    for (LetterId a = 0; a < k; ++a) {
      if (!allowed[mdp.index(s, a)]) continue;
      for (const auto& [t, p] : mdp.at(s, a).entries)
        if (!seen[t]) {
          seen[t] = true;
          order.push_back(t);
        }
    }
  }
  // Keep the original relative order so that pruning is idempotent up to equality.
  std::sort(order.begin(), order.end());
  return restrict_mdp(mdp, order, allowed);
}

namespace {

std::vector<StateId> reachable_under(const SynthesisMDP& mdp, const Strategy& strat) {
  if (strat.choice.size() != mdp.size()) throw InputError("strategy does not cover every MDP state");
  std::vector<StateId> order{mdp.initial};
  std::vector<bool> seen(mdp.size());
  seen[mdp.initial] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const StateId s = order[i];
    const LetterId a = strat.choice[s];
    if (a >= mdp.action_count() || !mdp.enabled(s, a))
      throw InputError("strategy chooses a disabled action in " + mdp.names[s]);
    for (const auto& [t, p] : mdp.at(s, a).entries)
      if (!seen[t]) {
        seen[t] = true;
        order.push_back(t);
      }
  }
  return order;
}

}  // namespace

ExtractedSystem extract_system(const SynthesisMDP& mdp, const Strategy& strat) {
  const std::vector<StateId> order = reachable_under(mdp, strat);
  std::vector<StateId> index(mdp.size(), kNoState);
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i]] = static_cast<StateId>(i);

  ExtractedSystem out;
  FiniteStateSystem& sys = out.system;
  sys.name = "synthesized";
  sys.inputs = mdp.labels;
  sys.outputs = mdp.actions;
  sys.initial = 0;
  const std::size_t k = sys.inputs.size();
  sys.delta.assign(order.size() * k, kNoState);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const StateId x = order[i];
    sys.states.push_back(mdp.names[x]);
    sys.output.push_back(strat.choice[x]);
    for (const auto& [t, p] : mdp.at(x, strat.choice[x]).entries)
      if (p > 0) sys.delta[i * k + mdp.label[t]] = index[t];
    for (LetterId l = 0; l < k; ++l) {
      if (sys.delta[i * k + l] != kNoState) continue;
      sys.delta[i * k + l] = static_cast<StateId>(i);
      out.notes.push_back("input '" + sys.inputs.letter_name(l) + "' cannot occur in state " +
                          mdp.names[x] + "; completed with a self-loop");
    }
  }
  out.mdp_state = order;
  return out;
}

CostMarkovChain induced_chain(const SynthesisMDP& mdp, const Strategy& strat) {
  const std::vector<StateId> order = reachable_under(mdp, strat);
  std::vector<StateId> index(mdp.size(), kNoState);
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i]] = static_cast<StateId>(i);
  CostMarkovChain chain;
  for (StateId s : order) {
    const std::size_t idx = mdp.index(s, strat.choice[s]);
    Distribution d;
    for (const auto& [t, p] : mdp.trans[idx].entries) d.entries.emplace_back(index[t], p);
    chain.names.push_back(mdp.names[s]);
    chain.origin.push_back({s});
    chain.trans.push_back(std::move(d));
    chain.cost1.push_back(mdp.cost1[idx]);
    chain.cost2.push_back(mdp.cost2[idx]);
  }
  return chain;
}

CostAutomaton compose_automata(const std::vector<CostAutomaton>& parts) {
  if (parts.empty()) throw InputError("nothing to compose");
  if (parts.size() == 1) return parts.front();
  std::vector<Alphabet> ins;
  std::vector<Alphabet> outs;
  for (const auto& p : parts) {
    ins.push_back(p.inputs);
    outs.push_back(p.outputs);
  }
  CostAutomaton out;
  try {
    out.inputs = merge_alphabets(ins);
    out.outputs = merge_alphabets(outs);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("alphabet mismatch: ") + e.what());
  }
  out.name = parts.front().name;
  for (std::size_t i = 1; i < parts.size(); ++i) out.name += "*" + parts[i].name;
  std::vector<AutomatonView> views;
  views.reserve(parts.size());
  for (const auto& p : parts) views.emplace_back(p, out.inputs, out.outputs, "automaton " + p.name);

  const std::size_t k = out.letter_count();
  std::map<std::vector<StateId>, StateId> ids;
  std::vector<std::vector<StateId>> keys;
  auto intern = [&](const std::vector<StateId>& key) {
    auto [it, inserted] = ids.emplace(key, static_cast<StateId>(keys.size()));
    if (inserted) keys.push_back(key);
    return it->second;
  };
  std::vector<StateId> init;
  for (const auto& p : parts) init.push_back(p.initial);
  intern(init);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::vector<StateId> key = keys[i];
    std::string name = "(";
    bool safe = true;
    for (std::size_t c = 0; c < parts.size(); ++c) {
      name += (c ? "," : "") + parts[c].states[key[c]];
      safe = safe && parts[c].safe[key[c]];
    }
    out.states.push_back(name + ")");
    out.safe.push_back(safe);
    for (LetterId letter = 0; letter < k; ++letter) {
      const auto l = static_cast<LetterId>(letter / out.outputs.size());
      const auto a = static_cast<LetterId>(letter % out.outputs.size());
      std::vector<StateId> next(parts.size());
      std::int64_t c1 = 0;
      std::int64_t c2 = 0;
      for (std::size_t c = 0; c < parts.size(); ++c) {
        const LetterId pl = views[c].letter(l, a);
        next[c] = parts[c].next(key[c], pl);
        if (next[c] == kNoState) throw InputError("automaton " + parts[c].name + " is not total");
        c1 += parts[c].cost1[parts[c].index(key[c], pl)];
        c2 += parts[c].cost2[parts[c].index(key[c], pl)];
      }
      out.delta.push_back(intern(next));
      out.cost1.push_back(c1);
      out.cost2.push_back(c2);
    }
  }
  out.initial = 0;
  return out;
}

LabeledMDP compose_environments(const std::vector<LabeledMDP>& parts) {
  if (parts.empty()) throw InputError("nothing to compose");
  if (parts.size() == 1) return parts.front();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].labels.kind() != Alphabet::Kind::Bits || parts[i].actions.kind() != Alphabet::Kind::Bits)
      throw InputError("environment composition needs bit alphabets");
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      for (const auto& v : parts[i].labels.symbols())
        if (parts[j].labels.variable_index(v))
          throw InputError("environments share the label variable '" + v + "'");
  }
  std::vector<Alphabet> labels;
  std::vector<Alphabet> actions;
  for (const auto& p : parts) {
    labels.push_back(p.labels);
    actions.push_back(p.actions);
  }
  LabeledMDP out;
  out.labels = merge_alphabets(labels);
  out.actions = merge_alphabets(actions);
  out.name = parts.front().name;
  for (std::size_t i = 1; i < parts.size(); ++i) out.name += "*" + parts[i].name;
  std::vector<Projection> act_proj;
  for (const auto& p : parts) act_proj.emplace_back(out.actions, p.actions);

  auto joint_label = [&](const std::vector<StateId>& key) {
    LetterId letter = 0;
    const std::size_t n = out.labels.symbols().size();
    for (std::size_t c = 0; c < parts.size(); ++c) {
      const auto& part = parts[c];
      for (std::size_t v = 0; v < part.labels.symbols().size(); ++v)
        if (part.labels.bit(part.label[key[c]], v))
          letter |= LetterId{1} << (n - 1 - *out.labels.variable_index(part.labels.symbols()[v]));
    }
    return letter;
  };

  std::map<std::vector<StateId>, StateId> ids;
  std::vector<std::vector<StateId>> keys;
  auto intern = [&](const std::vector<StateId>& key) {
    auto [it, inserted] = ids.emplace(key, static_cast<StateId>(keys.size()));
    if (inserted) keys.push_back(key);
    return it->second;
  };
  std::vector<StateId> init;
  for (const auto& p : parts) init.push_back(p.initial);
  intern(init);
  const std::size_t k = out.actions.size();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::vector<StateId> key = keys[i];
    std::string name = "(";
    for (std::size_t c = 0; c < parts.size(); ++c) name += (c ? "," : "") + parts[c].states[key[c]];
    out.states.push_back(name + ")");
    out.label.push_back(joint_label(key));
    for (LetterId a = 0; a < k; ++a) {
      // Cartesian product of the component distributions.
      std::vector<std::pair<std::vector<StateId>, Rational>> combos{{{}, Rational(1)}};
      for (std::size_t c = 0; c < parts.size(); ++c) {
        const Distribution& d = parts[c].at(key[c], act_proj[c](a));
        std::vector<std::pair<std::vector<StateId>, Rational>> next;
        for (const auto& [partial, p] : combos)
          for (const auto& [t, q] : d.entries) {
            auto extended = partial;
            extended.push_back(t);
            next.emplace_back(std::move(extended), p * q);
          }
        combos = std::move(next);
      }
      Distribution d;
      for (const auto& [target, p] : combos) d.entries.emplace_back(intern(target), p);
      std::sort(d.entries.begin(), d.entries.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      out.trans.push_back(std::move(d));
    }
  }
  out.initial = 0;
  return out;
}

}  // namespace ratiosynth
