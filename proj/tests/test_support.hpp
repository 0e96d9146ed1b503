#pragma once
// Shared helpers for the test binaries: corpus access, random model
// generators and brute-force oracles that do not go through the solver
// code under test.

#include "ratiosynth/commands.hpp"
#include "ratiosynth/lfp.hpp"
#include "ratiosynth/mc_analysis.hpp"
#include "ratiosynth/model.hpp"
#include "ratiosynth/model_io.hpp"
#include "ratiosynth/product.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace testsupport {

using namespace ratiosynth;

inline std::string corpus_path(const std::string& rel) { return std::string(RATIOSYNTH_CORPUS_DIR) + "/" + rel; }
inline std::string data_path(const std::string& rel) { return std::string(RATIOSYNTH_TEST_DATA_DIR) + "/" + rel; }

struct Instance {
  std::string name;
  SpecFiles specs;
  std::optional<std::string> system;
};

inline std::vector<Instance> corpus_instances() {
  const auto doc = nlohmann::json::parse(read_file(corpus_path("instances.json")));
  std::vector<Instance> out;
  for (const auto& e : doc["instances"]) {
    Instance inst;
    inst.name = e["name"];
    for (const auto& p : e["qual"]) inst.specs.qual.push_back(corpus_path(p));
    for (const auto& p : e["quant"]) inst.specs.quant.push_back(corpus_path(p));
    for (const auto& p : e["env"]) inst.specs.env.push_back(corpus_path(p));
    if (e.contains("system")) inst.system = corpus_path(e["system"]);
    out.push_back(std::move(inst));
  }
  return out;
}

inline SpecFiles two_client_specs() {
  SpecFiles s;
  s.qual = {corpus_path("two_client/mutex.aut")};
  s.quant = {corpus_path("two_client/cost1.aut"), corpus_path("two_client/cost2.aut")};
  s.env = {corpus_path("two_client/client1.mdp"), corpus_path("two_client/client2.mdp")};
  return s;
}

inline Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// Generic MDP for solver tests: trans[s][a] is a list of (target, prob),
/// empty for a disabled action; costs per (s, a).
inline SynthesisMDP make_mdp(const std::vector<std::vector<std::vector<std::pair<StateId, Rational>>>>& trans,
                             const std::vector<std::vector<std::pair<long, long>>>& costs) {
  SynthesisMDP m;
  const std::size_t n = trans.size();
  const std::size_t k = trans.front().size();
  std::vector<std::string> acts;
  for (std::size_t a = 0; a < k; ++a) acts.push_back("act" + std::to_string(a));
  m.labels = Alphabet::bits({});
  m.actions = Alphabet::names(acts);
  for (StateId s = 0; s < n; ++s) {
    m.names.push_back("s" + std::to_string(s));
    m.tags.push_back({0, 0, s});
    m.label.push_back(0);
    m.unsafe.push_back(false);
    for (std::size_t a = 0; a < k; ++a) {
      Distribution d;
      for (const auto& e : trans[s][a]) d.entries.push_back(e);
      m.trans.push_back(std::move(d));
      m.cost1.push_back(Rational(costs[s][a].first));
      m.cost2.push_back(Rational(costs[s][a].second));
    }
  }
  return m;
}

/// Chain over all MDP states (not only the reachable ones) under `strat`.
inline CostMarkovChain full_chain(const SynthesisMDP& mdp, const Strategy& strat) {
  CostMarkovChain c;
  for (StateId s = 0; s < mdp.size(); ++s) {
    const std::size_t idx = mdp.index(s, strat.choice[s]);
    c.names.push_back(mdp.names[s]);
    c.origin.push_back({s});
    c.trans.push_back(mdp.trans[idx]);
    c.cost1.push_back(mdp.cost1[idx]);
    c.cost2.push_back(mdp.cost2[idx]);
  }
  return c;
}

inline std::vector<Strategy> all_strategies(const SynthesisMDP& mdp) {
  std::vector<Strategy> out{Strategy{}};
  for (StateId s = 0; s < mdp.size(); ++s) {
    std::vector<Strategy> next;
    for (const auto& partial : out)
      for (LetterId a : mdp.enabled_actions(s)) {
        Strategy st = partial;
        st.choice.push_back(a);
        next.push_back(std::move(st));
      }
    out = std::move(next);
  }
  return out;
}

inline bool every_strategy_unichain(const SynthesisMDP& mdp) {
  for (const auto& st : all_strategies(mdp))
    if (!classify(full_chain(mdp, st)).unichain) return false;
  return true;
}

/// Minimum over pure memoryless strategies of the induced chain's value.
inline ExtendedValue brute_force_value(const SynthesisMDP& mdp) {
  ExtendedValue best = ExtendedValue::infinity();
  for (const auto& st : all_strategies(mdp)) {
    const ExtendedValue v = expected_ratio(induced_chain(mdp, st));
    if (v < best) best = v;
  }
  return best;
}

/// Random MDP with up to 3 states and up to 2 actions per state,
/// probabilities in {1/4, 1/2, 3/4, 1} and costs in {0, 1, 2}. Every state
/// is reachable from state 0.
inline SynthesisMDP random_small_mdp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nstates(1, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> cost(0, 2);
  while (true) {
    const int n = nstates(rng);
    std::uniform_int_distribution<int> target(0, n - 1);
    std::vector<std::vector<std::vector<std::pair<StateId, Rational>>>> trans(n);
    std::vector<std::vector<std::pair<long, long>>> costs(n);
    for (int s = 0; s < n; ++s) {
      const int acts = 1 + coin(rng);
      trans[s].resize(2);
      costs[s].assign(2, {0, 0});
      for (int a = 0; a < acts; ++a) {
        // Mass split: 1, 1/2+1/2, 1/4+3/4 or 3/4+1/4 over distinct targets.
        std::vector<std::pair<StateId, Rational>> d;
        const int shape = std::uniform_int_distribution<int>(0, 3)(rng);
        const auto t1 = static_cast<StateId>(target(rng));
        if (shape == 0 || n == 1) {
          d.push_back({t1, q(1)});
        } else {
          StateId t2 = t1;
          while (t2 == t1) t2 = static_cast<StateId>(target(rng));
          const Rational p = shape == 1 ? q(1, 2) : (shape == 2 ? q(1, 4) : q(3, 4));
          d.push_back({t1, p});
          d.push_back({t2, 1 - p});
          std::sort(d.begin(), d.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        }
        trans[s][a] = d;
        costs[s][a] = {cost(rng), cost(rng)};
      }
    }
    SynthesisMDP m = make_mdp(trans, costs);
    // Reachability from state 0 under some strategy.
    std::vector<bool> seen(n, false);
    std::vector<StateId> todo{0};
    seen[0] = true;
    while (!todo.empty()) {
      const StateId s = todo.back();
      todo.pop_back();
      for (LetterId a : m.enabled_actions(s))
        for (const auto& [t, p] : m.at(s, a).entries)
          if (!seen[t]) {
            seen[t] = true;
            todo.push_back(t);
          }
    }
    if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) return m;
  }
}

/// Relative closeness with Infinity handled.
inline bool values_close(const ExtendedValue& a, const ExtendedValue& b, double rel = 1e-6) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
  return std::abs(a.to_double() - b.to_double()) <= rel * std::max(1.0, std::abs(b.to_double()));
}

// ---------------------------------------------------------------------------
// Random (system, safety automaton, environment) triples over L = {r}, A = {a}.

struct Triple {
  FiniteStateSystem sys;
  CostAutomaton qual;
  LabeledMDP env;
};

inline Triple random_triple(std::mt19937_64& rng) {
  const Alphabet L = Alphabet::bits({"r"});
  const Alphabet A = Alphabet::bits({"a"});
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Triple t;

  const int ns = pick(1, 3);
  t.sys.name = "sys";
  t.sys.inputs = L;
  t.sys.outputs = A;
  for (int s = 0; s < ns; ++s) {
    t.sys.states.push_back("m" + std::to_string(s));
    t.sys.output.push_back(static_cast<LetterId>(pick(0, 1)));
    for (int l = 0; l < 2; ++l) t.sys.delta.push_back(static_cast<StateId>(pick(0, ns - 1)));
  }

  const int nq = pick(1, 3);
  t.qual.name = "qual";
  t.qual.inputs = L;
  t.qual.outputs = A;
  for (int qi = 0; qi < nq; ++qi) {
    t.qual.states.push_back("q" + std::to_string(qi));
    // Initial state safe most of the time; others safe with probability 3/4.
    t.qual.safe.push_back(qi == 0 ? pick(0, 9) > 0 : pick(0, 3) > 0);
    for (int letter = 0; letter < 4; ++letter) {
      t.qual.delta.push_back(static_cast<StateId>(pick(0, 3) == 0 ? pick(0, nq - 1) : qi));
      t.qual.cost1.push_back(0);
      t.qual.cost2.push_back(0);
    }
  }

  // Environment: states carry r or !r; each (state, action) moves to at most
  // one state per label, keeping label-determinism.
  const int nm = pick(1, 4);
  t.env.name = "env";
  t.env.labels = L;
  t.env.actions = A;
  for (int m = 0; m < nm; ++m) {
    t.env.states.push_back("e" + std::to_string(m));
    t.env.label.push_back(static_cast<LetterId>(m == 0 ? 0 : pick(0, 1)));
  }
  std::vector<std::vector<StateId>> by_label(2);
  for (int m = 0; m < nm; ++m) by_label[t.env.label[m]].push_back(static_cast<StateId>(m));
  for (int m = 0; m < nm; ++m)
    for (int a = 0; a < 2; ++a) {
      Distribution d;
      std::vector<StateId> targets;
      for (int l = 0; l < 2; ++l)
        if (!by_label[l].empty() && (targets.empty() || pick(0, 1)))
          targets.push_back(by_label[l][static_cast<std::size_t>(pick(0, static_cast<int>(by_label[l].size()) - 1))]);
      if (targets.size() == 1) {
        d.entries.push_back({targets[0], q(1)});
      } else {
        const Rational p = pick(0, 1) ? q(1, 2) : q(1, 4);
        d.entries.push_back({targets[0], p});
        d.entries.push_back({targets[1], 1 - p});
      }
      std::sort(d.entries.begin(), d.entries.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      t.env.trans.push_back(std::move(d));
    }
  return t;
}

/// Positive-probability reachability of a non-safe automaton state, by a
/// plain search over (system, automaton, environment) triples.
inline bool oracle_unsafe_reachable(const Triple& t) {
  std::set<std::tuple<StateId, StateId, StateId>> seen;
  std::vector<std::tuple<StateId, StateId, StateId>> stack{{t.sys.initial, t.qual.initial, t.env.initial}};
  while (!stack.empty()) {
    const auto cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    const auto [s, qs, m] = cur;
    if (!t.qual.safe[qs]) return true;
    const LetterId a = t.sys.output[s];
    for (const auto& [m2, p] : t.env.trans[m * 2 + a].entries) {
      if (p == 0) continue;
      const LetterId l = t.env.label[m2];
      stack.emplace_back(t.sys.delta[s * 2 + l], t.qual.delta[qs * 4 + l * 2 + a], m2);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// LP oracle: exhaustive enumeration of basic solutions.

/// Solves the square system M y = r by Gaussian elimination; nullopt if singular.
inline std::optional<std::vector<double>> dense_solve(std::vector<std::vector<double>> m, std::vector<double> r) {
  const std::size_t n = r.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(m[i][c]) > std::abs(m[p][c])) p = i;
    if (std::abs(m[p][c]) < 1e-10) return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(r[p], r[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const double f = m[i][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[i][k] -= f * m[c][k];
      r[i] -= f * r[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) r[i] /= m[i][i];
  return r;
}

/// Minimum of c.x over all basic feasible solutions of a full-row-rank LP.
inline std::optional<double> vertex_enumeration_min(const std::vector<std::vector<double>>& a,
                                                    const std::vector<double>& b, const std::vector<double>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  std::optional<double> best;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m), true);
  std::sort(pick.begin(), pick.end());
  do {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n; ++j)
      if (pick[j]) cols.push_back(j);
    std::vector<std::vector<double>> sq(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) sq[i][k] = a[i][cols[k]];
    const auto y = dense_solve(sq, b);
    if (!y) continue;
    if (std::any_of(y->begin(), y->end(), [](double v) { return v < -1e-10; })) continue;
    double obj = 0.0;
    for (std::size_t k = 0; k < m; ++k) obj += c[cols[k]] * (*y)[k];
    if (!best || obj < *best) best = obj;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace testsupport
