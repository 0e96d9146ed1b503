#include "test_support.hpp"

#include <cstdlib>
#include <doctest.h>

using namespace ratiosynth;
using testsupport::q;

namespace {

CostMarkovChain chain(const std::vector<std::vector<std::pair<StateId, Rational>>>& trans,
                      const std::vector<std::pair<long, long>>& costs) {
  CostMarkovChain c;
  for (StateId s = 0; s < trans.size(); ++s) {
    c.names.push_back("s" + std::to_string(s));
    c.origin.push_back({s});
    Distribution d;
    d.entries = trans[s];
    c.trans.push_back(d);
    c.cost1.push_back(Rational(costs[s].first));
    c.cost2.push_back(Rational(costs[s].second));
  }
  return c;
}

}  // namespace

TEST_CASE("stationary distribution of a two-state chain") {
  const auto e = chain({{{0, q(5, 6)}, {1, q(1, 6)}}, {{0, q(1, 2)}, {1, q(1, 2)}}}, {{0, 1}, {1, 0}});
  const CesaroDistribution p = cesaro_limit(e);
  REQUIRE(p.mode == SolveMode::Exact);
  CHECK(p.exact[0] == q(3, 4));
  CHECK(p.exact[1] == q(1, 4));
  // N = 1/4, D = 3/4.
  CHECK(expected_ratio(e) == ExtendedValue::exact(q(1, 3)));
}

TEST_CASE("deterministic two-cycle") {
  const auto c = chain({{{1, q(1)}}, {{0, q(1)}}}, {{1, 0}, {3, 1}});
  CHECK(expected_ratio(c) == ExtendedValue::exact(q(4)));
  const auto d = chain({{{1, q(1)}}, {{0, q(1)}}}, {{1, 1}, {3, 1}});
  CHECK(expected_ratio(d) == ExtendedValue::exact(q(2)));
}

TEST_CASE("zero and infinity conventions") {
  CHECK(expected_ratio(chain({{{0, q(1)}}}, {{0, 0}})) == ExtendedValue::exact(q(0)));
  CHECK(expected_ratio(chain({{{0, q(1)}}}, {{0, 5}})) == ExtendedValue::exact(q(0)));
  CHECK(expected_ratio(chain({{{0, q(1)}}}, {{2, 0}})).is_infinite());
  // Transient costs do not count.
  CHECK(expected_ratio(chain({{{1, q(1)}}, {{1, q(1)}}}, {{7, 0}, {1, 1}})) == ExtendedValue::exact(q(1)));
}

TEST_CASE("classify") {
  const auto uni = chain({{{1, q(1)}}, {{1, q(1)}}}, {{0, 0}, {0, 0}});
  const ChainStructure a = classify(uni);
  CHECK(a.unichain);
  CHECK(a.recurrent_classes == std::vector<std::vector<StateId>>{{1}});
  CHECK(a.transient == std::vector<StateId>{0});

  const auto multi = chain({{{1, q(1, 2)}, {2, q(1, 2)}}, {{1, q(1)}}, {{2, q(1)}}}, {{0, 0}, {1, 1}, {2, 1}});
  const ChainStructure b = classify(multi);
  CHECK_FALSE(b.unichain);
  CHECK(b.recurrent_classes.size() == 2);
  CHECK_THROWS_AS(expected_ratio(multi), MultichainError);
  try {
    cesaro_limit(multi);
  } catch (const MultichainError& e) {
    CHECK(e.structure().recurrent_classes.size() == 2);
  }
  CHECK_FALSE(expected_ratio_is_zero(multi));
  const auto multi_zero = chain({{{1, q(1, 2)}, {2, q(1, 2)}}, {{1, q(1)}}, {{2, q(1)}}}, {{5, 0}, {0, 1}, {0, 3}});
  CHECK(expected_ratio_is_zero(multi_zero));
}

TEST_CASE("float mode agrees with exact mode") {
  std::mt19937_64 rng(17);
  AnalysisOptions flt;
  flt.exact_threshold = 0;
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const SynthesisMDP m = testsupport::random_small_mdp(rng);
    Strategy st;
    for (StateId s = 0; s < m.size(); ++s) st.choice.push_back(m.enabled_actions(s).front());
    const CostMarkovChain c = induced_chain(m, st);
    if (!classify(c).unichain) continue;
    const CesaroDistribution pf = cesaro_limit(c, flt);
    CHECK(pf.mode == SolveMode::Float);
    CHECK(pf.residual <= 1e-10);
    const CesaroDistribution pe = cesaro_limit(c);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(pf.weights[i] - to_double(pe.exact[i])) < 1e-10);
    CHECK(testsupport::values_close(expected_ratio(c, flt), expected_ratio(c), 1e-9));
    ++compared;
  }
  CHECK(compared > 100);
}

TEST_CASE("the threshold can be set from the environment") {
  ::setenv("RATIOSYNTH_EXACT_THRESHOLD", "17", 1);
  CHECK(AnalysisOptions::from_environment().exact_threshold == 17);
  ::unsetenv("RATIOSYNTH_EXACT_THRESHOLD");
  CHECK(AnalysisOptions::from_environment().exact_threshold == 2000);
}

TEST_CASE("stationary weights sum to one and are invariant") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const SynthesisMDP m = testsupport::random_small_mdp(rng);
    Strategy st;
    for (StateId s = 0; s < m.size(); ++s) st.choice.push_back(m.enabled_actions(s).back());
    const CostMarkovChain c = induced_chain(m, st);
    const ChainStructure cs = classify(c);
    if (!cs.unichain) continue;
    const CesaroDistribution p = cesaro_limit(c);
    Rational total = 0;
    std::vector<Rational> next(c.size(), 0);
    for (StateId s = 0; s < c.size(); ++s) {
      total += p.exact[s];
      for (const auto& [t, pr] : c.trans[s].entries) next[t] += p.exact[s] * pr;
    }
    CHECK(total == 1);
    CHECK(next == p.exact);
    for (StateId t : cs.transient) CHECK(p.exact[t] == 0);
  }
}

TEST_CASE("a zero-cost prefix does not change the value") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const SynthesisMDP m = testsupport::random_small_mdp(rng);
    Strategy st;
    for (StateId s = 0; s < m.size(); ++s) st.choice.push_back(m.enabled_actions(s).front());
    const CostMarkovChain c = induced_chain(m, st);
    if (!classify(c).unichain) continue;
    // Prepend a path of k fresh states with cost (0,0) ending in the old initial state.
    const std::size_t k = 1 + trial % 3;
    CostMarkovChain p;
    for (std::size_t i = 0; i < k; ++i) {
      p.names.push_back("pre" + std::to_string(i));
      p.origin.push_back({});
      Distribution d;
      d.entries.push_back({static_cast<StateId>(i + 1), q(1)});
      p.trans.push_back(d);
      p.cost1.push_back(0);
      p.cost2.push_back(0);
    }
    for (StateId s = 0; s < c.size(); ++s) {
      p.names.push_back(c.names[s]);
      p.origin.push_back(c.origin[s]);
      Distribution d;
      for (const auto& [t, pr] : c.trans[s].entries) d.entries.push_back({static_cast<StateId>(t + k), pr});
      p.trans.push_back(d);
      p.cost1.push_back(c.cost1[s]);
      p.cost2.push_back(c.cost2[s]);
    }
    CHECK(expected_ratio(p) == expected_ratio(c));
  }
}

TEST_CASE("satisfaction via value zero agrees with reachability on random triples") {
  std::mt19937_64 rng(29);
  int multichain = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const testsupport::Triple t = testsupport::random_triple(rng);
    const SatisfactionReport r = check_satisfaction_report(t.sys, t.qual, t.env);
    CHECK(r.satisfied == !testsupport::oracle_unsafe_reachable(t));
    CHECK(r.satisfied == !unsafe_reachable(t.sys, t.qual, t.env));
    if (r.multichain) ++multichain;
  }
  MESSAGE("multichain satisfaction chains: " << multichain);
}
