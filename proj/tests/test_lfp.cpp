#include "test_support.hpp"

#include "ratiosynth/end_components.hpp"
#include "ratiosynth/errors.hpp"

#include <doctest.h>

using namespace ratiosynth;
using testsupport::make_mdp;
using testsupport::q;

namespace {

using Edges = std::vector<std::pair<StateId, Rational>>;

SynthesisMDP two_client_pruned() {
  const LoadedSpecs sp = load_specs(testsupport::two_client_specs());
  auto r = prune_unsafe(build_synthesis_mdp(sp.qual, sp.quant, sp.env));
  REQUIRE(std::holds_alternative<SynthesisMDP>(r));
  return std::get<SynthesisMDP>(r);
}

void check_history(const LfpResult& r) {
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1] + 1e-12);
  for (double v : r.lp_optima) CHECK(v <= 1e-9);
}

}  // namespace

TEST_CASE("one state with a dominated action") {
  const SynthesisMDP m = make_mdp({{Edges{{0, q(1)}}, Edges{{0, q(1)}}}}, {{{2, 1}, {1, 1}}});
  const LfpDescription lfp = build_lfp(m);
  CHECK(lfp.num_vars() == 2);
  CHECK(lfp.constraints.num_rows() == 2);
  const LfpResult r = solve_lfp(m);
  CHECK(r.value == ExtendedValue::exact(q(1)));
  CHECK(r.strategy.choice == std::vector<LetterId>{1});
  CHECK(r.path == "iteration");
  check_history(r);
}

TEST_CASE("single-action MDPs have a unique occupation measure") {
  const SynthesisMDP m = make_mdp({{Edges{{0, q(1, 2)}, {1, q(1, 2)}}, Edges{}}, {Edges{{0, q(1)}}, Edges{}}},
                                  {{{1, 1}, {0, 0}}, {{0, 1}, {0, 0}}});
  const LfpDescription lfp = build_lfp(m);
  CHECK(lfp.num_vars() == 2);
  const InitialPoint init = initial_feasible(m, lfp, RevisedSimplex{});
  CHECK(init.path == "cesaro");
  CHECK(init.measure.at(0, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(init.measure.at(1, 0) == doctest::Approx(1.0 / 3.0));
  const LfpResult r = solve_lfp(m);
  CHECK(r.value == ExtendedValue::exact(q(2, 3)));
  CHECK(r.strategy.choice == std::vector<LetterId>{0, 0});
}

TEST_CASE("deterministic two-cycle starts at the uniform measure") {
  const SynthesisMDP m =
      make_mdp({{Edges{{1, q(1)}}, Edges{{0, q(1)}}}, {Edges{{0, q(1)}}, Edges{}}}, {{{1, 1}, {0, 1}}, {{3, 1}, {0, 0}}});
  const LfpDescription lfp = build_lfp(m);
  const InitialPoint init = initial_feasible(m, lfp, RevisedSimplex{});
  CHECK(init.measure.at(0, 0) == doctest::Approx(0.5));
  CHECK(init.measure.at(1, 0) == doctest::Approx(0.5));
  CHECK(init.measure.at(0, 1) == 0.0);
  // Looping in state 0 costs (0,1), so the optimum has numerator 0.
  const LfpResult r = solve_lfp(m);
  CHECK(r.value == ExtendedValue::exact(q(0)));
  CHECK(r.strategy.choice[0] == 1);
}

TEST_CASE("occupation measures of unichain strategies satisfy the constraints exactly") {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const SynthesisMDP m = testsupport::random_small_mdp(rng);
    const LfpDescription lfp = build_lfp(m);
    for (const Strategy& st : testsupport::all_strategies(m)) {
      const CostMarkovChain c = testsupport::full_chain(m, st);
      if (!classify(c).unichain) continue;
      const CesaroDistribution p = cesaro_limit(c);
      // Exact check: normalization and balance per state.
      Rational total = 0;
      std::vector<Rational> in(m.size(), 0);
      for (StateId s = 0; s < m.size(); ++s) {
        total += p.exact[s];
        for (const auto& [t, pr] : m.at(s, st.choice[s]).entries) in[t] += p.exact[s] * pr;
      }
      CHECK(total == 1);
      CHECK(in == p.exact);
      std::vector<double> x(lfp.num_vars(), 0.0);
      for (std::size_t j = 0; j < lfp.num_vars(); ++j)
        if (st.choice[lfp.var_state[j]] == lfp.var_action[j]) x[j] = p.weights[lfp.var_state[j]];
      CHECK(lp_residual(lfp.constraints, x) <= 1e-12);
      ++checked;
    }
  }
  CHECK(checked > 200);
}

TEST_CASE("value equals the brute-force minimum on small MDPs") {
  std::mt19937_64 rng(43);
  int solved = 0;
  for (int trial = 0; trial < 400 && solved < 150; ++trial) {
    const SynthesisMDP m = testsupport::random_small_mdp(rng);
    if (!testsupport::every_strategy_unichain(m)) continue;
    const ExtendedValue oracle = testsupport::brute_force_value(m);
    const LfpResult r = solve_lfp(m);
    CHECK_MESSAGE(testsupport::values_close(r.value, oracle), "trial " << trial << ": " << r.value.to_string()
                                                                        << " vs " << oracle.to_string());
    check_history(r);
    if (r.value.is_finite() && r.path == "iteration")
      CHECK(expected_ratio(induced_chain(m, r.strategy)) == r.value);
    ++solved;
  }
  CHECK(solved >= 100);
}

TEST_CASE("two-client benchmark") {
  const SynthesisMDP m = two_client_pruned();
  const LfpDescription lfp = build_lfp(m);
  CHECK(lfp.constraints.num_rows() == 1 + m.size());
  const InitialPoint init = initial_feasible(m, lfp, RevisedSimplex{});
  CHECK(lp_residual(lfp.constraints, init.measure.x) <= 1e-9);
  const ExtendedValue f0 = lfp_objective(lfp, init.measure.x);
  CHECK((f0.is_infinite() || f0.to_double() >= 1.2 - 1e-9));

  const LfpResult r = solve_lfp(m);
  REQUIRE(r.value.has_exact());
  CHECK(r.value.exact_value() == q(6, 5));
  CHECK(r.path == "iteration");
  check_history(r);
  CHECK(std::abs(r.lp_optima.back()) <= 1e-9);
  CHECK(expected_ratio(induced_chain(m, r.strategy)) == r.value);
}

TEST_CASE("extract_strategy rules") {
  const SynthesisMDP m = make_mdp({{Edges{{0, q(1)}}, Edges{{1, q(1)}}}, {Edges{}, Edges{{0, q(1)}}}},
                                  {{{1, 1}, {1, 1}}, {{0, 0}, {1, 1}}});
  OccupationMeasure x;
  x.state = {0, 0, 1};
  x.action = {0, 1, 1};
  x.x = {1.0, 0.0, 0.0};
  // State 1 has zero mass: lowest enabled action, which is 1 there.
  CHECK(extract_strategy(x, m).choice == std::vector<LetterId>{0, 1});
  x.x = {0.0, 0.5, 0.5};
  CHECK(extract_strategy(x, m).choice == std::vector<LetterId>{1, 1});
  x.x = {0.5, 0.25, 0.25};
  CHECK_THROWS_AS(extract_strategy(x, m), ConsistencyError);
  CHECK(extract_strategy(x, m, false).choice == std::vector<LetterId>{0, 1});
}

TEST_CASE("several bottom components are refused unless overridden") {
  // State 0 chooses between two absorbing states.
  const SynthesisMDP m = make_mdp(
      {{Edges{{1, q(1)}}, Edges{{2, q(1)}}}, {Edges{{1, q(1)}}, Edges{}}, {Edges{{2, q(1)}}, Edges{}}},
      {{{1, 1}, {1, 1}}, {{2, 1}, {0, 0}}, {{1, 1}, {0, 0}}});
  CHECK_THROWS_AS(solve_lfp(m), MultichainSuspect);
  try {
    solve_lfp(m);
  } catch (const MultichainSuspect& e) {
    CHECK(e.bottom_components() == 2);
  }
  LfpOptions opt;
  opt.allow_multichain = true;
  const LfpResult r = solve_lfp(m, opt);
  CHECK(r.value == ExtendedValue::exact(q(1)));
  CHECK(r.strategy.choice[0] == 1);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("reachable zero-cost end components give value 0") {
  // From 0: action 0 loops with cost (1,1); action 1 moves to 1 with probability 1/2.
  const SynthesisMDP m = make_mdp({{Edges{{0, q(1)}}, Edges{{0, q(1, 2)}, {1, q(1, 2)}}}, {Edges{{1, q(1)}}, Edges{{0, q(1)}}}},
                                  {{{1, 1}, {3, 1}}, {{0, 0}, {1, 1}}});
  const LfpResult r = solve_lfp(m);
  CHECK(r.path == "zero-end-component");
  CHECK(r.value == ExtendedValue::exact(q(0)));
  CHECK(r.strategy.choice == std::vector<LetterId>{1, 0});
  const auto ecs = maximal_end_components(m, [&](StateId s, LetterId a) {
    return m.cost1[m.index(s, a)] == 0 && m.cost2[m.index(s, a)] == 0;
  });
  REQUIRE(ecs.size() == 1);
  CHECK(ecs[0].states == std::vector<StateId>{1});
}

TEST_CASE("value is infinity when no strategy collects denominator cost") {
  const SynthesisMDP m = make_mdp({{Edges{{0, q(1)}}, Edges{{0, q(1)}}}}, {{{1, 0}, {2, 0}}});
  const LfpResult r = solve_lfp(m);
  CHECK(r.path == "zero-denominator");
  CHECK(r.value.is_infinite());
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("zero-denominator classes are avoided with a warning") {
  // Action 0 of state 0 loops with (1,0); action 1 loops with (1,1).
  const SynthesisMDP m = make_mdp({{Edges{{0, q(1)}}, Edges{{0, q(1)}}}}, {{{1, 0}, {1, 1}}});
  const LfpResult r = solve_lfp(m);
  CHECK(r.value == ExtendedValue::exact(q(1)));
  CHECK(r.strategy.choice == std::vector<LetterId>{1});
  CHECK(r.initial_path == "cesaro+max-denominator");
  bool warned = false;
  for (const auto& w : r.warnings) warned = warned || w.find("zero denominator") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("iteration cap is reported as a numerical error") {
  const SynthesisMDP m = two_client_pruned();
  LfpOptions opt;
  opt.max_iterations = 1;
  CHECK_THROWS_AS(solve_lfp(m, opt), NumericalError);
}

TEST_CASE("almost-sure reachability") {
  // 0 -a0-> {0: 1/2, 1: 1/2}; 0 -a1-> 2 (trap); 1 target; 2 absorbing.
  const SynthesisMDP m = make_mdp(
      {{Edges{{0, q(1, 2)}, {1, q(1, 2)}}, Edges{{2, q(1)}}}, {Edges{{1, q(1)}}, Edges{}}, {Edges{{2, q(1)}}, Edges{}}},
      {{{0, 0}, {0, 0}}, {{0, 0}, {0, 0}}, {{0, 0}, {0, 0}}});
  const ReachStrategy r = almost_sure_reach(m, {false, true, false}, [](StateId, LetterId) { return true; });
  CHECK(r.winning == std::vector<bool>{true, true, false});
  CHECK(r.choice[0] == 0);
  CHECK(r.choice[1] == kNoLetter);
}
