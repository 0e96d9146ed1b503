#include "ratiosynth/lfp.hpp"

#include "ratiosynth/end_components.hpp"
#include "ratiosynth/errors.hpp"
#include "ratiosynth/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ratiosynth {

LfpDescription build_lfp(const SynthesisMDP& mdp) {
  LfpDescription out;
  const std::size_t n = mdp.size();
  for (StateId s = 0; s < n; ++s)
    for (LetterId a : mdp.enabled_actions(s)) {
      out.var_state.push_back(s);
      out.var_action.push_back(a);
      out.c1.push_back(mdp.cost1[mdp.index(s, a)].get_d());
      out.c2.push_back(mdp.cost2[mdp.index(s, a)].get_d());
    }
  const std::size_t k = out.num_vars();
  LinearProgram& lp = out.constraints;
  lp.num_vars = k;
  lp.objective.assign(k, 0.0);
  std::vector<std::pair<std::size_t, double>> norm;
  for (std::size_t j = 0; j < k; ++j) norm.emplace_back(j, 1.0);
  lp.add_row(std::move(norm), 1.0);
  // Balance of state t: outflow sum_a x(t,a) minus inflow sum x(s,a) P(s,a,t).
  std::vector<std::vector<std::pair<std::size_t, double>>> balance(n);
  for (std::size_t j = 0; j < k; ++j) {
    balance[out.var_state[j]].emplace_back(j, 1.0);
    for (const auto& [t, p] : mdp.at(out.var_state[j], out.var_action[j]).entries)
      balance[t].emplace_back(j, -p.get_d());
  }
  for (auto& row : balance) lp.add_row(std::move(row), 0.0);
  return out;
}

double OccupationMeasure::at(StateId s, LetterId a) const {
  for (std::size_t j = 0; j < x.size(); ++j)
    if (state[j] == s && action[j] == a) return x[j];
  return 0.0;
}

ExtendedValue lfp_objective(const LfpDescription& lfp, const std::vector<double>& x, double zero_tolerance) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    num += lfp.c1[j] * x[j];
    den += lfp.c2[j] * x[j];
  }
  if (num <= zero_tolerance) return ExtendedValue::approximate(0.0);
  if (den <= zero_tolerance) return ExtendedValue::infinity();
  return ExtendedValue::approximate(num / den);
}

namespace {

OccupationMeasure empty_measure(const LfpDescription& lfp) {
  OccupationMeasure m;
  m.state = lfp.var_state;
  m.action = lfp.var_action;
  m.x.assign(lfp.num_vars(), 0.0);
  return m;
}

// Occupation measure of a pure strategy whose induced chain is unichain.
OccupationMeasure strategy_measure(const SynthesisMDP& mdp, const LfpDescription& lfp, const Strategy& strat,
                                   const AnalysisOptions& options) {
  const CostMarkovChain chain = induced_chain(mdp, strat);
  const CesaroDistribution limit = cesaro_limit(chain, options);
  OccupationMeasure m = empty_measure(lfp);
  std::vector<double> p(mdp.size(), 0.0);
  for (StateId i = 0; i < chain.size(); ++i) p[chain.origin[i][0]] = limit.weights[i];
  for (std::size_t j = 0; j < lfp.num_vars(); ++j)
    if (strat.choice[lfp.var_state[j]] == lfp.var_action[j]) m.x[j] = p[lfp.var_state[j]];
  return m;
}

Strategy lowest_actions(const SynthesisMDP& mdp) {
  Strategy s;
  for (StateId st = 0; st < mdp.size(); ++st) {
    const auto acts = mdp.enabled_actions(st);
    if (acts.empty()) throw InputError("state " + mdp.names[st] + " has no enabled action");
    s.choice.push_back(acts.front());
  }
  return s;
}

std::vector<double> solve_or_throw(const LpSolver& solver, const LinearProgram& lp, double* objective,
                                   const char* what) {
  const LpSolution sol = solver.solve(lp);
  if (sol.status != LpStatus::Optimal)
    throw NumericalError(std::string(what) + ": LP reported " + to_string(sol.status));
  if (objective) *objective = sol.objective_value;
  return sol.x;
}

struct StrategyValue {
  ExtendedValue value = ExtendedValue::infinity();
  SolveMode mode = SolveMode::Exact;
};

// Value of the chain induced by `strat`. A multichain chain is accepted
// only when every recurrent class has zero numerator cost.
StrategyValue strategy_value(const SynthesisMDP& mdp, const Strategy& strat, const AnalysisOptions& options) {
  const CostMarkovChain chain = induced_chain(mdp, strat);
  ChainStructure structure = classify(chain);
  StrategyValue out;
  if (!structure.unichain) {
    for (const auto& cls : structure.recurrent_classes)
      for (StateId s : cls)
        if (chain.cost1[s] != 0) throw MultichainError(std::move(structure));
    out.value = ExtendedValue::exact(Rational(0));
    return out;
  }
  const CesaroDistribution limit = cesaro_limit(chain, options);
  out.mode = limit.mode;
  out.value = expected_ratio(chain, limit);
  return out;
}

std::string state_list(const SynthesisMDP& mdp, const std::vector<StateId>& states) {
  std::string out;
  for (std::size_t i = 0; i < states.size() && i < 4; ++i) out += (i ? " " : "") + mdp.names[states[i]];
  if (states.size() > 4) out += " ...";
  return out;
}

bool zero_cost(const SynthesisMDP& mdp, StateId s, LetterId a) {
  return mdp.cost1[mdp.index(s, a)] == 0 && mdp.cost2[mdp.index(s, a)] == 0;
}

// Strategy reaching `target` almost surely, then staying inside the given
// end-component actions. Empty when the initial state is not winning.
std::optional<Strategy> reach_and_stay(const SynthesisMDP& mdp, const std::vector<EndComponent>& ecs,
                                       const std::vector<bool>& target) {
  std::vector<const std::vector<LetterId>*> ec_actions(mdp.size(), nullptr);
  for (const auto& ec : ecs)
    for (std::size_t i = 0; i < ec.states.size(); ++i) ec_actions[ec.states[i]] = &ec.actions[i];
  const ActionFilter allowed = [&](StateId s, LetterId a) {
    if (!ec_actions[s]) return true;
    return std::find(ec_actions[s]->begin(), ec_actions[s]->end(), a) != ec_actions[s]->end();
  };
  const ReachStrategy reach = almost_sure_reach(mdp, target, allowed);
  if (!reach.winning[mdp.initial]) return std::nullopt;
  Strategy strat = lowest_actions(mdp);
  for (StateId s = 0; s < mdp.size(); ++s) {
    if (reach.choice[s] != kNoLetter) strat.choice[s] = reach.choice[s];
    else if (target[s]) strat.choice[s] = ec_actions[s]->front();
  }
  return strat;
}

}  // namespace

InitialPoint initial_feasible(const SynthesisMDP& mdp, const LfpDescription& lfp, const LpSolver& solver) {
  InitialPoint out;
  const Strategy strat = lowest_actions(mdp);
  try {
    out.measure = strategy_measure(mdp, lfp, strat, AnalysisOptions::from_environment());
    out.path = "cesaro";
  } catch (const MultichainError&) {
    out.measure = empty_measure(lfp);
    out.measure.x = solve_or_throw(solver, lfp.constraints, nullptr, "feasibility");
    out.path = "feasibility-lp";
  }
  const double residual = lp_residual(lfp.constraints, out.measure.x);
  if (residual > 1e-9) {
    std::ostringstream os;
    os << "initial occupation measure violates the constraints by " << residual;
    throw NumericalError(os.str());
  }
  return out;
}

Strategy extract_strategy(const OccupationMeasure& measure, const SynthesisMDP& mdp, bool basic,
                          double zero_tolerance) {
  Strategy strat = lowest_actions(mdp);
  std::vector<double> best(mdp.size(), 0.0);
  std::vector<int> positive(mdp.size(), 0);
  for (std::size_t j = 0; j < measure.x.size(); ++j) {
    const StateId s = measure.state[j];
    const double v = measure.x[j];
    if (v <= zero_tolerance) continue;
    ++positive[s];
    if (v > best[s]) {
      best[s] = v;
      strat.choice[s] = measure.action[j];
    }
  }
  if (basic)
    for (StateId s = 0; s < mdp.size(); ++s)
      if (positive[s] > 1)
        throw ConsistencyError("basic solution has " + std::to_string(positive[s]) +
                               " positive actions in state " + mdp.names[s]);
  return strat;
}

LfpResult solve_lfp(const SynthesisMDP& mdp, const LfpOptions& options) {
  if (mdp.size() == 0) throw InputError("empty MDP");
  const RevisedSimplex default_solver;
  const LpSolver& solver = options.solver ? *options.solver : default_solver;
  const LfpDescription lfp = build_lfp(mdp);
  LfpResult result;

  // Zero-cost end components give value 0 if they can be forced.
  const auto zero_ecs =
      maximal_end_components(mdp, [&](StateId s, LetterId a) { return zero_cost(mdp, s, a); });
  if (!zero_ecs.empty()) {
    std::optional<Strategy> strat;
    for (const auto& ec : zero_ecs) {
      std::vector<bool> target(mdp.size(), false);
      target[ec.states.front()] = true;
      if ((strat = reach_and_stay(mdp, {ec}, target))) break;
    }
    if (!strat) {
      std::vector<bool> target(mdp.size(), false);
      for (const auto& ec : zero_ecs)
        for (StateId s : ec.states) target[s] = true;
      strat = reach_and_stay(mdp, zero_ecs, target);
      if (strat) result.warnings.push_back("value 0 is attained only by a strategy with several recurrent classes");
    }
    if (strat) {
      result.strategy = *strat;
      result.path = "zero-end-component";
      result.value = ExtendedValue::exact(Rational(0));
      result.history.push_back(0.0);
      try {
        result.measure = strategy_measure(mdp, lfp, *strat, options.analysis);
      } catch (const MultichainError&) {
        result.measure = empty_measure(lfp);
      }
      const StrategyValue check = strategy_value(mdp, *strat, options.analysis);
      if (check.value != ExtendedValue::exact(Rational(0)))
        throw ConsistencyError("zero end-component strategy has value " + check.value.to_string());
      return result;
    }
    result.warnings.push_back("zero-cost end components exist (" + state_list(mdp, zero_ecs.front().states) +
                              ") but cannot be reached almost surely");
  }

  const auto zero_den_ecs = maximal_end_components(
      mdp, [&](StateId s, LetterId a) { return mdp.cost2[mdp.index(s, a)] == 0; });
  for (const auto& ec : zero_den_ecs)
    result.warnings.push_back("strategies confined to {" + state_list(mdp, ec.states) +
                              "} have zero denominator and positive numerator; the minimization avoids them");

  // Necessary unichain condition over the union graph of all actions.
  {
    Graph g(mdp.size());
    for (StateId s = 0; s < mdp.size(); ++s)
      for (LetterId a : mdp.enabled_actions(s))
        for (const auto& [t, p] : mdp.at(s, a).entries)
          if (p > 0) g[s].push_back(t);
    const std::size_t bottoms = bottom_components(g).size();
    if (bottoms > 1) {
      const std::string msg =
          "MDP transition graph has " + std::to_string(bottoms) + " bottom components; it may be multichain";
      if (!options.allow_multichain) throw MultichainSuspect(msg, bottoms);
      result.warnings.push_back(msg + " (override in effect)");
    }
  }

  InitialPoint init = initial_feasible(mdp, lfp, solver);
  result.initial_path = init.path;
  std::vector<double> x = std::move(init.measure.x);
  ExtendedValue f = lfp_objective(lfp, x, options.zero_tolerance);
  if (f.is_infinite()) {
    LinearProgram lp = lfp.constraints;
    for (std::size_t j = 0; j < lfp.num_vars(); ++j) lp.objective[j] = -lfp.c2[j];
    double opt = 0.0;
    std::vector<double> y = solve_or_throw(solver, lp, &opt, "maximize denominator");
    if (-opt <= options.zero_tolerance) {
      result.path = "zero-denominator";
      result.value = ExtendedValue::infinity();
      result.strategy = lowest_actions(mdp);
      result.measure = empty_measure(lfp);
      result.measure.x = std::move(y);
      result.warnings.push_back("every strategy has zero denominator cost in the long run; value is infinity");
      return result;
    }
    x = std::move(y);
    result.initial_path += "+max-denominator";
    f = lfp_objective(lfp, x, options.zero_tolerance);
  }

  result.path = "iteration";
  double g = f.to_double();
  result.history.push_back(g);
  bool converged = false;
  while (!converged) {
    if (result.iterations >= options.max_iterations)
      throw NumericalError("fractional program did not converge within " + std::to_string(options.max_iterations) +
                           " iterations");
    LinearProgram lp = lfp.constraints;
    for (std::size_t j = 0; j < lfp.num_vars(); ++j) lp.objective[j] = lfp.c1[j] - g * lfp.c2[j];
    double opt = 0.0;
    std::vector<double> y = solve_or_throw(solver, lp, &opt, "parametric step");
    ++result.iterations;
    result.lp_optima.push_back(opt);
    const ExtendedValue fy = lfp_objective(lfp, y, options.zero_tolerance);
    if (fy.is_infinite() || fy.to_double() > g) {
      // No strict improvement: the current point is optimal up to noise.
      converged = true;
      continue;
    }
    const double fn = fy.to_double();
    converged = std::abs(g - fn) <= options.epsilon * (1.0 + std::abs(fn));
    x = std::move(y);
    g = fn;
    result.history.push_back(g);
  }

  result.measure = empty_measure(lfp);
  result.measure.x = x;
  const bool basic = result.initial_path == "cesaro" || result.iterations > 0;
  result.strategy = extract_strategy(result.measure, mdp, basic && !options.allow_multichain, options.zero_tolerance);

  if (options.allow_multichain) {
    // Zero-mass states may lead into another recurrent class; send them
    // into the support of the measure instead.
    std::vector<bool> support(mdp.size(), false);
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] > options.zero_tolerance) support[lfp.var_state[j]] = true;
    const ReachStrategy reach = almost_sure_reach(mdp, support, [](StateId, LetterId) { return true; });
    bool changed = false;
    for (StateId s = 0; s < mdp.size(); ++s)
      if (!support[s] && reach.choice[s] != kNoLetter && reach.choice[s] != result.strategy.choice[s]) {
        result.strategy.choice[s] = reach.choice[s];
        changed = true;
      }
    if (changed) result.warnings.push_back("transient choices redirected towards the optimal recurrent class");
  }
  const StrategyValue check = strategy_value(mdp, result.strategy, options.analysis);
  result.mode = check.mode;
  const double analytic = check.value.to_double();
  if (check.value.is_infinite() || std::abs(analytic - g) > 1e-6 * std::max(1.0, std::abs(g))) {
    std::ostringstream os;
    os << "extracted strategy has value " << check.value.to_string() << " but the fractional program reached " << g;
    throw ConsistencyError(os.str());
  }
  result.value = check.value;
  return result;
}

}  // namespace ratiosynth
