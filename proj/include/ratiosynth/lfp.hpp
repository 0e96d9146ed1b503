#pragma once

#include "ratiosynth/extended_value.hpp"
#include "ratiosynth/lp.hpp"
#include "ratiosynth/mc_analysis.hpp"
#include "ratiosynth/product.hpp"

#include <string>
#include <vector>

namespace ratiosynth {

/// The fractional program over occupation measures x(s,a) of an MDP:
/// minimize (c1.x)/(c2.x) subject to sum x = 1 and flow balance per state.
struct LfpDescription {
  std::vector<StateId> var_state;
  std::vector<LetterId> var_action;
  std::vector<double> c1;
  std::vector<double> c2;
  /// Row 0 is the normalization, row 1+s the balance of state s. The
  /// objective is left empty.
  LinearProgram constraints;

  std::size_t num_vars() const { return var_state.size(); }
};

LfpDescription build_lfp(const SynthesisMDP& mdp);

struct OccupationMeasure {
  std::vector<StateId> state;
  std::vector<LetterId> action;
  std::vector<double> x;

  double at(StateId s, LetterId a) const;
};

struct InitialPoint {
  OccupationMeasure measure;
  /// "cesaro" when the lowest-action chain was unichain, otherwise "feasibility-lp".
  std::string path;
};

/// Occupation measure of the strategy taking the lowest enabled action
/// everywhere; falls back to a feasibility LP when that chain is multichain.
InitialPoint initial_feasible(const SynthesisMDP& mdp, const LfpDescription& lfp, const LpSolver& solver);

struct LfpOptions {
  double epsilon = 1e-9;
  std::size_t max_iterations = 100;
  double zero_tolerance = 1e-9;
  /// Skip the MultichainSuspect refusal.
  bool allow_multichain = false;
  AnalysisOptions analysis = AnalysisOptions::from_environment();
  /// Backend; RevisedSimplex when null.
  const LpSolver* solver = nullptr;
};

struct LfpResult {
  ExtendedValue value = ExtendedValue::infinity();
  OccupationMeasure measure;
  Strategy strategy;
  std::size_t iterations = 0;
  std::vector<double> history;    // g_0 = f(x_0), then f(x_n)
  std::vector<double> lp_optima;  // optimum of each parametric LP
  std::vector<std::string> warnings;
  /// How the result was reached: "iteration", "zero-end-component" or
  /// "zero-denominator".
  std::string path;
  std::string initial_path;
  SolveMode mode = SolveMode::Exact;
};

/// f(x) = (c1.x)/(c2.x) with the 0 and Infinity conventions of expected_ratio.
ExtendedValue lfp_objective(const LfpDescription& lfp, const std::vector<double>& x, double zero_tolerance = 1e-9);

/// Isbell-Marlow iteration on a pruned MDP. Throws MultichainSuspect,
/// NumericalError (including non-convergence) and ConsistencyError.
LfpResult solve_lfp(const SynthesisMDP& mdp, const LfpOptions& options = {});

/// Action of maximal x in every state with positive mass; the lowest enabled
/// action elsewhere. With `basic` set, two positive actions in one state
/// raise ConsistencyError; otherwise the larger one wins.
Strategy extract_strategy(const OccupationMeasure& measure, const SynthesisMDP& mdp, bool basic = true,
                          double zero_tolerance = 1e-9);

}  // namespace ratiosynth
