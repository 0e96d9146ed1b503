#pragma once

#include "ratiosynth/extended_value.hpp"
#include "ratiosynth/graph.hpp"
#include "ratiosynth/product.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ratiosynth {

/// Recurrent classes are the bottom strongly connected components of the
/// positive-probability graph; everything else is transient.
struct ChainStructure {
  std::vector<std::vector<StateId>> recurrent_classes;
  std::vector<StateId> transient;
  bool unichain = false;
};

class MultichainError : public std::runtime_error {
 public:
  explicit MultichainError(ChainStructure structure);
  const ChainStructure& structure() const { return structure_; }

 private:
  ChainStructure structure_;
};

enum class SolveMode { Exact, Float };

const char* to_string(SolveMode mode);

struct AnalysisOptions {
  /// Chains with at most this many states are solved in exact arithmetic.
  std::size_t exact_threshold = 2000;

  /// Defaults, with the threshold taken from RATIOSYNTH_EXACT_THRESHOLD when set.
  static AnalysisOptions from_environment();
};

/// Cesaro limit p* of a unichain chain: the stationary distribution of its
/// recurrent class, zero on transient states.
struct CesaroDistribution {
  SolveMode mode = SolveMode::Exact;
  std::vector<Rational> exact;  // exact mode only
  std::vector<double> weights;
  /// max_s |(pP)(s) - p(s)|, zero in exact mode.
  double residual = 0.0;
};

Graph chain_graph(const CostMarkovChain& chain);

ChainStructure classify(const CostMarkovChain& chain);

/// Throws MultichainError for chains with several recurrent classes.
CesaroDistribution cesaro_limit(const CostMarkovChain& chain, const AnalysisOptions& options = {});

/// Long-run ratio of a unichain chain. With N = sum p*(s) cost1(s) and
/// D = sum p*(s) cost2(s): 0 when N = 0, Infinity when D = 0 < N, N/D otherwise.
ExtendedValue expected_ratio(const CostMarkovChain& chain, const AnalysisOptions& options = {});

/// Zero test of the expected ratio that also covers multichain chains:
/// true iff cost1 vanishes on every recurrent class.
bool expected_ratio_is_zero(const CostMarkovChain& chain);

/// Same, using an already computed Cesaro limit.
ExtendedValue expected_ratio(const CostMarkovChain& chain, const CesaroDistribution& limit);

struct SatisfactionReport {
  bool satisfied = false;
  /// The satisfaction chain had several recurrent classes; the zero test was
  /// then applied to each class (all of them are reached with positive
  /// probability, so the expected ratio is 0 iff every class value is 0).
  bool multichain = false;
  std::size_t chain_states = 0;
};

/// Almost-sure satisfaction of the safety automaton: decided by the
/// ratio-value-zero criterion on the satisfaction chain and cross-checked
/// against a direct search for reachable unsafe product states.
SatisfactionReport check_satisfaction_report(const FiniteStateSystem& sys, const CostAutomaton& qual,
                                             const LabeledMDP& env, const AnalysisOptions& options = {});
bool check_satisfaction(const FiniteStateSystem& sys, const CostAutomaton& qual, const LabeledMDP& env,
                        const AnalysisOptions& options = {});

/// Plain graph search: can the joint run of system and environment reach a
/// non-safe automaton state with positive probability?
bool unsafe_reachable(const FiniteStateSystem& sys, const CostAutomaton& qual, const LabeledMDP& env);

struct SystemValueReport {
  SatisfactionReport satisfaction;
  ExtendedValue value = ExtendedValue::infinity();
  std::size_t value_chain_states = 0;
  SolveMode mode = SolveMode::Exact;
};

SystemValueReport evaluate_system(const FiniteStateSystem& sys, const CostAutomaton& qual,
                                  const CostAutomaton& quant, const LabeledMDP& env,
                                  const AnalysisOptions& options = {});

/// Infinity when the qualitative automaton is not satisfied almost surely,
/// otherwise the expected ratio of the value chain.
ExtendedValue system_value(const FiniteStateSystem& sys, const CostAutomaton& qual,
                           const CostAutomaton& quant, const LabeledMDP& env,
                           const AnalysisOptions& options = {});

}  // namespace ratiosynth
