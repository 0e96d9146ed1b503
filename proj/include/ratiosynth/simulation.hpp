#pragma once

#include "ratiosynth/product.hpp"

#include <cstdint>
#include <vector>

namespace ratiosynth {

/// xoshiro256** seeded through splitmix64.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t s_[4];
};

/// Stream for run `run` of a simulation seeded with `seed`.
Xoshiro256 run_stream(std::uint64_t seed, std::uint64_t run);

struct SimConfig {
  std::uint64_t seed = 1;
  std::uint64_t horizon = 1'000'000;
  std::uint64_t burn_in = 1'000;
  std::uint32_t runs = 32;
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;

  /// Throws InputError unless burn_in < horizon and runs >= 1.
  void check() const;
};

struct SimEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double sample_sd = 0.0;
  std::vector<double> per_run;
  /// Fraction of window steps spent in each state, averaged over runs.
  std::vector<double> visit_fractions;
};

/// Per run: a trajectory of `horizon` states from the initial state; the
/// value is sum c1 / (1 + sum c2) over steps burn_in .. horizon-1.
SimEstimate simulate_chain(const CostMarkovChain& chain, const SimConfig& cfg);

/// Same as simulate_chain on induced_chain(mdp, strat), with visit
/// fractions indexed by MDP state. Throws InputError on a disabled action.
SimEstimate simulate_mdp(const SynthesisMDP& mdp, const Strategy& strat, const SimConfig& cfg);

struct LadderPoint {
  std::uint64_t horizon;
  double mean;
  double std_error;
};

/// Estimates at increasing horizons (burn-in kept below each horizon).
std::vector<LadderPoint> horizon_ladder(const CostMarkovChain& chain, SimConfig cfg,
                                        const std::vector<std::uint64_t>& horizons);

/// True when the ladder means strictly increase, the empirical sign of a
/// diverging (infinite) ratio.
bool ladder_grows(const std::vector<LadderPoint>& ladder);

}  // namespace ratiosynth
