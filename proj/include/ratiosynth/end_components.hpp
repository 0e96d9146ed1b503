#pragma once

#include "ratiosynth/product.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace ratiosynth {

inline constexpr LetterId kNoLetter = std::numeric_limits<LetterId>::max();

using ActionFilter = std::function<bool(StateId, LetterId)>;

/// A set of states with, per state, the actions that keep the run inside the
/// set; the induced graph is strongly connected.
struct EndComponent {
  std::vector<StateId> states;                 // ascending
  std::vector<std::vector<LetterId>> actions;  // parallel to states
};

/// Maximal end components of the sub-MDP using only enabled actions accepted
/// by `allowed`. Ordered by smallest state.
std::vector<EndComponent> maximal_end_components(const SynthesisMDP& mdp, const ActionFilter& allowed);

struct ReachStrategy {
  std::vector<bool> winning;      // target reachable with probability 1
  std::vector<LetterId> choice;   // kNoLetter on target and losing states
};

/// Almost-sure reachability of `target` using actions accepted by `allowed`.
/// Choices are the lowest action that stays winning and makes progress.
ReachStrategy almost_sure_reach(const SynthesisMDP& mdp, const std::vector<bool>& target,
                                const ActionFilter& allowed);

}  // namespace ratiosynth
