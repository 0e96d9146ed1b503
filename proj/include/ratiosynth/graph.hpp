#pragma once

#include "ratiosynth/model.hpp"

#include <vector>

namespace ratiosynth {

using Graph = std::vector<std::vector<StateId>>;

/// Tarjan's algorithm (iterative). Components come out in reverse
/// topological order: a component is emitted before any component that
/// can reach it.
std::vector<std::vector<StateId>> strongly_connected_components(const Graph& graph);

/// Components without edges leaving them, each sorted ascending, ordered by
/// their smallest state.
std::vector<std::vector<StateId>> bottom_components(const Graph& graph);

std::vector<bool> reachable_from(const Graph& graph, StateId source);

}  // namespace ratiosynth
