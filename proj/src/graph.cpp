#include "ratiosynth/graph.hpp"

#include <algorithm>

namespace ratiosynth {

std::vector<std::vector<StateId>> strongly_connected_components(const Graph& graph) {
  const std::size_t n = graph.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited);
  std::vector<std::size_t> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<StateId> stack;
  std::vector<std::vector<StateId>> components;
  std::size_t counter = 0;

  struct Frame {
    StateId vertex;
    std::size_t next_edge;
  };
  std::vector<Frame> call;
  for (StateId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& succ = graph[f.vertex];
      if (f.next_edge < succ.size()) {
        const StateId w = succ[f.next_edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.vertex] = std::min(low[f.vertex], index[w]);
        }
        continue;
      }
      const StateId v = f.vertex;
      call.pop_back();
      if (!call.empty()) low[call.back().vertex] = std::min(low[call.back().vertex], low[v]);
      if (low[v] == index[v]) {
        std::vector<StateId> component;
        StateId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != v);
        components.push_back(std::move(component));
      }
    }
  }
  return components;
}

std::vector<std::vector<StateId>> bottom_components(const Graph& graph) {
  auto components = strongly_connected_components(graph);
  std::vector<std::size_t> owner(graph.size());
  for (std::size_t c = 0; c < components.size(); ++c)
    for (StateId v : components[c]) owner[v] = c;
  std::vector<std::vector<StateId>> bottoms;
  for (std::size_t c = 0; c < components.size(); ++c) {
    bool closed = true;
    for (StateId v : components[c])
      for (StateId w : graph[v])
        if (owner[w] != c) closed = false;
    if (!closed) continue;
    std::sort(components[c].begin(), components[c].end());
    bottoms.push_back(std::move(components[c]));
  }
  std::sort(bottoms.begin(), bottoms.end());
  return bottoms;
}

std::vector<bool> reachable_from(const Graph& graph, StateId source) {
  std::vector<bool> seen(graph.size(), false);
  std::vector<StateId> todo{source};
  seen[source] = true;
  while (!todo.empty()) {
    const StateId v = todo.back();
    todo.pop_back();
    for (StateId w : graph[v])
      if (!seen[w]) {
        seen[w] = true;
        todo.push_back(w);
      }
  }
  return seen;
}

}  // namespace ratiosynth
