#include "ratiosynth/end_components.hpp"

#include "ratiosynth/graph.hpp"

#include <algorithm>
#include <map>

namespace ratiosynth {

std::vector<EndComponent> maximal_end_components(const SynthesisMDP& mdp, const ActionFilter& allowed) {
  const std::size_t n = mdp.size();
  std::vector<std::vector<LetterId>> acts(n);
  std::vector<bool> alive(n, false);
  for (StateId s = 0; s < n; ++s) {
    for (LetterId a : mdp.enabled_actions(s))
      if (allowed(s, a)) acts[s].push_back(a);
    alive[s] = !acts[s].empty();
  }
  std::vector<std::size_t> comp(n, 0);
  while (true) {
    Graph g(n);
    for (StateId s = 0; s < n; ++s) {
      if (!alive[s]) continue;
      for (LetterId a : acts[s])
        for (const auto& [t, p] : mdp.at(s, a).entries)
          if (p > 0) g[s].push_back(t);
    }
    const auto sccs = strongly_connected_components(g);
    for (std::size_t c = 0; c < sccs.size(); ++c)
      for (StateId s : sccs[c]) comp[s] = c;
    bool changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (!alive[s]) continue;
      std::vector<LetterId> keep;
      for (LetterId a : acts[s]) {
        bool inside = true;
        for (const auto& [t, p] : mdp.at(s, a).entries)
          if (p > 0 && (!alive[t] || comp[t] != comp[s])) inside = false;
        if (inside) keep.push_back(a);
      }
      if (keep.size() != acts[s].size()) {
        changed = true;
        acts[s] = std::move(keep);
        if (acts[s].empty()) alive[s] = false;
      }
    }
    if (!changed) break;
  }
  std::map<std::size_t, EndComponent> by_comp;
  for (StateId s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    auto& ec = by_comp[comp[s]];
    ec.states.push_back(s);
    ec.actions.push_back(acts[s]);
  }
  std::vector<EndComponent> out;
  for (auto& [c, ec] : by_comp) out.push_back(std::move(ec));
  std::sort(out.begin(), out.end(),
            [](const EndComponent& x, const EndComponent& y) { return x.states.front() < y.states.front(); });
  return out;
}

ReachStrategy almost_sure_reach(const SynthesisMDP& mdp, const std::vector<bool>& target,
                                const ActionFilter& allowed) {
  const std::size_t n = mdp.size();
  std::vector<bool> region(n, true);
  ReachStrategy out;
  while (true) {
    auto stays = [&](StateId s, LetterId a) {
      if (!mdp.enabled(s, a) || !allowed(s, a)) return false;
      for (const auto& [t, p] : mdp.at(s, a).entries)
        if (p > 0 && !region[t]) return false;
      return true;
    };
    std::vector<bool> win(n, false);
    std::vector<LetterId> choice(n, kNoLetter);
    for (StateId s = 0; s < n; ++s) win[s] = target[s] && region[s];
    // Rounds of backward search; a state joins with the lowest action that
    // stays in the region and hits a state won in an earlier round.
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<StateId> joined;
      for (StateId s = 0; s < n; ++s) {
        if (win[s] || !region[s]) continue;
        for (LetterId a = 0; a < mdp.action_count(); ++a) {
          if (!stays(s, a)) continue;
          bool hits = false;
          for (const auto& [t, p] : mdp.at(s, a).entries)
            if (p > 0 && win[t]) hits = true;
          if (hits) {
            choice[s] = a;
            joined.push_back(s);
            break;
          }
        }
      }
      for (StateId s : joined) win[s] = true;
      grew = !joined.empty();
    }
    if (win == region) {
      out.winning = std::move(win);
      out.choice = std::move(choice);
      return out;
    }
    region = std::move(win);
  }
}

}  // namespace ratiosynth
