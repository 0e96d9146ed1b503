#include "ratiosynth/simulation.hpp"

#include "ratiosynth/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace ratiosynth {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// Flattened chain: successors with cumulative probabilities.
struct Compact {
  std::vector<std::size_t> start;  // size n + 1
  std::vector<std::uint32_t> target;
  std::vector<double> cumulative;
  std::vector<double> c1;
  std::vector<double> c2;
  std::uint32_t initial = 0;

  void add_state(const Distribution& d, double cost1, double cost2) {
    if (start.empty()) start.push_back(0);
    double acc = 0.0;
    for (const auto& [t, p] : d.entries) {
      acc += p.get_d();
      target.push_back(t);
      cumulative.push_back(acc);
    }
    start.push_back(target.size());
    c1.push_back(cost1);
    c2.push_back(cost2);
  }
  std::size_t size() const { return c1.size(); }
};

struct RunResult {
  double value = 0.0;
  std::vector<double> visits;
};

RunResult run_once(const Compact& chain, const SimConfig& cfg, std::uint64_t run) {
  Xoshiro256 rng = run_stream(cfg.seed, run);
  std::vector<std::uint64_t> counts(chain.size(), 0);
  double sum1 = 0.0;
  double sum2 = 0.0;
  std::uint32_t s = chain.initial;
  for (std::uint64_t i = 0; i < cfg.horizon; ++i) {
    if (i >= cfg.burn_in) {
      sum1 += chain.c1[s];
      sum2 += chain.c2[s];
      ++counts[s];
    }
    const std::size_t lo = chain.start[s];
    const std::size_t hi = chain.start[s + 1];
    const double u = rng.uniform();
    std::size_t k = lo;
    while (k + 1 < hi && u >= chain.cumulative[k]) ++k;
    s = chain.target[k];
  }
  RunResult r;
  r.value = sum1 / (1.0 + sum2);
  const double window = static_cast<double>(cfg.horizon - cfg.burn_in);
  r.visits.resize(chain.size());
  for (std::size_t j = 0; j < chain.size(); ++j) r.visits[j] = static_cast<double>(counts[j]) / window;
  return r;
}

SimEstimate simulate_compact(const Compact& chain, const SimConfig& cfg) {
  cfg.check();
  std::vector<RunResult> runs(cfg.runs);
  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, cfg.runs);
  std::atomic<std::uint32_t> next{0};
  auto work = [&] {
    for (std::uint32_t r; (r = next.fetch_add(1)) < cfg.runs;) runs[r] = run_once(chain, cfg, r);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  SimEstimate est;
  est.visit_fractions.assign(chain.size(), 0.0);
  for (const auto& r : runs) {
    est.per_run.push_back(r.value);
    est.mean += r.value;
    for (std::size_t j = 0; j < chain.size(); ++j) est.visit_fractions[j] += r.visits[j];
  }
  const double k = static_cast<double>(cfg.runs);
  est.mean /= k;
  for (double& v : est.visit_fractions) v /= k;
  if (cfg.runs > 1) {
    double ss = 0.0;
    for (double v : est.per_run) ss += (v - est.mean) * (v - est.mean);
    est.sample_sd = std::sqrt(ss / (k - 1.0));
    est.std_error = est.sample_sd / std::sqrt(k);
  }
  return est;
}

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

Xoshiro256 run_stream(std::uint64_t seed, std::uint64_t run) {
  std::uint64_t sm = seed;
  const std::uint64_t a = splitmix64(sm);
  sm = run;
  const std::uint64_t b = splitmix64(sm);
  return Xoshiro256(a ^ rotl(b, 17));
}

void SimConfig::check() const {
  if (burn_in >= horizon) throw InputError("burn-in must be smaller than the horizon");
  if (runs == 0) throw InputError("at least one run is required");
}

SimEstimate simulate_chain(const CostMarkovChain& chain, const SimConfig& cfg) {
  Compact c;
  c.initial = chain.initial;
  for (StateId s = 0; s < chain.size(); ++s)
    c.add_state(chain.trans[s], chain.cost1[s].get_d(), chain.cost2[s].get_d());
  return simulate_compact(c, cfg);
}

SimEstimate simulate_mdp(const SynthesisMDP& mdp, const Strategy& strat, const SimConfig& cfg) {
  if (strat.choice.size() != mdp.size()) throw InputError("strategy size differs from MDP size");
  Compact c;
  c.initial = mdp.initial;
  for (StateId s = 0; s < mdp.size(); ++s) {
    const LetterId a = strat.choice[s];
    if (a >= mdp.action_count() || !mdp.enabled(s, a))
      throw InputError("strategy picks a disabled action in " + mdp.names[s]);
    c.add_state(mdp.at(s, a), mdp.cost1[mdp.index(s, a)].get_d(), mdp.cost2[mdp.index(s, a)].get_d());
  }
  return simulate_compact(c, cfg);
}

std::vector<LadderPoint> horizon_ladder(const CostMarkovChain& chain, SimConfig cfg,
                                        const std::vector<std::uint64_t>& horizons) {
  std::vector<LadderPoint> out;
  const std::uint64_t burn = cfg.burn_in;
  for (std::uint64_t h : horizons) {
    cfg.horizon = h;
    cfg.burn_in = std::min(burn, h / 2);
    const SimEstimate est = simulate_chain(chain, cfg);
    out.push_back({h, est.mean, est.std_error});
  }
  return out;
}

bool ladder_grows(const std::vector<LadderPoint>& ladder) {
  if (ladder.size() < 2) return false;
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (!(ladder[i].mean > ladder[i - 1].mean)) return false;
  return true;
}

}  // namespace ratiosynth
