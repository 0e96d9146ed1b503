#include "ratiosynth/mc_analysis.hpp"

#include "ratiosynth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <tuple>
#include <type_traits>

namespace ratiosynth {

namespace {

std::string describe(const ChainStructure& s) {
  return "chain has " + std::to_string(s.recurrent_classes.size()) + " recurrent classes";
}

// Solves M x = rhs in place by Gaussian elimination. Rationals pivot on the
// first nonzero entry, doubles on the largest magnitude.
template <typename T>
std::vector<T> solve_dense(std::vector<std::vector<T>> m, std::vector<T> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    if constexpr (std::is_same_v<T, double>) {
      double best = 0.0;
      for (std::size_t r = col; r < n; ++r)
        if (std::abs(m[r][col]) > best) {
          best = std::abs(m[r][col]);
          pivot = r;
        }
      if (best < 1e-300) pivot = n;
    } else {
      for (std::size_t r = col; r < n; ++r)
        if (m[r][col] != 0) {
          pivot = r;
          break;
        }
    }
    if (pivot == n) throw NumericalError("singular stationary system");
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const T factor = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
      rhs[r] -= factor * rhs[col];
    }
  }
  for (std::size_t r = 0; r < n; ++r) rhs[r] /= m[r][r];
  return rhs;
}

template <typename T>
T convert(const Rational& q) {
  if constexpr (std::is_same_v<T, double>) {
    return q.get_d();
  } else {
    return q;
  }
}

// Stationary distribution restricted to `cls`, returned in class order.
template <typename T>
std::vector<T> stationary_on_class(const CostMarkovChain& chain, const std::vector<StateId>& cls) {
  const std::size_t c = cls.size();
  std::vector<std::size_t> pos(chain.size(), c);
  for (std::size_t i = 0; i < c; ++i) pos[cls[i]] = i;
  // Row t: sum_s pi_s P(s,t) - pi_t = 0; the last row becomes sum pi = 1.
  std::vector<std::vector<T>> m(c, std::vector<T>(c, T(0)));
  for (std::size_t j = 0; j < c; ++j) {
    const StateId s = cls[j];
    for (const auto& [t, p] : chain.trans[s].entries) {
      if (pos[t] == c) continue;
      m[pos[t]][j] += convert<T>(p);
    }
    m[j][j] -= T(1);
  }
  std::vector<T> rhs(c, T(0));
  for (std::size_t j = 0; j < c; ++j) m[c - 1][j] = T(1);
  rhs[c - 1] = T(1);
  return solve_dense<T>(std::move(m), std::move(rhs));
}

}  // namespace

MultichainError::MultichainError(ChainStructure structure)
    : std::runtime_error(describe(structure)), structure_(std::move(structure)) {}

const char* to_string(SolveMode mode) { return mode == SolveMode::Exact ? "exact" : "float"; }

AnalysisOptions AnalysisOptions::from_environment() {
  AnalysisOptions options;
  if (const char* env = std::getenv("RATIOSYNTH_EXACT_THRESHOLD")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') options.exact_threshold = static_cast<std::size_t>(v);
  }
  return options;
}

Graph chain_graph(const CostMarkovChain& chain) {
  Graph g(chain.size());
  for (StateId s = 0; s < chain.size(); ++s)
    for (const auto& [t, p] : chain.trans[s].entries)
      if (p > 0) g[s].push_back(t);
  return g;
}

ChainStructure classify(const CostMarkovChain& chain) {
  ChainStructure out;
  out.recurrent_classes = bottom_components(chain_graph(chain));
  std::vector<bool> recurrent(chain.size(), false);
  for (const auto& cls : out.recurrent_classes)
    for (StateId s : cls) recurrent[s] = true;
  for (StateId s = 0; s < chain.size(); ++s)
    if (!recurrent[s]) out.transient.push_back(s);
  out.unichain = out.recurrent_classes.size() == 1;
  return out;
}

CesaroDistribution cesaro_limit(const CostMarkovChain& chain, const AnalysisOptions& options) {
  ChainStructure structure = classify(chain);
  if (!structure.unichain) throw MultichainError(std::move(structure));
  const auto& cls = structure.recurrent_classes.front();
  CesaroDistribution out;
  out.weights.assign(chain.size(), 0.0);
  if (chain.size() <= options.exact_threshold) {
    out.mode = SolveMode::Exact;
    out.exact.assign(chain.size(), Rational(0));
    auto pi = stationary_on_class<Rational>(chain, cls);
    for (std::size_t i = 0; i < cls.size(); ++i) {
      pi[i].canonicalize();
      out.exact[cls[i]] = pi[i];
      out.weights[cls[i]] = pi[i].get_d();
    }
    return out;
  }
  out.mode = SolveMode::Float;
  auto pi = stationary_on_class<double>(chain, cls);
  double total = 0.0;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    out.weights[cls[i]] = std::max(pi[i], 0.0);
    total += out.weights[cls[i]];
  }
  for (double& w : out.weights) w /= total;
  std::vector<double> flow(chain.size(), 0.0);
  for (StateId s = 0; s < chain.size(); ++s)
    for (const auto& [t, p] : chain.trans[s].entries) flow[t] += out.weights[s] * p.get_d();
  for (StateId s = 0; s < chain.size(); ++s)
    out.residual = std::max(out.residual, std::abs(flow[s] - out.weights[s]));
  return out;
}

ExtendedValue expected_ratio(const CostMarkovChain& chain, const CesaroDistribution& limit) {
  // Zero tests are structural: p* > 0 exactly on the recurrent class.
  bool numerator_zero = true;
  bool denominator_zero = true;
  for (StateId s = 0; s < chain.size(); ++s) {
    const bool recurrent = limit.mode == SolveMode::Exact ? limit.exact[s] > 0 : limit.weights[s] > 0.0;
    if (!recurrent) continue;
    if (chain.cost1[s] != 0) numerator_zero = false;
    if (chain.cost2[s] != 0) denominator_zero = false;
  }
  if (numerator_zero) return ExtendedValue::exact(Rational(0));
  if (denominator_zero) return ExtendedValue::infinity();
  if (limit.mode == SolveMode::Exact) {
    Rational num = 0;
    Rational den = 0;
    for (StateId s = 0; s < chain.size(); ++s) {
      if (limit.exact[s] == 0) continue;
      num += limit.exact[s] * chain.cost1[s];
      den += limit.exact[s] * chain.cost2[s];
    }
    Rational value = num / den;
    value.canonicalize();
    return ExtendedValue::exact(std::move(value));
  }
  double num = 0.0;
  double den = 0.0;
  for (StateId s = 0; s < chain.size(); ++s) {
    num += limit.weights[s] * chain.cost1[s].get_d();
    den += limit.weights[s] * chain.cost2[s].get_d();
  }
  return ExtendedValue::approximate(num / den);
}

bool expected_ratio_is_zero(const CostMarkovChain& chain) {
  for (const auto& cls : classify(chain).recurrent_classes)
    for (StateId s : cls)
      if (chain.cost1[s] != 0) return false;
  return true;
}

ExtendedValue expected_ratio(const CostMarkovChain& chain, const AnalysisOptions& options) {
  return expected_ratio(chain, cesaro_limit(chain, options));
}

bool unsafe_reachable(const FiniteStateSystem& sys, const CostAutomaton& qual, const LabeledMDP& env) {
  const Alphabet& L = env.labels;
  const Alphabet& A = sys.outputs;
  if (!Projection::possible(L, sys.inputs) || !Projection::possible(A, env.actions) ||
      !Projection::possible(L, qual.inputs) || !Projection::possible(A, qual.outputs))
    throw InputError("alphabet mismatch in satisfaction check");
  const Projection to_sys(L, sys.inputs);
  const Projection to_env(A, env.actions);
  const Projection qual_in(L, qual.inputs);
  const Projection qual_out(A, qual.outputs);

  using Triple = std::tuple<StateId, StateId, StateId>;
  std::set<Triple> seen;
  std::vector<Triple> todo{{sys.initial, qual.initial, env.initial}};
  seen.insert(todo.front());
  while (!todo.empty()) {
    const auto [s, q, m] = todo.back();
    todo.pop_back();
    if (!qual.safe[q]) return true;
    const LetterId act = sys.output[s];
    for (const auto& [m2, p] : env.at(m, to_env(act)).entries) {
      if (p <= 0) continue;
      const LetterId l = env.label[m2];
      const Triple next{sys.next(s, to_sys(l)),
                        qual.next(q, joint_letter(qual_in(l), qual_out(act), qual.outputs.size())), m2};
      if (seen.insert(next).second) todo.push_back(next);
    }
  }
  return false;
}

SatisfactionReport check_satisfaction_report(const FiniteStateSystem& sys, const CostAutomaton& qual,
                                             const LabeledMDP& env, const AnalysisOptions& options) {
  const CostMarkovChain chain = build_satisfaction_chain(sys, qual, env);
  SatisfactionReport report;
  report.chain_states = chain.size();
  bool value_zero = false;
  try {
    const ExtendedValue value = expected_ratio(chain, options);
    value_zero = value.is_finite() && value.to_double() == 0.0;
  } catch (const MultichainError&) {
    report.multichain = true;
    value_zero = expected_ratio_is_zero(chain);
  }
  if (value_zero == unsafe_reachable(sys, qual, env))
    throw ConsistencyError("satisfaction value and unsafe reachability disagree");
  report.satisfied = value_zero;
  return report;
}

bool check_satisfaction(const FiniteStateSystem& sys, const CostAutomaton& qual, const LabeledMDP& env,
                        const AnalysisOptions& options) {
  return check_satisfaction_report(sys, qual, env, options).satisfied;
}

SystemValueReport evaluate_system(const FiniteStateSystem& sys, const CostAutomaton& qual,
                                  const CostAutomaton& quant, const LabeledMDP& env,
                                  const AnalysisOptions& options) {
  SystemValueReport report;
  report.satisfaction = check_satisfaction_report(sys, qual, env, options);
  if (!report.satisfaction.satisfied) return report;
  const CostMarkovChain chain = build_value_chain(sys, quant, env);
  report.value_chain_states = chain.size();
  const CesaroDistribution limit = cesaro_limit(chain, options);
  report.mode = limit.mode;
  report.value = expected_ratio(chain, limit);
  return report;
}

ExtendedValue system_value(const FiniteStateSystem& sys, const CostAutomaton& qual,
                           const CostAutomaton& quant, const LabeledMDP& env,
                           const AnalysisOptions& options) {
  return evaluate_system(sys, qual, quant, env, options).value;
}

}  // namespace ratiosynth
