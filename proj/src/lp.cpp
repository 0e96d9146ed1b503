#include "ratiosynth/lp.hpp"

#include "ratiosynth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ratiosynth {

std::size_t LinearProgram::add_row(std::vector<std::pair<std::size_t, double>> coefficients, double b) {
  rows.push_back(std::move(coefficients));
  rhs.push_back(b);
  return rows.size() - 1;
}

void LinearProgram::check() const {
  if (objective.size() != num_vars) throw std::invalid_argument("objective length differs from variable count");
  if (rhs.size() != rows.size()) throw std::invalid_argument("rhs length differs from row count");
  for (double c : objective)
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite objective coefficient");
  for (double b : rhs)
    if (!std::isfinite(b)) throw std::invalid_argument("non-finite right-hand side");
  for (const auto& row : rows)
    for (const auto& [j, v] : row) {
      if (j >= num_vars) throw std::invalid_argument("constraint refers to unknown variable");
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite constraint coefficient");
    }
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

double lp_residual(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    double ax = 0.0;
    for (const auto& [j, v] : lp.rows[i]) ax += v * x[j];
    worst = std::max(worst, std::abs(ax - lp.rhs[i]));
  }
  return worst;
}

namespace {

constexpr std::size_t kDegenerateSwitch = 50;
constexpr std::size_t kRefactorEvery = 64;

using Column = std::vector<std::pair<std::size_t, double>>;

class Tableau {
 public:
  Tableau(const LinearProgram& lp, const LpTolerances& tol) : tol_(tol), m_(lp.num_rows()), n_(lp.num_vars) {
    cols_.assign(n_ + m_, {});
    b_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = lp.rhs[i] < 0 ? -1.0 : 1.0;
      b_[i] = sign * lp.rhs[i];
      for (const auto& [j, v] : lp.rows[i])
        if (v != 0.0) cols_[j].emplace_back(i, sign * v);
      cols_[n_ + i].emplace_back(i, 1.0);
    }
    // Merge duplicate (row, column) entries.
    for (auto& col : cols_) {
      std::sort(col.begin(), col.end());
      Column merged;
      for (const auto& e : col) {
        if (!merged.empty() && merged.back().first == e.first) merged.back().second += e.second;
        else merged.push_back(e);
      }
      col = std::move(merged);
    }
    basis_.resize(m_);
    in_basis_.assign(n_ + m_, false);
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      in_basis_[n_ + i] = true;
    }
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
    xb_ = b_;
    bnorm_ = 0.0;
    for (double v : b_) bnorm_ = std::max(bnorm_, std::abs(v));
  }

  // Runs simplex iterations for `cost`; returns false if unbounded.
  bool optimize(const std::vector<double>& cost, const std::vector<bool>& allowed, std::size_t& iterations,
                std::size_t cap) {
    bool bland = false;
    std::size_t degenerate = 0;
    std::vector<double> y(m_);
    std::vector<double> u(m_);
    while (true) {
      if (iterations >= cap) throw NumericalError("simplex iteration cap reached" + diagnostics());
      if (since_refactor_ >= kRefactorEvery) refactor();
      // Duals y = c_B B^-1.
      std::fill(y.begin(), y.end(), 0.0);
      for (std::size_t i = 0; i < m_; ++i) {
        const double cb = cost[basis_[i]];
        if (cb == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) y[k] += cb * binv_[i * m_ + k];
      }
      std::size_t entering = cols_.size();
      double best = -tol_.optimality;
      for (std::size_t j = 0; j < cols_.size(); ++j) {
        if (in_basis_[j] || !allowed[j]) continue;
        double d = cost[j];
        for (const auto& [r, v] : cols_[j]) d -= y[r] * v;
        if (d < best) {
          best = d;
          entering = j;
          if (bland) break;
        }
      }
      if (entering == cols_.size()) return true;
      column_in_basis(entering, u);
      double theta = INFINITY;
      for (std::size_t i = 0; i < m_; ++i)
        if (u[i] > tol_.pivot) theta = std::min(theta, std::max(xb_[i], 0.0) / u[i]);
      std::size_t leave = m_;
      for (std::size_t i = 0; i < m_; ++i) {
        if (u[i] <= tol_.pivot || std::max(xb_[i], 0.0) / u[i] > theta + 1e-12) continue;
        if (leave == m_ || basis_[i] < basis_[leave]) leave = i;
      }
      if (leave == m_) return false;
      theta = std::max(xb_[leave], 0.0) / u[leave];
      if (theta <= tol_.feasibility) {
        if (++degenerate >= kDegenerateSwitch) bland = true;
      } else {
        degenerate = 0;
      }
      pivot(entering, leave, u, theta);
      ++iterations;
    }
  }

  // Replaces basic artificials by structural columns where possible.
  // Artificials left over sit on redundant rows.
  void drive_out_artificials() {
    std::vector<double> u(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (in_basis_[j]) continue;
        double ui = 0.0;
        for (const auto& [r, v] : cols_[j]) ui += binv_[i * m_ + r] * v;
        if (std::abs(ui) <= 1e-7) continue;
        column_in_basis(j, u);
        pivot(j, i, u, xb_[i] / u[i]);
        break;
      }
    }
  }

  double artificial_sum() const {
    double s = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= n_) s += std::max(xb_[i], 0.0);
    return s;
  }

  void refactor() {
    since_refactor_ = 0;
    if (m_ == 0) return;
    // Gauss-Jordan on [B | I] with partial pivoting.
    std::vector<double> a(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      for (const auto& [r, v] : cols_[basis_[i]]) a[r * m_ + i] = v;
    std::vector<double> inv(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;
    double smallest = INFINITY;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < m_; ++r)
        if (std::abs(a[r * m_ + c]) > std::abs(a[p * m_ + c])) p = r;
      const double piv = a[p * m_ + c];
      smallest = std::min(smallest, std::abs(piv));
      if (std::abs(piv) < 1e-12) {
        std::ostringstream os;
        os << "singular basis during refactorization (pivot " << piv << " in column " << c << ")"
           << diagnostics();
        throw NumericalError(os.str());
      }
      if (p != c)
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(a[p * m_ + k], a[c * m_ + k]);
          std::swap(inv[p * m_ + k], inv[c * m_ + k]);
        }
      for (std::size_t k = 0; k < m_; ++k) {
        a[c * m_ + k] /= piv;
        inv[c * m_ + k] /= piv;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = a[r * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          a[r * m_ + k] -= f * a[c * m_ + k];
          inv[r * m_ + k] -= f * inv[c * m_ + k];
        }
      }
    }
    // Row i of B^-1 belongs to basis position i: B = [cols of basis_], so
    // inv computed above is already B^-1 with rows indexed by position.
    binv_ = std::move(inv);
    for (std::size_t i = 0; i < m_; ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k < m_; ++k) v += binv_[i * m_ + k] * b_[k];
      xb_[i] = std::abs(v) < 1e-13 ? 0.0 : v;
    }
  }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = std::max(xb_[i], 0.0);
    return x;
  }

  std::vector<bool> basic_structural() const {
    return std::vector<bool>(in_basis_.begin(), in_basis_.begin() + static_cast<std::ptrdiff_t>(n_));
  }

  std::size_t rows() const { return m_; }
  std::size_t structural() const { return n_; }
  double bnorm() const { return bnorm_; }

  std::string diagnostics() const {
    double maxinv = 0.0;
    for (double v : binv_) maxinv = std::max(maxinv, std::abs(v));
    std::ostringstream os;
    os << " [rows " << m_ << ", columns " << n_ << ", max |B^-1| " << maxinv << ", ||b|| " << bnorm_ << "]";
    return os.str();
  }

 private:
  void column_in_basis(std::size_t j, std::vector<double>& u) const {
    std::fill(u.begin(), u.end(), 0.0);
    for (const auto& [r, v] : cols_[j])
      for (std::size_t i = 0; i < m_; ++i) u[i] += binv_[i * m_ + r] * v;
  }

  void pivot(std::size_t entering, std::size_t leave, const std::vector<double>& u, double theta) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == leave) continue;
      xb_[i] -= theta * u[i];
      if (std::abs(xb_[i]) < 1e-13) xb_[i] = 0.0;
    }
    xb_[leave] = theta;
    const double p = u[leave];
    double* prow = &binv_[leave * m_];
    for (std::size_t k = 0; k < m_; ++k) prow[k] /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == leave || u[i] == 0.0) continue;
      const double f = u[i];
      double* row = &binv_[i * m_];
      for (std::size_t k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
    in_basis_[basis_[leave]] = false;
    in_basis_[entering] = true;
    basis_[leave] = entering;
    ++since_refactor_;
  }

  LpTolerances tol_;
  std::size_t m_;
  std::size_t n_;
  std::vector<Column> cols_;
  std::vector<double> b_;
  std::vector<std::size_t> basis_;
  std::vector<bool> in_basis_;
  std::vector<double> binv_;
  std::vector<double> xb_;
  double bnorm_ = 0.0;
  std::size_t since_refactor_ = 0;
};

}  // namespace

LpSolution RevisedSimplex::solve(const LinearProgram& lp) const {
  lp.check();
  Tableau t(lp, tol_);
  const std::size_t n = lp.num_vars;
  const std::size_t m = lp.num_rows();
  const std::size_t cap = 50 * (n + m) + 1000;
  LpSolution out;

  std::vector<double> phase1(n + m, 0.0);
  std::fill(phase1.begin() + static_cast<std::ptrdiff_t>(n), phase1.end(), 1.0);
  std::vector<bool> all(n + m, true);
  t.optimize(phase1, all, out.iterations, cap);
  t.refactor();
  if (t.artificial_sum() > tol_.feasibility * (1.0 + t.bnorm())) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  t.drive_out_artificials();
  t.refactor();

  std::vector<double> phase2(n + m, 0.0);
  std::copy(lp.objective.begin(), lp.objective.end(), phase2.begin());
  std::vector<bool> structural(n + m, false);
  std::fill(structural.begin(), structural.begin() + static_cast<std::ptrdiff_t>(n), true);
  if (!t.optimize(phase2, structural, out.iterations, cap)) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  t.refactor();
  out.status = LpStatus::Optimal;
  out.x = t.primal();
  out.basic = t.basic_structural();
  out.objective_value = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.objective_value += lp.objective[j] * out.x[j];
  const double residual = lp_residual(lp, out.x);
  if (residual > tol_.feasibility * (1.0 + t.bnorm())) {
    std::ostringstream os;
    os << "optimal basis violates constraints by " << residual << t.diagnostics();
    throw NumericalError(os.str());
  }
  return out;
}

LpSolution solve_lp(const LinearProgram& lp) { return RevisedSimplex().solve(lp); }

}  // namespace ratiosynth
