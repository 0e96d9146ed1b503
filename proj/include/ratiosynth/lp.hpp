#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace ratiosynth {

/// minimize c.x subject to A x = b, x >= 0. A is stored as sparse rows.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  std::vector<double> rhs;

  std::size_t num_rows() const { return rows.size(); }
  /// Appends a row and returns its index.
  std::size_t add_row(std::vector<std::pair<std::size_t, double>> coefficients, double b);
  /// Throws std::invalid_argument on inconsistent dimensions or non-finite data.
  void check() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };
const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective_value = 0.0;
  std::vector<bool> basic;  // basic[j]: x_j is in the final basis
  std::size_t iterations = 0;
};

struct LpTolerances {
  double feasibility = 1e-9;
  double optimality = 1e-9;
  double pivot = 1e-11;
};

/// max-norm of A x - b.
double lp_residual(const LinearProgram& lp, const std::vector<double>& x);

class LpSolver {
 public:
  virtual ~LpSolver() = default;
  virtual LpSolution solve(const LinearProgram& lp) const = 0;
  virtual std::string name() const = 0;
};

/// Two-phase revised simplex with an explicit basis inverse.
///
/// Dantzig pricing; after a run of degenerate pivots it switches to Bland's
/// rule for the rest of the phase. Ties go to the lowest variable index. On
/// Optimal the returned x is a basic feasible solution.
class RevisedSimplex : public LpSolver {
 public:
  explicit RevisedSimplex(LpTolerances tol = {}) : tol_(tol) {}
  LpSolution solve(const LinearProgram& lp) const override;
  std::string name() const override { return "revised-simplex"; }

 private:
  LpTolerances tol_;
};

/// Convenience wrapper around RevisedSimplex.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace ratiosynth
