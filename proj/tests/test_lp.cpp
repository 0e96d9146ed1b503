#include "test_support.hpp"

#include "ratiosynth/errors.hpp"
#include "ratiosynth/lp.hpp"

#include <doctest.h>

using namespace ratiosynth;

namespace {

LinearProgram dense_lp(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                       const std::vector<double>& c) {
  LinearProgram lp;
  lp.num_vars = c.size();
  lp.objective = c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != 0.0) row.emplace_back(j, a[i][j]);
    lp.add_row(row, b[i]);
  }
  return lp;
}

void check_optimal(const LinearProgram& lp, const LpSolution& s) {
  REQUIRE(s.status == LpStatus::Optimal);
  double bnorm = 0.0;
  for (double v : lp.rhs) bnorm = std::max(bnorm, std::abs(v));
  CHECK(lp_residual(lp, s.x) <= 1e-9 * (1 + bnorm));
  double obj = 0.0;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    CHECK(s.x[j] >= -1e-9);
    obj += lp.objective[j] * s.x[j];
  }
  CHECK(std::abs(obj - s.objective_value) <= 1e-9 * std::max(1.0, std::abs(obj)));
  std::size_t nb = 0;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (s.basic[j]) ++nb;
    else CHECK(std::abs(s.x[j]) <= 1e-12);
  }
  CHECK(nb <= lp.num_rows());
}

}  // namespace

TEST_CASE("lowest-index vertex among equal optima") {
  const LinearProgram lp = dense_lp({{1, 1}}, {1}, {1, 1});
  const LpSolution s = solve_lp(lp);
  check_optimal(lp, s);
  CHECK(s.objective_value == doctest::Approx(1.0));
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.x[1] == doctest::Approx(0.0));
}

TEST_CASE("unbounded ray") {
  const LinearProgram lp = dense_lp({{1, -1}}, {0}, {-1, 0});
  CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("square system with a unique solution") {
  const LinearProgram lp = dense_lp({{1, 1}, {1, -1}}, {1, 0}, {2, 1});
  const LpSolution s = solve_lp(lp);
  check_optimal(lp, s);
  CHECK(s.x[0] == doctest::Approx(0.5));
  CHECK(s.x[1] == doctest::Approx(0.5));
  CHECK(s.objective_value == doctest::Approx(1.5));
}

TEST_CASE("infeasible systems") {
  CHECK(solve_lp(dense_lp({{1, 1}}, {-1}, {1, 1})).status == LpStatus::Infeasible);
  CHECK(solve_lp(dense_lp({{1, 1}, {1, 1}}, {1, 2}, {0, 0})).status == LpStatus::Infeasible);
}

TEST_CASE("redundant rows and negative right-hand sides") {
  const LinearProgram lp = dense_lp({{1, 1, 1}, {2, 2, 2}, {-1, 0, 1}}, {1, 2, 0}, {3, 1, 2});
  const LpSolution s = solve_lp(lp);
  check_optimal(lp, s);
  // x1 = x3, x1 + x2 + x3 = 1: x2 = 1 is cheapest.
  CHECK(s.objective_value == doctest::Approx(1.0));
  const LinearProgram neg = dense_lp({{-1, -1}}, {-2}, {1, 3});
  const LpSolution t = solve_lp(neg);
  check_optimal(neg, t);
  CHECK(t.objective_value == doctest::Approx(2.0));
}

TEST_CASE("malformed programs are rejected") {
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {1.0};
  CHECK_THROWS_AS(lp.check(), std::invalid_argument);
  lp.objective = {1.0, 1.0};
  lp.add_row({{5, 1.0}}, 1.0);
  CHECK_THROWS_AS(lp.check(), std::invalid_argument);
  LinearProgram nan = dense_lp({{1, 1}}, {std::nan("")}, {1, 1});
  CHECK_THROWS_AS(solve_lp(nan), std::invalid_argument);
}

TEST_CASE("random programs against vertex enumeration") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> coef(-3, 3);
  int optimal = 0;
  int infeasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(4, n))(rng);
    std::vector<std::vector<double>> a(m, std::vector<double>(n));
    std::vector<double> b(m);
    std::vector<double> c(n);
    for (auto& row : a)
      for (auto& v : row) v = coef(rng);
    for (auto& v : b) v = coef(rng);
    // Bounded feasible region: add the normalization sum x = k.
    for (auto& v : a[0]) v = 1.0;
    b[0] = 1 + std::abs(coef(rng));
    for (auto& v : c) v = coef(rng);
    // Vertex enumeration needs full row rank.
    {
      std::vector<std::vector<double>> t = a;
      std::size_t rank = 0;
      for (std::size_t col = 0; col < n && rank < m; ++col) {
        std::size_t p = rank;
        for (std::size_t i = rank; i < m; ++i)
          if (std::abs(t[i][col]) > std::abs(t[p][col])) p = i;
        if (std::abs(t[p][col]) < 1e-9) continue;
        std::swap(t[p], t[rank]);
        for (std::size_t i = 0; i < m; ++i)
          if (i != rank) {
            const double f = t[i][col] / t[rank][col];
            for (std::size_t k = 0; k < n; ++k) t[i][k] -= f * t[rank][k];
          }
        ++rank;
      }
      if (rank < m) continue;
    }
    const LinearProgram lp = dense_lp(a, b, c);
    const LpSolution s = solve_lp(lp);
    const auto oracle = testsupport::vertex_enumeration_min(a, b, c);
    if (!oracle) {
      CHECK(s.status == LpStatus::Infeasible);
      ++infeasible;
      continue;
    }
    check_optimal(lp, s);
    CHECK(s.objective_value == doctest::Approx(*oracle).epsilon(1e-9));
    ++optimal;
  }
  CHECK(optimal > 100);
  MESSAGE("optimal " << optimal << ", infeasible " << infeasible);
}

TEST_CASE("degenerate programs terminate") {
  // Many ties in the ratio test: every vertex of the simplex is degenerate here.
  const std::size_t n = 8;
  std::vector<std::vector<double>> a(4, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) a[0][j] = 1.0;
  for (std::size_t i = 1; i < 4; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = (j % (i + 1) == 0) ? 1.0 : -1.0;
  std::vector<double> b{1, 0, 0, 0};
  std::vector<double> c(n);
  for (std::size_t j = 0; j < n; ++j) c[j] = -static_cast<double>(j % 3);
  const LinearProgram lp = dense_lp(a, b, c);
  const LpSolution s = solve_lp(lp);
  if (s.status == LpStatus::Optimal) check_optimal(lp, s);
  CHECK(s.iterations < 50 * (n + 4) + 1000);
}
