#include <cmath>
#include <random>

#include "doctest.h"
#include "bisectlp/linalg.hpp"
#include "bisectlp/lp.hpp"
#include "lp_oracle.hpp"

using namespace bisectlp;

TEST_CASE("lp: single bounded variable") {
  LpProblem p;
  p.c = {1.0};
  p.lo = {0.0};
  p.hi = {1.0};
  auto out = solve(p);
  CHECK(out.status == LpStatus::Optimal);
  CHECK(out.objective == doctest::Approx(0.0));
}

TEST_CASE("lp: two variables with a knapsack row") {
  LpProblem p;
  p.c = {-1.0, -1.0};
  p.ineq = {{1.0, 1.0}};
  p.ineq_rhs = {1.0};
  p.lo = {0.0, 0.0};
  p.hi = {1.0, 1.0};
  auto out = solve(p);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.objective == doctest::Approx(-1.0));
  CHECK(std::abs(out.duality_gap) <= 1e-8);
}

TEST_CASE("lp: infeasible and unbounded are reported") {
  LpProblem inf;
  inf.c = {1.0};
  inf.eq = {{1.0}};
  inf.eq_rhs = {2.0};
  inf.lo = {0.0};
  inf.hi = {1.0};
  CHECK(solve(inf).status == LpStatus::Infeasible);

  LpProblem unb;
  unb.c = {-1.0, 0.0};
  unb.ineq = {{1.0, -1.0}};
  unb.ineq_rhs = {0.0};
  CHECK(solve(unb).status == LpStatus::Unbounded);
}

TEST_CASE("lp: free variables") {
  // min x - y  s.t. x - y >= -3, x + y = 1, both free.
  LpProblem p;
  p.c = {1.0, -1.0};
  p.eq = {{1.0, 1.0}};
  p.eq_rhs = {1.0};
  p.ineq = {{-1.0, 1.0}};
  p.ineq_rhs = {3.0};
  p.lo = {-kInf, -kInf};
  p.hi = {kInf, kInf};
  auto out = solve(p);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.objective == doctest::Approx(-3.0));
  CHECK(out.x[0] == doctest::Approx(-1.0));
  CHECK(out.x[1] == doctest::Approx(2.0));
}

TEST_CASE("lp: random small problems match vertex enumeration") {
  std::mt19937_64 rng(7);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    auto p = testing::random_small_lp(rng);
    const auto expect = testing::enumerate_vertices(p);
    const auto got = solve(p);
    INFO("trial " << trial);
    if (!expect) {
      CHECK(got.status == LpStatus::Infeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(got.status == LpStatus::Optimal);
    CHECK(std::abs(got.objective - *expect) <= 1e-9 * (1.0 + std::abs(*expect)));
    CHECK(std::abs(got.duality_gap) <= 1e-8 * (1.0 + std::abs(got.objective)));
    ++optimal;
  }
  CHECK(optimal > 100);
  CHECK(infeasible > 5);
}

TEST_CASE("lp: repeated solves are bit identical") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = testing::random_small_lp(rng);
    auto a = solve(p), b = solve(p);
    CHECK(a.status == b.status);
    CHECK(a.objective == b.objective);
  }
}

TEST_CASE("lp: warm start from an optimal basis needs no pivots") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = testing::random_small_lp(rng);
    auto cold = solve(p);
    if (cold.status != LpStatus::Optimal) continue;
    auto warm = solve(p, cold.basis);
    REQUIRE(warm.status == LpStatus::Optimal);
    CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-12));
    CHECK(warm.iterations == 0);
  }
}

TEST_CASE("lp: rows added after a solve and removed again") {
  SimplexSolver s(3);
  for (int j = 0; j < 3; ++j) s.set_var_bounds(j, 0.0, 1.0);
  s.set_objective({-1.0, -2.0, -3.0});
  REQUIRE(s.solve() == LpStatus::Optimal);
  CHECK(s.objective() == doctest::Approx(-6.0));
  const int cut = s.add_row({{0, 1.0}, {1, 1.0}, {2, 1.0}}, -kInf, 1.5);
  REQUIRE(s.solve() == LpStatus::Optimal);
  CHECK(s.objective() == doctest::Approx(-4.0));
  const int loose = s.add_row({{0, 1.0}}, -kInf, 5.0);
  REQUIRE(s.solve() == LpStatus::Optimal);
  CHECK(s.row_is_basic(loose));
  s.remove_rows({loose});
  CHECK(s.num_rows() == 1);
  CHECK(!s.row_is_basic(cut));
  s.set_objective({-3.0, -2.0, -1.0});
  REQUIRE(s.solve() == LpStatus::Optimal);
  CHECK(s.objective() == doctest::Approx(-4.0));
}

TEST_CASE("nullspace: identity, ones and constructed ranks") {
  auto id = nullspace_rank({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 3);
  CHECK(id.rank == 3);
  CHECK(id.basis.empty());
  auto ones = nullspace_rank({{1, 1}, {1, 1}}, 2);
  CHECK(ones.rank == 1);
  CHECK(ones.basis.size() == 1);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int rows = 3 + trial % 5, cols = 4 + trial % 4, r = 1 + trial % std::min(rows, cols);
    DenseMatrix left(rows, std::vector<double>(r)), right(r, std::vector<double>(cols));
    for (auto& row : left)
      for (auto& v : row) v = u(rng);
    for (auto& row : right)
      for (auto& v : row) v = u(rng);
    DenseMatrix m(rows, std::vector<double>(cols, 0.0));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        for (int k = 0; k < r; ++k) m[i][j] += left[i][k] * right[k][j];
    auto ns = nullspace_rank(m, cols);
    CHECK(ns.rank == r);
    CHECK(static_cast<int>(ns.basis.size()) == cols - r);
    for (const auto& v : ns.basis)
      for (int i = 0; i < rows; ++i) {
        double dot = 0.0;
        for (int j = 0; j < cols; ++j) dot += m[i][j] * v[j];
        CHECK(std::abs(dot) < 1e-9);
      }
  }
}

TEST_CASE("cone: trivial cases") {
  CHECK_FALSE(cone_has_nonzero(DenseMatrix{{1, 0}, {0, 1}}, {}, {}, 2).nonzero);
  auto pos = cone_has_nonzero(DenseMatrix{}, {}, DenseMatrix{{1, 0}, {0, 1}}, 2);
  CHECK(pos.nonzero);
  // x1 >= 0, -x1 >= 0 and x1 + x2 >= 0, -x2 >= 0 pin x to zero.
  CHECK_FALSE(cone_has_nonzero(DenseMatrix{}, {}, DenseMatrix{{1, 0}, {-1, 0}, {1, 1}, {0, -1}}, 2).nonzero);
  // Only x2 >= 0 with x1 = 0: the ray (0, 1) qualifies.
  auto ray = cone_has_nonzero(DenseMatrix{{1, 0}}, {}, DenseMatrix{{0, 1}, {1, 1}}, 2);
  CHECK(ray.nonzero);
}
