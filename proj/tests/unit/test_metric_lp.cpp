#include <cmath>
#include <random>

#include "doctest.h"
#include "bisectlp/exact.hpp"
#include "bisectlp/generators.hpp"
#include "bisectlp/metric_lp.hpp"

using namespace bisectlp;

namespace {

// Direct triple scan, written independently of the separation routine.
double worst_triangle_violation(const CutVector& x) {
  double worst = -kInf;
  const int n = x.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        worst = std::max(worst, x.at(i, j) - x.at(i, k) - x.at(j, k));
        worst = std::max(worst, x.at(i, j) + x.at(i, k) + x.at(j, k) - 2.0);
      }
  return worst;
}

// All triangle rows written out explicitly.
double full_relaxation_value(const Graph& g) {
  const int n = g.num_nodes();
  const auto m = num_pairs(n);
  LpProblem p;
  p.c.assign(m, 0.0);
  for (const auto& e : g.edges()) p.c[pair_index(e.u, e.v, n)] = 1.0;
  p.eq = {std::vector<double>(m, 1.0)};
  p.eq_rhs = {n * n / 4.0};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const auto a = pair_index(i, j, n), b = pair_index(i, k, n), c = pair_index(j, k, n);
        for (int r = 0; r < 4; ++r) {
          std::vector<double> row(m, 0.0);
          if (r == 3) {
            row[a] = row[b] = row[c] = 1.0;
          } else {
            row[a] = row[b] = row[c] = -1.0;
            row[r == 0 ? a : r == 1 ? b : c] = 1.0;
          }
          p.ineq.push_back(row);
          p.ineq_rhs.push_back(r == 3 ? 2.0 : 0.0);
        }
      }
  p.lo.assign(m, 0.0);
  p.hi.assign(m, 1.0);
  auto out = solve(p);
  REQUIRE(out.status == LpStatus::Optimal);
  return out.objective;
}

PlantedInstance two_cliques_with_matching(int n) {
  std::vector<Edge> e;
  const int h = n / 2;
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < h; ++i)
      for (int j = i + 1; j < h; ++j) e.push_back({s * h + i, s * h + j});
  for (int i = 0; i < h; ++i) e.push_back({i, h + i});
  return PlantedInstance(Graph(n, e), Bisection::first_half(n));
}

}  // namespace

TEST_CASE("metric: pair indices are consecutive in lexicographic order") {
  for (int n : {2, 5, 9}) {
    std::size_t expect = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        CHECK(pair_index(i, j, n) == expect);
        CHECK(pair_index(j, i, n) == expect);
        ++expect;
      }
    CHECK(num_pairs(n) == expect);
  }
}

TEST_CASE("metric: cut vectors satisfy every triangle row") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::uint8_t> lab(10, 0);
    std::fill(lab.begin() + 5, lab.end(), 1);
    std::shuffle(lab.begin(), lab.end(), rng);
    const auto x = cut_vector(Bisection(lab));
    CHECK(separate_triangles(x, 1e-8, 100).empty());
    CHECK(x.sum() == doctest::Approx(25.0));
    CHECK(worst_triangle_violation(x) <= 0.0);
  }
}

TEST_CASE("metric: separation finds the violated rows in order") {
  CutVector x{4, std::vector<double>(6, 0.0)};
  // x_01 = 1 with x_02 = x_12 = 0 breaks the rooted row on (0,1;2); likewise
  // for apex 3. x_23 = 1 breaks both rows rooted at pair (2,3).
  x.values[pair_index(0, 1, 4)] = 1.0;
  x.values[pair_index(2, 3, 4)] = 0.5;
  auto rows = separate_triangles(x, 1e-8, 10);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].violation == doctest::Approx(1.0));
  CHECK(rows[0].i == 0);
  CHECK(rows[0].j == 1);
  CHECK(rows[0].k == 2);
  CHECK(rows[0].kind == 0);
  CHECK(rows[1].k == 3);
  CHECK(rows[2].violation == doctest::Approx(0.5));
  for (const auto& r : rows) CHECK(r.lhs_minus_rhs(x) == doctest::Approx(r.violation));
  CHECK(separate_triangles(x, 1e-8, 1).size() == 1);

  x.values.assign(6, 1.0);
  auto per = separate_triangles(x, 1e-8, 10);
  REQUIRE(per.size() == 4);
  for (const auto& r : per) CHECK(r.kind == 3);
}

TEST_CASE("metric: K4 relaxation value") {
  Graph k4(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  auto rep = solve_metric_lp(k4);
  CHECK(rep.status == LpStatus::Optimal);
  CHECK(rep.objective == doctest::Approx(4.0));
}

TEST_CASE("metric: two K4 joined by a matching is recovered") {
  auto inst = two_cliques_with_matching(8);
  auto v = lp_recovery_verdict(inst);
  CHECK(v.kind == VerdictKind::Recovered);
  CHECK(v.lp_value == doctest::Approx(4.0));
  CHECK(v.planted_value == 4.0);
  CHECK(v.delta >= 0.0);
  CHECK(v.delta <= 1e-6 * 64);
}

TEST_CASE("metric: lazy relaxation agrees with the full one and bounds the IP") {
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 6 + 2 * (trial % 3);
    const auto g = sample_er(n, 0.3 + 0.05 * (trial % 5), 100 + trial);
    INFO("trial " << trial);
    auto rep = solve_metric_lp(g);
    REQUIRE(rep.status == LpStatus::Optimal);
    CHECK(rep.objective == doctest::Approx(full_relaxation_value(g)).epsilon(1e-9));
    CHECK(rep.solution.sum() == doctest::Approx(n * n / 4.0));
    CHECK(worst_triangle_violation(rep.solution) <= 1e-7);
    const auto ip = exact_min_bisection(g);
    CHECK(rep.objective <= ip.optimal_cost + 1e-7);
  }
}

TEST_CASE("metric: verdict matches brute force on small planted graphs") {
  int recovered = 0;
  for (int trial = 0; trial < 16; ++trial) {
    const int n = 8 + 2 * (trial % 2);
    auto inst = sample_sbm(n, 0.8, 0.15, 500 + trial);
    INFO("trial " << trial);
    auto v = lp_recovery_verdict(inst);
    const auto ip = exact_min_bisection(inst);
    const bool ip_unique = ip.planted_is_unique_optimum.value_or(false);
    // LP recovery certifies that the planted cut is the unique integral optimum.
    if (v.kind == VerdictKind::Recovered) {
      CHECK(ip_unique);
      ++recovered;
    }
    // A cheaper bisection makes the planted cut non-optimal for the LP too.
    if (ip.optimal_cost < inst.num_cross_edges()) CHECK(v.kind == VerdictKind::FractionalOptimum);
    // Several optimal bisections: an integral alternative lies on the face.
    if (ip.optimal_cost == inst.num_cross_edges() && !ip_unique) CHECK(v.kind != VerdictKind::Recovered);
  }
  CHECK(recovered > 0);
}

TEST_CASE("metric: empty graph and tight instances are not recovered") {
  PlantedInstance empty(Graph(6), Bisection::first_half(6));
  auto v = lp_recovery_verdict(empty);
  CHECK(v.kind == VerdictKind::AlternateOptimum);
  CHECK(v.delta > 1.0);

  auto tight = construct_tight_instance(8, 3, 2);
  auto t = lp_recovery_verdict(tight.instance);
  CHECK(t.kind != VerdictKind::Recovered);
}

TEST_CASE("metric: probe rejects a non-optimal planted vector") {
  auto inst = two_cliques_with_matching(8);
  auto rep = solve_metric_lp(inst.graph);
  std::vector<std::uint8_t> lab = {0, 1, 0, 1, 0, 1, 0, 1};
  auto bad = uniqueness_probe(inst.graph, rep, cut_vector(Bisection(lab)));
  CHECK_FALSE(bad.planted_optimal);
  CHECK_FALSE(bad.error.empty());
}
