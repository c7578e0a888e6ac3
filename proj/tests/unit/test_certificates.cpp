#include <cmath>

#include "doctest.h"
#include "bisectlp/certificates.hpp"
#include "bisectlp/error.hpp"
#include "bisectlp/generators.hpp"
#include "bisectlp/metric_lp.hpp"

using namespace bisectlp;

namespace {

// Row-centric evaluation of c + R^T y + omega * 1 for the full triangle
// system: each row pushes its multiplier onto the three pairs it touches.
// Returns the largest entry in magnitude.
double row_centric_residual(const DualCertificate& c, const PlantedInstance& inst) {
  const int n = inst.num_nodes();
  std::vector<double> r(num_pairs(n), c.omega_bar);
  for (const auto& e : inst.graph.edges()) r[pair_index(e.u, e.v, n)] += 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const int t[3] = {i, j, k};
        for (int left = 0; left < 3; ++left) {
          // Row x_pq - x_pr - x_qr <= 0 with r the apex.
          const int rr = t[left == 0 ? 2 : left == 1 ? 1 : 0];
          const int p = left == 2 ? j : i;
          const int q = left == 0 ? j : k;
          const double y = c.lambda(p, q, rr);
          r[pair_index(p, q, n)] += y;
          r[pair_index(p, rr, n)] -= y;
          r[pair_index(q, rr, n)] -= y;
        }
        const double m = c.mu(i, j, k);
        r[pair_index(i, j, n)] += m;
        r[pair_index(i, k, n)] += m;
        r[pair_index(j, k, n)] += m;
      }
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace

TEST_CASE("certificate: omega for the two K4 instance") {
  const auto inst = regular_planted_instance(8, 3, 1);
  const auto p = certificate_parameters(inst);
  CHECK(p.regular);
  CHECK(p.d_in == 3);
  CHECK(p.d_out == 1);
  CHECK(p.omega_bar == -0.25);
  CHECK(1.0 + 2.0 * p.omega_bar == 0.5);
  CHECK(p.condition_holds);
  CHECK(p.uniqueness_condition);
  const auto c = build_dual_certificate(inst);
  CHECK(c.omega_bar == -0.25);
  const auto v = verify_dual(c, inst, 1e-12);
  CHECK(v.pass);
  CHECK(v.max_residual <= 1e-12);
  CHECK(v.slackness_violations == 0);
  CHECK(v.dual_objective == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("certificate: C4 sides sit on the boundary") {
  const auto inst = regular_planted_instance(8, 2, 1);
  const auto p = certificate_parameters(inst);
  CHECK(p.omega_bar == -0.5);
  CHECK(p.condition_holds);
  CHECK_FALSE(p.uniqueness_condition);
  const auto c = build_dual_certificate(inst);
  CHECK(verify_dual(c, inst).pass);
}

TEST_CASE("certificate: perturbed omega fails verification") {
  const auto inst = regular_planted_instance(8, 3, 1);
  auto c = build_dual_certificate(inst);
  c.omega_bar += 0.1;
  const auto v = verify_dual(c, inst);
  CHECK_FALSE(v.pass);
  CHECK(v.max_residual > 0.05);
}

TEST_CASE("certificate: dual equality holds row by row on a parameter sweep") {
  int built = 0;
  for (int n : {8, 12, 16, 20, 24})
    for (int din = 0; din <= n / 2 - 1; ++din)
      for (int dout = 0; dout <= n / 2; ++dout) {
        if ((n / 2) % 2 != 0 && din % 2 != 0) continue;
        const auto inst = regular_planted_instance(n, din, dout);
        const auto p = certificate_parameters(inst);
        REQUIRE(p.regular);
        INFO("n=" << n << " d_in=" << din << " d_out=" << dout);
        if (dout > 0 && !p.condition_holds) {
          CHECK_THROWS_AS(build_dual_certificate(inst), ConfigError);
          continue;
        }
        const auto c = build_dual_certificate(inst);
        ++built;
        CHECK(row_centric_residual(c, inst) <= 1e-12);
        const auto v = verify_dual(c, inst);
        CHECK(v.pass);
        CHECK(v.min_multiplier >= 0.0);
        CHECK(std::abs(v.dual_objective - static_cast<double>(inst.num_cross_edges())) <= 1e-8);
      }
  CHECK(built > 20);
}

TEST_CASE("certificate: strong duality against the relaxation") {
  for (auto [n, din, dout] : {std::tuple{8, 3, 1}, {12, 4, 1}, {16, 6, 2}, {16, 5, 2}}) {
    const auto inst = regular_planted_instance(n, din, dout);
    const auto c = build_dual_certificate(inst);
    const auto rep = solve_metric_lp(inst.graph);
    INFO("n=" << n << " d_in=" << din << " d_out=" << dout);
    REQUIRE(rep.status == LpStatus::Optimal);
    CHECK(rep.objective == doctest::Approx(c.dual_objective()).epsilon(1e-9));
    CHECK(rep.objective == doctest::Approx(static_cast<double>(inst.num_cross_edges())));
  }
}

TEST_CASE("certificate: irregular input and disconnected sides") {
  auto inst = sample_sbm(12, 0.7, 0.2, 5, true);
  CHECK_FALSE(certificate_parameters(inst).regular);
  CHECK_THROWS_AS(build_dual_certificate(inst), ConfigError);

  const auto apart = regular_planted_instance(8, 1, 0);
  const auto c = build_dual_certificate(apart);
  CHECK(c.omega_bar == 0.0);
  CHECK(c.gamma_at(0, 2) == doctest::Approx(1.0 / 8));
  CHECK(verify_dual(c, apart).pass);
}

TEST_CASE("uniqueness: cone check on small regular instances") {
  const auto k4 = regular_planted_instance(8, 3, 1);
  CHECK(mangasarian_unique_check(k4, build_dual_certificate(k4)));

  const auto tiny = regular_planted_instance(4, 1, 0);
  CHECK_THROWS_AS(mangasarian_unique_check(tiny, build_dual_certificate(tiny)), ConfigError);

  auto bad = build_dual_certificate(k4);
  bad.omega_bar = -0.3;
  CHECK_THROWS_AS(mangasarian_unique_check(k4, bad), ConfigError);
}

TEST_CASE("uniqueness: cone check agrees with the face probe") {
  int unique = 0, not_unique = 0;
  for (int n : {8, 12, 16})
    for (int din = 1; din <= n / 2 - 1; ++din)
      for (int dout = 1; dout <= n / 2; ++dout) {
        if ((n / 2) % 2 != 0 && din % 2 != 0) continue;
        if (4 * (din - dout) < n - 4) continue;
        const auto inst = regular_planted_instance(n, din, dout);
        INFO("n=" << n << " d_in=" << din << " d_out=" << dout);
        const bool cone = mangasarian_unique_check(inst, build_dual_certificate(inst));
        const auto verdict = lp_recovery_verdict(inst);
        CHECK(verdict.objective_match);
        CHECK(cone == (verdict.kind == VerdictKind::Recovered));
        if (4 * (din - dout) >= n) CHECK(cone);
        (cone ? unique : not_unique) += 1;
      }
  CHECK(unique > 0);
  MESSAGE("unique " << unique << ", not unique " << not_unique);
}

TEST_CASE("regular-subgraph route") {
  const auto k4 = regular_planted_instance(8, 3, 1);
  const auto r = check_factor_recovery(k4);
  CHECK(r.applies);
  CHECK(r.reasons.empty());
  REQUIRE(r.d_in_reg);
  CHECK(r.d_in_reg->num_edges() == 12);

  // Side 0 is a star on four nodes: leaves have inside degree 1 and the
  // star has no perfect matching.
  std::vector<Edge> e = {{0, 1}, {0, 2}, {0, 3}, {4, 5}, {4, 6}, {4, 7}, {5, 6}, {5, 7}, {6, 7}, {0, 4}};
  const PlantedInstance star(Graph(8, e), Bisection::first_half(8));
  const auto s = check_factor_recovery(star);
  CHECK_FALSE(s.applies);
  CHECK_FALSE(s.d_in_reg);
  CHECK_FALSE(s.reasons.empty());

  int applies = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    if (check_factor_recovery(sample_sbm(64, 0.95, 0.1, seed)).applies) ++applies;
  CHECK(applies >= 9);
}

TEST_CASE("regular-subgraph route implies recovery") {
  int applied = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto inst = sample_sbm(16, 0.95, 0.05, 40 + seed);
    const auto r = check_factor_recovery(inst);
    if (!r.applies) continue;
    ++applied;
    INFO("seed " << seed);
    CHECK(lp_recovery_verdict(inst).kind == VerdictKind::Recovered);
  }
  CHECK(applied > 0);
}
