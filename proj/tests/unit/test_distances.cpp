#include <cmath>

#include "doctest.h"
#include "bisectlp/distances.hpp"
#include "bisectlp/error.hpp"
#include "bisectlp/generators.hpp"
#include "bisectlp/metric_lp.hpp"

using namespace bisectlp;

namespace {

// Floyd-Warshall reference; large sentinel for unreachable pairs.
std::vector<std::vector<int>> floyd(const Graph& g) {
  const int n = g.num_nodes();
  const int inf = 1 << 20;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

Graph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({std::min(i, (i + 1) % n), std::max(i, (i + 1) % n)});
  return Graph(n, e);
}

Graph complete(int n) { return sample_er(n, 1.0, 0); }

}  // namespace

TEST_CASE("distances: C5 values") {
  const auto s = distance_stats(cycle(5));
  CHECK(s.connected);
  CHECK(s.rho_max == 2);
  CHECK(s.rho_avg == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(s.c == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(s.b == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("distances: complete graphs have c = 0") {
  for (int n : {5, 8, 13}) {
    const auto s = distance_stats(complete(n));
    CHECK(s.rho_max == 1);
    CHECK(s.rho_avg == doctest::Approx(1.0 - 1.0 / n));
    CHECK(s.c == 0.0);
    CHECK(s.b == doctest::Approx(1.0 / (2.0 * (1.0 - 1.0 / n))));
  }
}

TEST_CASE("distances: diameter-two closed form") {
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 12 + trial;
    const auto g = sample_er(n, 0.7, 50 + trial);
    const auto s = distance_stats(g);
    if (s.rho_max != 2) continue;
    CHECK(s.rho_avg == doctest::Approx(2.0 * (1.0 - 1.0 / n) - 2.0 / (n * double(n)) * g.num_edges()));
  }
}

TEST_CASE("distances: BFS matches Floyd-Warshall and threading is exact") {
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 6 + trial * 3;
    const auto g = sample_er(n, 0.12 + 0.02 * (trial % 5), 300 + trial);
    const auto ref = floyd(g);
    const auto d = all_pairs_distances(g);
    bool connected = true;
    long long sum = 0;
    int mx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int r = ref[i][j] >= (1 << 20) ? -1 : ref[i][j];
        CHECK(d[i * n + j] == r);
        if (r < 0) connected = false;
        if (i < j && r > 0) {
          sum += r;
          mx = std::max(mx, r);
        }
      }
    const auto s1 = distance_stats(g, 1);
    const auto s4 = distance_stats(g, 4);
    CHECK(s1.connected == connected);
    CHECK(s4.connected == connected);
    if (connected) {
      CHECK(s1.rho_max == mx);
      CHECK(s1.rho_avg == 2.0 * sum / (double(n) * n));
      CHECK(s4.rho_avg == s1.rho_avg);
      CHECK(s4.rho_max == s1.rho_max);
    } else {
      CHECK(s1.rho_max == -1);
      CHECK(std::isnan(s1.c));
    }
  }
}

TEST_CASE("distances: b grows with c and shrinks with the average distance") {
  for (int n : {10, 40, 400})
    for (double rho = 1.0 - 1.0 / n; rho < 4.0; rho += 0.37)
      for (double c = 0.0; c < 10.0; c += 0.9) {
        // At rho = 1 - 1/n, b does not depend on c; allow rounding there.
        CHECK(b_value(c + 1e-3, rho, n) >= b_value(c, rho, n) * (1.0 - 1e-12));
        CHECK(b_value(c, rho + 1e-3, n) < b_value(c, rho, n));
      }
}

TEST_CASE("non-recovery: feasibility audit of the metric point") {
  const PlantedInstance c5(cycle(6), Bisection::first_half(6));
  const auto cert = nonrecovery_certificate(c5);
  CHECK(cert.audit_passed);
  CHECK(cert.x_tilde.sum() == doctest::Approx(9.0));
  CHECK(cert.objective == doctest::Approx(cert.lhs));

  // K_n split in half: b |E| equals |E0| exactly, so the certificate is void.
  const PlantedInstance kn(complete(10), Bisection::first_half(10));
  const auto k = nonrecovery_certificate(kn);
  CHECK(k.lhs == doctest::Approx(k.rhs));
  CHECK(k.audit_passed);

  const PlantedInstance split(Graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}}), Bisection::first_half(6));
  CHECK_THROWS_AS(nonrecovery_certificate(split), ConfigError);
  CHECK_THROWS_AS(nonrecovery_certificate(PlantedInstance(cycle(4), Bisection::first_half(4))), ConfigError);
}

TEST_CASE("non-recovery: certified instances are not recovered") {
  int applied = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto inst = sample_sbm(16, 0.6, 0.5, 900 + seed);
    if (!distance_stats(inst.graph).connected) continue;
    const auto cert = nonrecovery_certificate(inst);
    CHECK(cert.audit_passed);
    if (!cert.applies) continue;
    ++applied;
    const auto rep = solve_metric_lp(inst.graph);
    CHECK(rep.objective <= cert.objective + 1e-7);
    CHECK(cert.objective < cert.rhs);
    CHECK(lp_recovery_verdict(inst).kind != VerdictKind::Recovered);
  }
  CHECK(applied > 0);
}

TEST_CASE("regime predictions") {
  RegimeSpec vd{DistanceRegime::VeryDense, 0.9, 0.7};
  const auto a = predicted_regime(800, vd);
  CHECK(a.rho_max == 2.0);
  CHECK(a.rho_avg_low == doctest::Approx(0.9 * 1.2));

  RegimeSpec d5{DistanceRegime::Dense, 0, 0, 0.5, 1.0, 0.5};
  const auto b = predicted_regime(1500, d5);
  CHECK(b.rho_max == 3.0);
  CHECK(b.rho_avg == doctest::Approx(2.0 + std::exp(-1.0)));

  RegimeSpec d4{DistanceRegime::Dense, 0, 0, 0.4, 1.0, 0.5};
  const auto c = predicted_regime(1500, d4);
  CHECK(c.rho_max == 2.0);
  CHECK(c.rho_avg == 2.0);

  RegimeSpec lg{DistanceRegime::Log, 0, 0, 0, 1.5, 0.4};
  CHECK_THROWS_AS(predicted_regime(1000, lg), ConfigError);
  lg.alpha = 3.0;
  const auto l = predicted_regime(1000, lg);
  CHECK_FALSE(l.rho_max_exact);
  CHECK(l.rho_max_low < l.rho_max);
}
