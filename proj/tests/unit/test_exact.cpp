#include <algorithm>
#include <limits>

#include "doctest.h"
#include "bisectlp/error.hpp"
#include "bisectlp/exact.hpp"
#include "bisectlp/generators.hpp"

using namespace bisectlp;

namespace {

// Every labeling as a bitmask; balanced masks with node 0 unset are one per
// complement pair.
struct Naive {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<unsigned> optimizers;
};

Naive naive_bisection(const Graph& g) {
  const int n = g.num_nodes();
  Naive out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (mask & 1u) continue;
    if (__builtin_popcount(mask) != n / 2) continue;
    std::size_t cost = 0;
    for (const auto& e : g.edges())
      if (((mask >> e.u) & 1u) != ((mask >> e.v) & 1u)) ++cost;
    if (cost < out.best) {
      out.best = cost;
      out.optimizers.clear();
    }
    if (cost == out.best) out.optimizers.push_back(mask);
  }
  return out;
}

unsigned mask_of(const Bisection& b) {
  unsigned m = 0;
  for (int v = 0; v < b.size(); ++v)
    if (b[v] != b[0]) m |= 1u << v;
  return m;
}

Graph path4() { return Graph(4, {{0, 1}, {1, 2}, {2, 3}}); }

}  // namespace

TEST_CASE("exact: small reference graphs") {
  auto k4 = exact_min_bisection(circulant_regular(4, 3));
  CHECK(k4.optimal_cost == 4);
  CHECK(k4.optimizers.size() == 3);
  CHECK_FALSE(k4.planted_is_unique_optimum.has_value());

  auto p = exact_min_bisection(path4());
  CHECK(p.optimal_cost == 1);
  REQUIRE(p.optimizers.size() == 1);
  CHECK(p.optimizers[0] == Bisection::first_half(4));

  std::vector<Edge> e;
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) e.push_back({4 * s + i, 4 * s + j});
  for (int i = 0; i < 4; ++i) e.push_back({i, 4 + i});
  PlantedInstance two(Graph(8, e), Bisection::first_half(8));
  auto r = exact_min_bisection(two);
  CHECK(r.optimal_cost == 4);
  CHECK(r.planted_is_unique_optimum == true);
  CHECK(ip_recovery(two));
}

TEST_CASE("exact: agrees with naive enumeration") {
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + 2 * (trial % 5);
    const auto g = sample_er(n, 0.2 + 0.1 * (trial % 6), 300 + trial);
    INFO("trial " << trial);
    const auto ref = naive_bisection(g);
    const auto got = exact_min_bisection(g);
    CHECK(got.optimal_cost == ref.best);
    std::vector<unsigned> masks;
    for (const auto& b : got.optimizers) {
      CHECK(bisection_cost(g, b) == got.optimal_cost);
      CHECK(b[0] == 0);
      masks.push_back(mask_of(b));
    }
    std::sort(masks.begin(), masks.end());
    CHECK(masks == ref.optimizers);
  }
}

TEST_CASE("exact: thread count does not change the result") {
  const auto g = sample_er(14, 0.4, 5);
  const auto a = exact_min_bisection(g, {.cap = 20, .threads = 1});
  const auto b = exact_min_bisection(g, {.cap = 20, .threads = 3});
  CHECK(a.optimal_cost == b.optimal_cost);
  REQUIRE(a.optimizers.size() == b.optimizers.size());
  for (std::size_t i = 0; i < a.optimizers.size(); ++i) CHECK(a.optimizers[i].labels() == b.optimizers[i].labels());
}

TEST_CASE("exact: cap and parity errors") {
  CHECK_THROWS_AS(exact_min_bisection(Graph(22)), ConfigError);
  CHECK_THROWS_AS(exact_min_bisection(Graph(5)), ConfigError);
  CHECK_NOTHROW(exact_min_bisection(Graph(22), {.cap = 22}));
  CHECK_THROWS_AS(exact_min_bisection(Graph(34), {.cap = 40}), ConfigError);
}

TEST_CASE("exact: recovery on ties and tight instances") {
  PlantedInstance k4(circulant_regular(4, 3), Bisection::first_half(4));
  CHECK_FALSE(ip_recovery(k4));
  auto t = construct_tight_instance(16, 3, 3);
  CHECK_FALSE(ip_recovery(t.instance));
  auto complemented = PlantedInstance(path4(), Bisection::first_half(4).complement());
  CHECK(ip_recovery(complemented));
}

TEST_CASE("exact: sufficient condition in integer arithmetic") {
  CHECK(ip_sufficient_condition(8, {3, 1}));
  CHECK_FALSE(ip_sufficient_condition(16, {3, 3}));
  // Boundary: d_in - d_out = n/4 - 1 exactly is not enough.
  CHECK_FALSE(ip_sufficient_condition(16, {5, 2}));
  CHECK(ip_sufficient_condition(16, {6, 2}));
  CHECK_FALSE(ip_sufficient_condition(10, {2, 1}));
  CHECK(ip_sufficient_condition(10, {3, 1}));
}

TEST_CASE("exact: sufficient condition implies recovery") {
  int applicable = 0;
  for (std::uint64_t s = 0; s < 150; ++s) {
    const int n = 6 + 2 * static_cast<int>(s % 4);
    auto inst = sample_sbm(n, 0.95, 0.05, 9000 + s);
    if (!ip_sufficient_condition(inst)) continue;
    ++applicable;
    INFO("seed " << s);
    CHECK(ip_recovery(inst));
  }
  CHECK(applicable > 20);
}
