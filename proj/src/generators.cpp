#include "bisectlp/generators.hpp"

#include <numeric>
#include <string>
#include <vector>

#include "bisectlp/error.hpp"
#include "bisectlp/random.hpp"

namespace bisectlp {
namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(what) + " must lie in [0, 1]");
}

std::vector<std::uint8_t> draw_labels(int n, SplitMix64& rng, bool fixed) {
  std::vector<std::uint8_t> side(n, 1);
  if (fixed) {
    for (int v = 0; v < n / 2; ++v) side[v] = 0;
    return side;
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i >= 1; --i) {
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  for (int k = 0; k < n / 2; ++k) side[perm[k]] = 0;
  return side;
}

// Places the edges of `local` onto the node ids listed in `ids`.
void embed(const Graph& local, const std::vector<int>& ids, std::vector<Edge>& out) {
  for (const auto& e : local.edges()) out.push_back({ids[e.u], ids[e.v]});
}

// d-regular bipartite block between node lists a and b (|a| = |b|).
void embed_bipartite(int d, const std::vector<int>& a, const std::vector<int>& b,
                     std::vector<Edge>& out) {
  std::vector<int> ids(a);
  ids.insert(ids.end(), b.begin(), b.end());
  embed(circulant_bipartite_regular(static_cast<int>(ids.size()), d), ids, out);
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> r(hi - lo);
  std::iota(r.begin(), r.end(), lo);
  return r;
}

}  // namespace

Graph sample_er(int n, double p, std::uint64_t seed) {
  if (n < 1) throw ConfigError("sample_er: n must be >= 1");
  check_probability(p, "sample_er: p");
  SplitMix64 rng(seed);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.push_back({i, j});
  return Graph(n, std::move(edges));
}

PlantedInstance sample_sbm(int n, double p_in, double q_cross, std::uint64_t seed,
                           bool fixed_labels) {
  if (n < 2 || n % 2 != 0) throw ConfigError("sample_sbm: n must be even and >= 2");
  check_probability(p_in, "sample_sbm: p");
  check_probability(q_cross, "sample_sbm: q");
  SplitMix64 rng(seed);
  auto side = draw_labels(n, rng, fixed_labels);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(side[i] == side[j] ? p_in : q_cross)) edges.push_back({i, j});
  return PlantedInstance(Graph(n, std::move(edges)), Bisection(std::move(side)));
}

namespace {

// Starts from G(n, base) and ORs in Ber(a) on `first` pairs (within or cross)
// to form the middle graph, then on the remaining pairs to form the top graph.
CoupledTriple coupled(int n, double low, double high, std::uint64_t seed, bool fixed_labels,
                      bool augment_cross_first) {
  if (n < 2 || n % 2 != 0) throw ConfigError("coupled triple: n must be even and >= 2");
  if (!(low >= 0.0 && low <= high && high < 1.0)) {
    throw ConfigError("coupled triple: requires 0 <= q <= p < 1");
  }
  SplitMix64 rng(seed);
  auto side = draw_labels(n, rng, fixed_labels);
  const double a = (high - low) / (1.0 - low);

  std::vector<std::uint8_t> present(static_cast<std::size_t>(n) * n, 0);
  auto at = [&](int i, int j) -> std::uint8_t& { return present[static_cast<std::size_t>(i) * n + j]; };
  auto collect = [&] {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (at(i, j)) e.push_back({i, j});
    return e;
  };

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) at(i, j) = rng.bernoulli(low) ? 1 : 0;
  Graph g1(n, collect());

  auto augment = [&](bool cross) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if ((side[i] != side[j]) == cross && rng.bernoulli(a)) at(i, j) = 1;
  };
  augment(augment_cross_first);
  PlantedInstance g2(Graph(n, collect()), Bisection(side));
  augment(!augment_cross_first);
  Graph g3(n, collect());
  return {std::move(g1), std::move(g2), std::move(g3)};
}

}  // namespace

CoupledTriple sample_coupled_triple(int n, double p, double q, std::uint64_t seed,
                                    bool fixed_labels) {
  if (q >= 1.0) throw ConfigError("coupled triple: q must be < 1");
  if (q > p) throw ConfigError("coupled triple: requires q <= p");
  return coupled(n, q, p, seed, fixed_labels, /*augment_cross_first=*/true);
}

CoupledTriple sample_coupled_triple_assortative(int n, double p_in, double q_cross,
                                                std::uint64_t seed, bool fixed_labels) {
  if (q_cross > p_in) throw ConfigError("coupled triple: requires q <= p");
  return coupled(n, q_cross, p_in, seed, fixed_labels, /*augment_cross_first=*/false);
}

Graph circulant_regular(int t, int d) {
  if (t < 0 || t % 2 != 0) throw ConfigError("circulant_regular: t must be even");
  if (d < 0 || (d > 0 && d >= t)) throw ConfigError("circulant_regular: need 0 <= d <= t-1");
  std::vector<Edge> edges;
  for (int s = 1; s <= d / 2; ++s)
    for (int i = 0; i < t; ++i) {
      const int j = (i + s) % t;
      // Each offset s < t/2 yields the t distinct pairs {i, i+s}.
      edges.push_back({std::min(i, j), std::max(i, j)});
    }
  if (d % 2 == 1)
    for (int i = 0; i < t / 2; ++i) edges.push_back({i, i + t / 2});
  return Graph(t, std::move(edges));
}

Graph circulant_bipartite_regular(int t, int d) {
  if (t < 0 || t % 2 != 0) throw ConfigError("circulant_bipartite_regular: t must be even");
  const int h = t / 2;
  if (d < 0 || d > h) throw ConfigError("circulant_bipartite_regular: need 0 <= d <= t/2");
  std::vector<Edge> edges;
  for (int i = 0; i < h; ++i)
    for (int s = 0; s < d; ++s) edges.push_back({i, h + (i + s) % h});
  return Graph(t, std::move(edges));
}

PlantedInstance regular_planted_instance(int n, int d_in, int d_out) {
  if (n <= 0 || n % 4 != 0) throw ConfigError("regular instance: n must be a positive multiple of 4");
  const int half = n / 2;
  std::vector<Edge> edges;
  embed(circulant_regular(half, d_in), range(0, half), edges);
  embed(circulant_regular(half, d_in), range(half, n), edges);
  embed_bipartite(d_out, range(0, half), range(half, n), edges);
  return PlantedInstance(Graph(n, std::move(edges)), Bisection::first_half(n));
}

TightInstance construct_tight_instance(int n, int d_in, int d_out) {
  if (n <= 0 || n % 8 != 0) throw ConfigError("tight instance: n must be a positive multiple of 8");
  if (d_in < 0 || d_out < 0) throw ConfigError("tight instance: degrees must be nonnegative");
  if (d_in > n / 2 - 1) throw ConfigError("tight instance: violates d_in <= n/2 - 1");
  if (d_out > n / 2) throw ConfigError("tight instance: violates d_out <= n/2");
  if (d_in - d_out > n / 4 - 1) throw ConfigError("tight instance: violates d_in - d_out <= n/4 - 1");

  const int half = n / 2;
  const int quarter = n / 4;
  std::vector<Edge> edges;
  auto planted = Bisection::first_half(n);
  std::vector<std::uint8_t> alt(n);
  TightCase kind;

  if (d_in <= d_out - 1) {
    kind = TightCase::kSparseInside;
    embed(circulant_regular(half, d_in), range(0, half), edges);
    embed(circulant_regular(half, d_in), range(half, n), edges);
    embed_bipartite(d_out, range(0, half), range(half, n), edges);
    // U1 = {0}, U2 = {n/2}: the alternative swaps these two nodes.
    alt = planted.labels();
    std::swap(alt[0], alt[half]);
  } else {
    const auto u1 = range(0, quarter), w1 = range(quarter, half);
    const auto u2 = range(half, half + quarter), w2 = range(half + quarter, n);
    if (d_in <= quarter - 1) {
      kind = TightCase::kSmallInside;
      for (const auto* block : {&u1, &w1, &u2, &w2}) embed(circulant_regular(quarter, d_in), *block, edges);
      embed_bipartite(d_out, u1, u2, edges);  // T1
      embed_bipartite(d_out, w1, w2, edges);  // T2
    } else {
      kind = TightCase::kLargeInside;
      const int s = d_in - quarter + 1;
      const int t = d_out - d_in + quarter - 1;
      for (const auto* block : {&u1, &w1, &u2, &w2}) embed(circulant_regular(quarter, quarter - 1), *block, edges);
      embed_bipartite(s, u1, w1, edges);  // S1
      embed_bipartite(s, u2, w2, edges);  // S2
      embed_bipartite(s, u1, w2, edges);  // R1
      embed_bipartite(s, u2, w1, edges);  // R2
      embed_bipartite(t, u1, u2, edges);  // T1
      embed_bipartite(t, w1, w2, edges);  // T2
    }
    // Alternative bisection U1 ∪ W2 versus U2 ∪ W1.
    for (int v : u1) alt[v] = 0;
    for (int v : w2) alt[v] = 0;
    for (int v : u2) alt[v] = 1;
    for (int v : w1) alt[v] = 1;
  }
  return {PlantedInstance(Graph(n, std::move(edges)), std::move(planted)), Bisection(std::move(alt)), kind};
}

}  // namespace bisectlp
