#include "bisectlp/exact.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>

#include "bisectlp/error.hpp"

namespace bisectlp {
namespace {

constexpr int kHardCap = 32;

struct Block {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::uint64_t> masks;
};

// Next k-subset of the same size in increasing numeric order.
std::uint64_t gosper(std::uint64_t x) {
  const std::uint64_t c = x & (~x + 1);
  const std::uint64_t r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

// Block s holds the bisections whose smallest side-1 node is s; the other
// h-1 side-1 nodes are drawn from {s+1..n-1}.
Block scan_block(const std::vector<std::uint64_t>& adj, int n, int s) {
  Block out;
  const int h = n / 2;
  const int free = n - s - 1;
  if (free < h - 1) return out;
  const std::uint64_t full = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
  const std::uint64_t limit = 1ULL << free;
  std::uint64_t sub = (h - 1 == 0) ? 0 : ((1ULL << (h - 1)) - 1);
  while (true) {
    const std::uint64_t side1 = (1ULL << s) | (sub << (s + 1));
    std::size_t cost = 0;
    for (std::uint64_t rest = side1; rest; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      cost += std::popcount(adj[v] & ~side1 & full);
    }
    if (cost < out.best) {
      out.best = cost;
      out.masks.clear();
    }
    if (cost == out.best) out.masks.push_back(side1);
    if (sub == 0) break;
    sub = gosper(sub);
    if (sub >= limit) break;
  }
  return out;
}

}  // namespace

ExactResult exact_min_bisection(const Graph& g, const ExactOptions& options) {
  const int n = g.num_nodes();
  if (n % 2 != 0 || n < 2) throw ConfigError("exact: n must be even and >= 2");
  if (n > std::min(options.cap, kHardCap)) {
    throw ConfigError("exact: n=" + std::to_string(n) + " exceeds the enumeration cap " +
                      std::to_string(std::min(options.cap, kHardCap)) + "; raise it with --cap");
  }
  std::vector<std::uint64_t> adj(n, 0);
  for (const auto& e : g.edges()) {
    adj[e.u] |= 1ULL << e.v;
    adj[e.v] |= 1ULL << e.u;
  }

  const int blocks = n / 2 + 1;  // smallest side-1 node ranges over 1..n/2
  std::vector<Block> results(blocks);
  std::atomic<int> next{1};
  auto worker = [&] {
    for (int s = next++; s < blocks; s = next++) results[s] = scan_block(adj, n, s);
  };
  const int width = std::max(1, std::min(options.threads, blocks));
  std::vector<std::thread> pool;
  for (int t = 1; t < width; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ExactResult res;
  res.optimal_cost = std::numeric_limits<std::size_t>::max();
  for (const auto& b : results) res.optimal_cost = std::min(res.optimal_cost, b.best);
  std::vector<std::uint64_t> masks;
  for (const auto& b : results)
    if (b.best == res.optimal_cost) masks.insert(masks.end(), b.masks.begin(), b.masks.end());
  std::sort(masks.begin(), masks.end());
  res.optimizers.reserve(masks.size());
  for (auto m : masks) {
    std::vector<std::uint8_t> side(n);
    for (int v = 0; v < n; ++v) side[v] = (m >> v) & 1U;
    res.optimizers.emplace_back(std::move(side));
  }
  return res;
}

ExactResult exact_min_bisection(const PlantedInstance& inst, const ExactOptions& options) {
  auto res = exact_min_bisection(inst.graph, options);
  res.planted_is_unique_optimum = res.optimizers.size() == 1 && res.optimizers[0] == inst.planted;
  return res;
}

bool ip_recovery(const PlantedInstance& inst, const ExactOptions& options) {
  return *exact_min_bisection(inst, options).planted_is_unique_optimum;
}

bool ip_sufficient_condition(int n, DegreeParams params) {
  return 4LL * (params.d_in - params.d_out) > static_cast<long long>(n) - 4;
}

bool ip_sufficient_condition(const PlantedInstance& inst) {
  return ip_sufficient_condition(inst.num_nodes(), degree_params(inst));
}

}  // namespace bisectlp
