#include "bisectlp/regularity.hpp"

#include <numeric>
#include <string>

#include "bisectlp/error.hpp"
#include "bisectlp/maxflow.hpp"

namespace bisectlp {

namespace {

void check_demand(const Graph& g, const DegreeDemand& b, const char* what) {
  if (static_cast<int>(b.size()) != g.num_nodes())
    throw ConfigError(std::string(what) + ": demand vector has wrong length");
  for (int v : b)
    if (v < 0) throw ConfigError(std::string(what) + ": negative demand");
}

// Integer degree audit; a mismatch here is a bug, not a missing factor.
void audit_factor(int n, const std::vector<Edge>& f, const DegreeDemand& b, const char* what) {
  std::vector<int> deg(n, 0);
  for (const auto& e : f) {
    ++deg[e.u];
    ++deg[e.v];
  }
  if (deg != b) throw SolverError(std::string(what) + ": extracted factor misses a degree target");
}

}  // namespace

std::optional<std::vector<Edge>> bipartite_b_factor(const Graph& g,
                                                    const std::vector<std::uint8_t>& side,
                                                    const DegreeDemand& b) {
  const int n = g.num_nodes();
  check_demand(g, b, "b-factor");
  if (static_cast<int>(side.size()) != n) throw ConfigError("b-factor: side vector has wrong length");
  for (const auto& e : g.edges())
    if (side[e.u] == side[e.v]) throw ConfigError("b-factor: graph is not bipartite for the given sides");
  long long sum0 = 0, sum1 = 0;
  for (int v = 0; v < n; ++v) {
    if (b[v] > g.degree(v)) return std::nullopt;
    (side[v] == 0 ? sum0 : sum1) += b[v];
  }
  if (sum0 != sum1) return std::nullopt;

  const int s = n, t = n + 1;
  MaxFlow net(n + 2);
  for (int v = 0; v < n; ++v) {
    if (side[v] == 0) net.add_arc(s, v, b[v]);
    else net.add_arc(v, t, b[v]);
  }
  std::vector<int> arc_of(g.num_edges());
  const auto& edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    arc_of[i] = side[u] == 0 ? net.add_arc(u, v, 1) : net.add_arc(v, u, 1);
  }
  if (net.run(s, t) < sum0) return std::nullopt;
  std::vector<Edge> f;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (net.flow(arc_of[i]) == 1) f.push_back(edges[i]);
  audit_factor(n, f, b, "b-factor");
  return f;
}

std::optional<Graph> regularize_bipartite_add(const Graph& g0, const Bisection& sides,
                                              int d_target) {
  const int n = g0.num_nodes();
  if (sides.size() != n) throw ConfigError("regularize: bipartition size differs from graph");
  const int m = n / 2;
  if (d_target < 0 || d_target > m) throw ConfigError("regularize: d_target must lie in [0, n/2]");
  for (const auto& e : g0.edges())
    if (sides.same_side(e.u, e.v)) throw ConfigError("regularize: input graph has an edge inside a side");
  if (d_target < g0.max_degree()) return std::nullopt;

  std::vector<Edge> comp;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!sides.same_side(u, v) && !g0.has_edge(u, v)) comp.push_back({u, v});
  Graph complement(n, std::move(comp));
  DegreeDemand b(n);
  for (int v = 0; v < n; ++v) b[v] = d_target - g0.degree(v);
  auto f = bipartite_b_factor(complement, sides.labels(), b);
  if (!f) return std::nullopt;
  std::vector<Edge> all = g0.edges();
  all.insert(all.end(), f->begin(), f->end());
  Graph out(n, std::move(all));
  for (int v = 0; v < n; ++v)
    if (out.degree(v) != d_target) throw SolverError("regularize: result is not regular");
  return out;
}

std::optional<std::vector<Edge>> general_f_factor(const Graph& g, const DegreeDemand& f,
                                                  const FactorOptions& opts) {
  const int n = g.num_nodes();
  check_demand(g, f, "f-factor");
  long long total = 0;
  for (int v = 0; v < n; ++v) {
    if (f[v] > g.degree(v)) return std::nullopt;
    total += f[v];
  }
  if (total % 2 != 0) return std::nullopt;

  // Gadget: node v becomes deg(v) stubs, one per incident edge, plus
  // deg(v) - f(v) absorbers joined to all of v's stubs. Each original edge
  // joins its two stubs. Perfect matchings correspond to f-factors.
  const auto& edges = g.edges();
  std::vector<int> stub_base(n + 1, 0), absorber_base(n + 1, 0);
  std::size_t gadget_edges = edges.size();
  for (int v = 0; v < n; ++v) {
    stub_base[v + 1] = stub_base[v] + g.degree(v);
    gadget_edges += static_cast<std::size_t>(g.degree(v)) * (g.degree(v) - f[v]);
  }
  if (gadget_edges > opts.max_gadget_edges)
    throw ConfigError("f-factor: gadget would have " + std::to_string(gadget_edges) +
                      " edges; use a smaller or sparser instance");
  absorber_base[0] = stub_base[n];
  for (int v = 0; v < n; ++v) absorber_base[v + 1] = absorber_base[v] + g.degree(v) - f[v];
  const int nodes = absorber_base[n];

  // Position of each edge in its endpoints' incidence lists.
  std::vector<int> fill(n, 0);
  std::vector<std::pair<int, int>> stub_of(edges.size());
  std::vector<std::vector<int>> adj(nodes);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const int a = stub_base[edges[i].u] + fill[edges[i].u]++;
    const int b = stub_base[edges[i].v] + fill[edges[i].v]++;
    stub_of[i] = {a, b};
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (int v = 0; v < n; ++v)
    for (int s = stub_base[v]; s < stub_base[v + 1]; ++s)
      for (int x = absorber_base[v]; x < absorber_base[v + 1]; ++x) {
        adj[s].push_back(x);
        adj[x].push_back(s);
      }

  // Warm start: greedy f-matching on the original edges, then leftover stubs
  // fill the absorbers.
  std::vector<int> mate(nodes, -1), used(n, 0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    if (used[u] < f[u] && used[v] < f[v]) {
      ++used[u];
      ++used[v];
      mate[stub_of[i].first] = stub_of[i].second;
      mate[stub_of[i].second] = stub_of[i].first;
    }
  }
  for (int v = 0; v < n; ++v) {
    int x = absorber_base[v];
    for (int s = stub_base[v]; s < stub_base[v + 1] && x < absorber_base[v + 1]; ++s) {
      if (mate[s] != -1) continue;
      mate[s] = x;
      mate[x] = s;
      ++x;
    }
  }

  auto run = max_matching(adj, std::move(mate), true);
  if (!run.perfect) return std::nullopt;
  std::vector<Edge> out;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (run.mate[stub_of[i].first] == stub_of[i].second) out.push_back(edges[i]);
  audit_factor(n, out, f, "f-factor");
  return out;
}

std::optional<Graph> regularize_subgraph(const Graph& g, int d_target, const FactorOptions& opts) {
  const int n = g.num_nodes();
  if (d_target < 0) throw ConfigError("regularize: d_target must be nonnegative");
  if (n == 0) return g;
  if (d_target > g.min_degree() || (static_cast<long long>(n) * d_target) % 2 != 0)
    return std::nullopt;
  auto f = general_f_factor(g, DegreeDemand(n, d_target), opts);
  if (!f) return std::nullopt;
  Graph out(n, std::move(*f));
  if (!out.is_subgraph_of(g)) throw SolverError("regularize: result is not a subgraph");
  return out;
}

}  // namespace bisectlp
