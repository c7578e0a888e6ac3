#include "bisectlp/graph.hpp"

#include <algorithm>
#include <string>

#include "bisectlp/error.hpp"

namespace bisectlp {

Graph::Graph(int n) : n_(n) {
  if (n < 0) throw ConfigError("graph: negative node count");
  build_index();
}

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw ConfigError("graph: negative node count");
  for (auto& e : edges_) {
    if (e.u == e.v) throw ConfigError("graph: self-loop at node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= n) {
      throw ConfigError("graph: edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                        ") out of range for n=" + std::to_string(n));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw ConfigError("graph: duplicate edge");
  }
  build_index();
}

void Graph::build_index() {
  words_per_row_ = (static_cast<std::size_t>(n_) + 63) / 64;
  bits_.assign(words_per_row_ * static_cast<std::size_t>(n_), 0);
  neighbors_.assign(n_, {});
  for (const auto& e : edges_) {
    bits_[e.u * words_per_row_ + e.v / 64] |= std::uint64_t{1} << (e.v % 64);
    bits_[e.v * words_per_row_ + e.u / 64] |= std::uint64_t{1} << (e.u % 64);
    neighbors_[e.u].push_back(e.v);
    neighbors_[e.v].push_back(e.u);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

bool Graph::has_edge(int i, int j) const {
  if (i == j) return false;
  return (bits_[i * words_per_row_ + j / 64] >> (j % 64)) & 1U;
}

int Graph::min_degree() const {
  int best = n_ == 0 ? 0 : degree(0);
  for (int v = 1; v < n_; ++v) best = std::min(best, degree(v));
  return best;
}

int Graph::max_degree() const {
  int best = 0;
  for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
  return best;
}

bool Graph::is_subgraph_of(const Graph& other) const {
  if (n_ != other.n_) return false;
  return std::all_of(edges_.begin(), edges_.end(),
                     [&](const Edge& e) { return other.has_edge(e.u, e.v); });
}

Graph with_edges(int n, std::span<const Edge> edges) {
  return Graph(n, std::vector<Edge>(edges.begin(), edges.end()));
}

Bisection::Bisection(std::vector<std::uint8_t> side) : side_(std::move(side)) {
  const auto n = side_.size();
  if (n % 2 != 0) throw ConfigError("bisection: node count must be even");
  std::size_t ones = 0;
  for (auto s : side_) {
    if (s > 1) throw ConfigError("bisection: labels must be 0 or 1");
    ones += s;
  }
  if (2 * ones != n) throw ConfigError("bisection: labeling is not balanced");
}

Bisection Bisection::first_half(int n) {
  std::vector<std::uint8_t> side(n, 0);
  for (int v = n / 2; v < n; ++v) side[v] = 1;
  return Bisection(std::move(side));
}

std::vector<int> Bisection::members(std::uint8_t label) const {
  std::vector<int> out;
  for (int v = 0; v < size(); ++v)
    if (side_[v] == label) out.push_back(v);
  return out;
}

Bisection Bisection::complement() const {
  auto flipped = side_;
  for (auto& s : flipped) s ^= 1U;
  return Bisection(std::move(flipped));
}

bool Bisection::operator==(const Bisection& other) const {
  if (side_.size() != other.side_.size()) return false;
  if (side_.empty()) return true;
  const bool flip = side_[0] != other.side_[0];
  for (std::size_t v = 0; v < side_.size(); ++v) {
    if ((side_[v] != other.side_[v]) != flip) return false;
  }
  return true;
}

PlantedInstance::PlantedInstance(Graph g, Bisection b) : graph(std::move(g)), planted(std::move(b)) {
  if (graph.num_nodes() != planted.size()) {
    throw ConfigError("planted instance: partition size does not match graph");
  }
}

std::vector<Edge> PlantedInstance::cross_edges() const {
  std::vector<Edge> out;
  for (const auto& e : graph.edges())
    if (!planted.same_side(e.u, e.v)) out.push_back(e);
  return out;
}

std::vector<Edge> PlantedInstance::inside_edges(std::uint8_t label) const {
  std::vector<Edge> out;
  for (const auto& e : graph.edges())
    if (planted[e.u] == label && planted[e.v] == label) out.push_back(e);
  return out;
}

std::size_t PlantedInstance::num_cross_edges() const { return bisection_cost(graph, planted); }

int PlantedInstance::deg_in(int v) const {
  int d = 0;
  for (int w : graph.neighbors(v)) d += planted.same_side(v, w) ? 1 : 0;
  return d;
}

int PlantedInstance::deg_out(int v) const { return graph.degree(v) - deg_in(v); }

std::size_t bisection_cost(const Graph& g, const Bisection& b) {
  if (b.size() != g.num_nodes()) throw ConfigError("bisection_cost: size mismatch");
  std::size_t cost = 0;
  for (const auto& e : g.edges()) cost += b.same_side(e.u, e.v) ? 0 : 1;
  return cost;
}

DegreeParams degree_params(const PlantedInstance& inst) {
  DegreeParams p;
  const int n = inst.num_nodes();
  if (n == 0) return p;
  p.d_in = inst.deg_in(0);
  for (int v = 0; v < n; ++v) {
    p.d_in = std::min(p.d_in, inst.deg_in(v));
    p.d_out = std::max(p.d_out, inst.deg_out(v));
  }
  return p;
}

}  // namespace bisectlp
