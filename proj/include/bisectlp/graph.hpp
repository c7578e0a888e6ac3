#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bisectlp {

/// Undirected edge stored canonically with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph on nodes 0..n-1.
///
/// Edges are kept sorted lexicographically; membership queries go through a
/// packed adjacency bit matrix, so has_edge is O(1).
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  /// Canonicalizes (i,j) to i<j and sorts. Throws ConfigError on self-loops,
  /// duplicates or out-of-range endpoints.
  Graph(int n, std::vector<Edge> edges);

  int num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(int i, int j) const;
  int degree(int v) const { return static_cast<int>(neighbors_[v].size()); }
  const std::vector<int>& neighbors(int v) const { return neighbors_[v]; }
  int min_degree() const;
  int max_degree() const;
  bool is_subgraph_of(const Graph& other) const;

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  void build_index();

  int n_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::vector<int>> neighbors_;
};

/// Balanced two-coloring of the nodes. Equality treats a labeling and its
/// complement as the same bisection.
class Bisection {
 public:
  Bisection() = default;
  /// Throws ConfigError unless labels are 0/1 with exactly n/2 of each.
  explicit Bisection(std::vector<std::uint8_t> side);

  /// V1 = {0..n/2-1}, V2 = {n/2..n-1}.
  static Bisection first_half(int n);

  int size() const { return static_cast<int>(side_.size()); }
  std::uint8_t operator[](int v) const { return side_[v]; }
  const std::vector<std::uint8_t>& labels() const { return side_; }
  bool same_side(int i, int j) const { return side_[i] == side_[j]; }
  std::vector<int> members(std::uint8_t label) const;
  Bisection complement() const;

  bool operator==(const Bisection& other) const;

 private:
  std::vector<std::uint8_t> side_;
};

struct DegreeParams {
  int d_in = 0;
  int d_out = 0;
  bool operator==(const DegreeParams&) const = default;
};

/// A graph together with its planted bisection.
struct PlantedInstance {
  Graph graph;
  Bisection planted;

  PlantedInstance() = default;
  /// Throws ConfigError if sizes disagree.
  PlantedInstance(Graph g, Bisection b);

  int num_nodes() const { return graph.num_nodes(); }
  /// E0: edges crossing the planted bisection.
  std::vector<Edge> cross_edges() const;
  /// E1 (label 0 side) or E2 (label 1 side).
  std::vector<Edge> inside_edges(std::uint8_t label) const;
  std::size_t num_cross_edges() const;
  int deg_in(int v) const;
  int deg_out(int v) const;
};

/// Number of edges whose endpoints carry different labels.
std::size_t bisection_cost(const Graph& g, const Bisection& b);

/// d_in = min within-side degree, d_out = max cross degree.
DegreeParams degree_params(const PlantedInstance& inst);

/// Graph induced on the given edge subset of the same node set.
Graph with_edges(int n, std::span<const Edge> edges);

}  // namespace bisectlp
