#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bisectlp/graph.hpp"

namespace bisectlp {

/// Per-node degree targets of a factor.
using DegreeDemand = std::vector<int>;

/// Maximum-cardinality matching by Edmonds' blossom shrinking, bases kept in
/// a union-find. Returns mate[v] (-1 when v is exposed).
std::vector<int> blossom_max_matching(const Graph& g);

struct MatchingRun {
  std::vector<int> mate;
  std::size_t size = 0;
  /// False when stop_at_first_failure fired.
  bool perfect = false;
};

/// Same algorithm on raw adjacency lists, starting from a valid partial
/// matching `mate` (empty means all exposed). With stop_at_first_failure the
/// search ends at the first exposed node without an augmenting path; such a
/// node stays exposed in every maximum matching.
MatchingRun max_matching(const std::vector<std::vector<int>>& adj, std::vector<int> mate = {},
                         bool stop_at_first_failure = false);

/// Edge subset F of the bipartite graph g with deg_F(v) = b[v] for all v, via
/// unit-capacity max-flow; nullopt when none exists. `side` gives the 0/1
/// bipartition; an edge inside a side is a ConfigError.
std::optional<std::vector<Edge>> bipartite_b_factor(const Graph& g,
                                                    const std::vector<std::uint8_t>& side,
                                                    const DegreeDemand& b);

/// d_target-regular bipartite supergraph of g0 with the same bipartition
/// (sides must have equal size): g0 plus a b-factor of the bipartite
/// complement with b = d_target - deg. nullopt when none exists.
std::optional<Graph> regularize_bipartite_add(const Graph& g0, const Bisection& sides,
                                              int d_target);

struct FactorOptions {
  /// Refuse gadgets with more edges than this (ConfigError).
  std::size_t max_gadget_edges = 40'000'000;
};

/// f-factor of a general graph through Tutte's gadget and a perfect-matching
/// search. nullopt when none exists.
std::optional<std::vector<Edge>> general_f_factor(const Graph& g, const DegreeDemand& f,
                                                  const FactorOptions& opts = {});

/// Spanning d_target-regular subgraph of g, or nullopt.
std::optional<Graph> regularize_subgraph(const Graph& g, int d_target,
                                         const FactorOptions& opts = {});

}  // namespace bisectlp
