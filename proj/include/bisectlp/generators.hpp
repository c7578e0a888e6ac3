#pragma once

#include <cstdint>

#include "bisectlp/graph.hpp"

namespace bisectlp {

/// Erdős–Rényi G(n, p). Pairs are visited in lexicographic order, one
/// SplitMix64 draw each.
Graph sample_er(int n, double p, std::uint64_t seed);

/// Planted bisection model: within-side pairs are edges w.p. p_in, cross
/// pairs w.p. q_cross. The labeling is drawn first by Fisher–Yates over node
/// ids (first n/2 shuffled ids get label 0) unless fixed_labels is set, in
/// which case V1 = {0..n/2-1}. Throws ConfigError for odd n or bad
/// probabilities.
PlantedInstance sample_sbm(int n, double p_in, double q_cross, std::uint64_t seed,
                           bool fixed_labels = false);

/// G1 ⊆ G2 ⊆ G3 with marginals G(n,q), planted model (within q, cross p)
/// and G(n,p).
struct CoupledTriple {
  Graph g1;
  PlantedInstance g2;
  Graph g3;
};

/// Requires n even and 0 <= q <= p < 1. Draw order: labeling, G1 pairs,
/// cross augmentations, within augmentations; augmentation probability is
/// (p - q) / (1 - q).
CoupledTriple sample_coupled_triple(int n, double p, double q, std::uint64_t seed,
                                    bool fixed_labels = false);

/// Same coupling in the assortative orientation: G2 has within-probability
/// p_in and cross-probability q_cross (q_cross <= p_in), so that
/// G(n, q_cross) ⊆ G2 ⊆ G(n, p_in).
CoupledTriple sample_coupled_triple_assortative(int n, double p_in, double q_cross,
                                                std::uint64_t seed, bool fixed_labels = false);

/// d-regular graph on t nodes (t even, 0 <= d <= t-1): node i is joined to
/// i±s for s = 1..d/2, plus the antipodal node i + t/2 when d is odd.
Graph circulant_regular(int t, int d);

/// d-regular bipartite graph between {0..t/2-1} and {t/2..t-1}
/// (0 <= d <= t/2): node i links to t/2 + ((i + s) mod t/2), s = 0..d-1.
Graph circulant_bipartite_regular(int t, int d);

/// Planted instance with V1 = {0..n/2-1}, both sides circulant
/// d_in-regular and a circulant d_out-regular cross graph. Requires 4 | n.
PlantedInstance regular_planted_instance(int n, int d_in, int d_out);

enum class TightCase { kSparseInside, kSmallInside, kLargeInside };

struct TightInstance {
  PlantedInstance instance;
  /// A different bisection whose cost does not exceed the planted one.
  Bisection alternative;
  TightCase kind;
};

/// Worst-case instance with the requested (d_in, d_out) on which the minimum
/// bisection is not unique at the planted bisection. Node layout: V1 = {0..n/2-1}
/// and V2 = {n/2..n-1}; in the quarter-split cases U1, W1, U2, W2 are the
/// four consecutive blocks of n/4 nodes.
/// Requires 8 | n, d_in <= n/2-1, d_out <= n/2 and d_in - d_out <= n/4-1.
TightInstance construct_tight_instance(int n, int d_in, int d_out);

}  // namespace bisectlp
