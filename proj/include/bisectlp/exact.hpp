#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bisectlp/graph.hpp"

namespace bisectlp {

struct ExactOptions {
  /// Largest n accepted; enumeration cost grows like C(n, n/2).
  int cap = 20;
  int threads = 1;
};

struct ExactResult {
  std::size_t optimal_cost = 0;
  /// All minimum bisections, one per complement pair, with node 0 on side 0.
  std::vector<Bisection> optimizers;
  /// Set when a planted bisection was supplied.
  std::optional<bool> planted_is_unique_optimum;
};

/// Exhaustive search over all C(n, n/2)/2 bisections. Throws ConfigError for
/// odd n or n above options.cap (hard limit 32).
ExactResult exact_min_bisection(const Graph& g, const ExactOptions& options = {});
ExactResult exact_min_bisection(const PlantedInstance& inst, const ExactOptions& options = {});

/// True iff the planted bisection is the unique minimum bisection.
bool ip_recovery(const PlantedInstance& inst, const ExactOptions& options = {});

/// d_in - d_out > n/4 - 1, evaluated as 4(d_in - d_out) > n - 4 in integers.
bool ip_sufficient_condition(int n, DegreeParams params);
bool ip_sufficient_condition(const PlantedInstance& inst);

}  // namespace bisectlp
