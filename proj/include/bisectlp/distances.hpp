#pragma once

#include <string>
#include <vector>

#include "bisectlp/graph.hpp"
#include "bisectlp/metric_lp.hpp"
#include "bisectlp/thresholds.hpp"

namespace bisectlp {

struct DistanceStats {
  int n = 0;
  bool connected = false;
  /// Diameter; -1 when the graph is disconnected.
  int rho_max = -1;
  /// (2/n^2) sum_{i<j} rho(i,j); NaN when disconnected.
  double rho_avg = 0.0;
  /// NaN when disconnected or n < 5.
  double c = 0.0;
  double b = 0.0;
};

/// BFS from every node; sources are split over `threads` workers and the
/// reduction is exact (integer sums), so the result does not depend on it.
DistanceStats distance_stats(const Graph& g, int threads = 1);

/// Row-major n x n hop distances, -1 between components.
std::vector<int> all_pairs_distances(const Graph& g);

/// max{0, (3 rho_max - 4 rho_avg) / (1 - 4/n)}, n >= 5.
double c_value(double rho_max, double rho_avg, int n);
/// (1 + c) / (2 rho_avg + 2 c (1 - 1/n)).
double b_value(double c, double rho_avg, int n);

struct NonRecoveryCertificate {
  bool applies = false;
  /// Feasible point built from the graph metric.
  CutVector x_tilde;
  /// b(G) |E| and |E0|.
  double lhs = 0.0;
  double rhs = 0.0;
  /// sum_{ij in E} x_tilde_ij; equals lhs.
  double objective = 0.0;
  /// Feasibility audit of x_tilde.
  bool audit_passed = false;
  double balance_error = 0.0;
  double max_violation = 0.0;
  DistanceStats stats;
};

/// Throws ConfigError when the graph is disconnected or n < 5.
NonRecoveryCertificate nonrecovery_certificate(const PlantedInstance& inst);

enum class DistanceRegime { VeryDense, Dense, Log };
const char* to_string(DistanceRegime r);

/// very-dense: p, q constants; dense: p = alpha n^-omega, q = beta n^-omega;
/// log: p = alpha log n / n, q = beta log n / n.
struct RegimeSpec {
  DistanceRegime regime = DistanceRegime::VeryDense;
  double p = 0.0, q = 0.0;
  double omega = 0.0, alpha = 0.0, beta = 0.0;
};

struct RegimePrediction {
  double rho_max = 0.0;
  double rho_max_low = 0.0, rho_max_high = 0.0;
  double rho_avg = 0.0;
  double rho_avg_low = 0.0, rho_avg_high = 0.0;
  /// Diameter is predicted exactly (dense regimes) or only up to 1 +- eps.
  bool rho_max_exact = false;
};

/// Asymptotic distance predictions with a (1 +- eps) band. Throws
/// ConfigError outside the proven range (log regime needs (alpha+beta)/2 > 1).
RegimePrediction predicted_regime(int n, const RegimeSpec& spec, double eps = 0.1);

/// Edge probabilities (within, cross) implied by the regime at size n.
std::pair<double, double> regime_probabilities(int n, const RegimeSpec& spec);

}  // namespace bisectlp
