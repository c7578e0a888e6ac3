#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bisectlp/graph.hpp"
#include "bisectlp/lp.hpp"

namespace bisectlp {

/// Flat index of the unordered pair {i, j} among the C(n,2) pairs, ordered
/// (0,1), (0,2), ..., (0,n-1), (1,2), ... Throws ConfigError if i == j.
std::size_t pair_index(int i, int j, int n);
inline std::size_t num_pairs(int n) { return static_cast<std::size_t>(n) * (n - 1) / 2; }

/// A point of [0,1]^{C(n,2)} with symmetric access.
struct CutVector {
  int n = 0;
  std::vector<double> values;

  double at(int i, int j) const { return values[pair_index(i, j, n)]; }
  double sum() const;
};

/// 0/1 indicator of the pairs split by the bisection.
CutVector cut_vector(const Bisection& b);

/// One triangle row on the triple i < j < k. Kinds 0..2 are the rooted rows
/// x_pair <= x_other1 + x_other2 with the pair {i,j}, {i,k}, {j,k} on the
/// left respectively; kind 3 is x_ij + x_ik + x_jk <= 2.
struct TriangleRow {
  int i = 0, j = 0, k = 0;
  int kind = 0;
  double violation = 0.0;

  std::uint64_t key(int n) const;
  SparseVec coefficients(int n) const;
  double rhs() const { return kind == 3 ? 2.0 : 0.0; }
  /// row . x - rhs
  double lhs_minus_rhs(const CutVector& x) const;
};

/// All rows violated by more than tol, most violated first (ties broken by
/// triple and kind), truncated to max_new.
std::vector<TriangleRow> separate_triangles(const CutVector& x, double tol, std::size_t max_new);

struct MetricLpOptions {
  /// Violation threshold for adding triangle rows.
  double separation_tol = 1e-8;
  std::size_t batch = 5000;
  /// Rows with slack above drop_slack for drop_after consecutive rounds are
  /// removed from the working LP.
  int drop_after = 3;
  double drop_slack = 1e-6;
  int max_rounds = 10'000;
  bool probe = true;
  /// Objective match: |lp - |E0|| <= objective_tol * (1 + |E0|).
  double objective_tol = 1e-6;
  /// Uniqueness: probe deviation <= probe_tol * n^2.
  double probe_tol = 1e-6;
  /// The probe fixes variables whose reduced cost exceeds this in magnitude
  /// and makes rows with such a dual tight; neither can move on the optimal
  /// face.
  double face_fix_tol = 1e-6;
  LpTolerances lp;
};

struct MetricSolveReport {
  LpStatus status = LpStatus::Infeasible;
  CutVector solution;
  double objective = 0.0;
  int rounds = 0;
  std::size_t constraints_added = 0;
  long iterations = 0;
  /// Triangle rows present in the working LP at termination, in row order
  /// (row 0 of the LP is the balance row).
  std::vector<TriangleRow> rows;
  Basis basis;
  /// Reduced costs of the pair variables and duals of the LP rows (balance
  /// row first) at the final basis.
  std::vector<double> reduced_costs;
  std::vector<double> row_duals;
};

/// Metric relaxation: min sum a_ij x_ij over [0,1]^{C(n,2)} with
/// sum x = n^2/4 and all triangle rows, separated lazily.
MetricSolveReport solve_metric_lp(const Graph& g, const MetricLpOptions& opts = {});

struct ProbeResult {
  /// False when the planted vector is not optimal for the relaxation; delta
  /// is then meaningless.
  bool planted_optimal = false;
  std::string error;
  /// max ||x - planted||_1 over the optimal face.
  double delta = 0.0;
  CutVector argmax;
  int rounds = 0;
};

/// Maximizes the L1 distance to `planted` over the optimal face of the
/// relaxation: the objective is pinned by a_ij . x <= a_ij . planted,
/// variables with clearly nonzero reduced cost stay at their bound and rows
/// with clearly nonzero dual stay tight. Warm
/// started from the main solve; further triangle rows are separated as needed.
ProbeResult uniqueness_probe(const Graph& g, const MetricSolveReport& report,
                             const CutVector& planted, const MetricLpOptions& opts = {});

enum class VerdictKind { Recovered, AlternateOptimum, FractionalOptimum };
const char* to_string(VerdictKind k);

struct RecoveryVerdict {
  VerdictKind kind = VerdictKind::FractionalOptimum;
  CutVector witness;
  double lp_value = 0.0;
  double planted_value = 0.0;
  bool objective_match = false;
  /// Probe deviation; negative when the probe did not run.
  double delta = -1.0;
  int rounds = 0;
  std::size_t constraints_added = 0;
};

RecoveryVerdict lp_recovery_verdict(const PlantedInstance& inst, const MetricLpOptions& opts = {});

}  // namespace bisectlp
