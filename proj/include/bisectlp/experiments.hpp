#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bisectlp/distances.hpp"
#include "bisectlp/metric_lp.hpp"

namespace bisectlp {

inline constexpr const char* kLibraryVersion = "1.0.0";

/// Evenly spaced axis lo, lo + step, ..., hi, built from integer multiples
/// of step so that the values do not drift.
std::vector<double> axis(double lo, double hi, double step);

struct PhaseConfig {
  int n = 40;
  int trials = 10;
  std::vector<double> ps = axis(0.50, 0.95, 0.05);
  std::vector<double> qs = axis(0.50, 0.95, 0.05);
  /// Only cells with q < p are run.
  bool require_q_below_p = true;
  std::uint64_t base_seed = 1;
  int threads = 1;
  /// Record wall-clock time per trial; off by default so that output files
  /// are reproducible byte for byte.
  bool timing = false;
  MetricLpOptions lp;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  VerdictKind kind = VerdictKind::FractionalOptimum;
  bool objective_match = false;
  /// Probe deviation, -1 when the probe did not run.
  double delta = -1.0;
  /// |E0| minus the relaxation value.
  double gap = 0.0;
  double ms = 0.0;
  /// Solver failure message; such trials count as failures.
  std::string error;
};

struct CellResult {
  /// Position in the full ps x qs grid (p-major).
  std::size_t cell_index = 0;
  double p = 0.0, q = 0.0;
  int n = 0;
  int trials = 0;
  int successes = 0;
  int errors = 0;
  double mean_gap = 0.0;
  double mean_ms = 0.0;
  std::vector<TrialRecord> records;
};

/// Seed of trial t in cell `cell`: derive_seed({base, cell, t}).
std::uint64_t trial_seed(std::uint64_t base, std::size_t cell, int trial);

/// Runs every trial (SBM sample with within-probability p and
/// cross-probability q, then the recovery verdict). Trials are spread over
/// config.threads workers; results do not depend on the schedule.
std::vector<CellResult> run_phase_diagram(const PhaseConfig& config);

/// CSV with header p,q,n,trials,successes,mean_gap,mean_ms.
void write_phase_csv(std::ostream& out, const std::vector<CellResult>& cells);
/// Reads the CSV back (per-trial records are not part of it).
std::vector<CellResult> read_phase_csv(std::istream& in);

/// JSON envelope: library version, full config, seeds and per-trial records.
std::string phase_to_json(const PhaseConfig& config, const std::vector<CellResult>& cells);
struct PhaseEnvelope {
  std::string version;
  PhaseConfig config;
  std::vector<CellResult> cells;
};
/// Throws ConfigError on malformed input.
PhaseEnvelope phase_from_json(const std::string& text);

/// Success fraction by p: the q at which it first drops below 1/2 along the
/// ascending q axis, linearly interpolated between grid points. NaN when the
/// fraction never drops (contour above the grid); q_min of the row when it
/// is already below 1/2 there.
struct ContourPoint {
  double p = 0.0;
  double q50 = 0.0;
  bool crosses = false;
};
std::vector<ContourPoint> half_success_contour(const std::vector<CellResult>& cells);

struct DistanceExperimentConfig {
  int n = 800;
  RegimeSpec regime;
  int seeds = 10;
  std::uint64_t base_seed = 1;
  double eps = 0.1;
  int threads = 1;
};

struct DistanceRow {
  std::uint64_t seed = 0;
  DistanceStats stats;
  bool rho_max_ok = false;
  bool rho_avg_ok = false;
  bool pass = false;
};

struct DistanceExperiment {
  RegimePrediction prediction;
  std::vector<DistanceRow> rows;
  int passes = 0;
};

/// Samples the regime's SBM per seed and compares the distance statistics
/// with the prediction band. Throws ConfigError where predictions are not
/// available (for instance the log regime with (alpha + beta)/2 <= 1).
DistanceExperiment run_distance_experiment(const DistanceExperimentConfig& config);

}  // namespace bisectlp
