#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bisectlp/error.hpp"

namespace bisectlp {

/// Raised when the log-regime parameters admit no exact recovery at all.
class NoRecoveryRegion : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// True when 1/(1 - omega) is within relative 1e-9 of an integer.
bool inverse_gap_is_integer(double omega);

/// Very dense regime: recovery holds w.h.p. for q < p - 1/2. Needs 1/2 < p < 1.
double lp_recovery_boundary_very_dense(double p);

/// Non-recovery threshold on beta for p = alpha n^-omega, q = beta n^-omega:
/// above it the relaxation fails w.h.p. omega = 0 needs 0 < alpha < 1.
/// `integer_override` forces the integrality test on 1/(1 - omega).
double lp_nonrecovery_boundary(double omega, double alpha,
                               std::optional<bool> integer_override = std::nullopt);

/// (sqrt(alpha) - sqrt(2))^2; throws NoRecoveryRegion for alpha < 2.
double info_theoretic_log_boundary(double alpha);

/// Both conditions of the SDP recovery guarantee:
/// log n / (3n) < p < 1/2 and p - q >= (12 + eps) sqrt(p log n / n).
bool sdp_sufficient(int n, double p, double q, double eps);

struct ThresholdCurve {
  std::string name;
  std::vector<std::pair<double, double>> samples;
  /// omega for dense-regime curves, NaN otherwise.
  double omega = 0.0;
};

enum class CurveRegime { VeryDense, Dense, Log };

/// Abscissa grid lo, lo + step, ... <= hi (endpoints outside a curve's
/// domain are skipped). Dense curves use `alpha` for the ratio sweep and
/// `omegas` for the beta(alpha) curves.
struct CurveGrid {
  double lo = 0.5;
  double hi = 1.0;
  double step = 0.01;
  double alpha = 0.8;
  std::vector<double> omegas = {0.25, 0.5, 0.6, 2.0 / 3.0};
};

std::vector<ThresholdCurve> emit_curves(CurveRegime regime, const CurveGrid& grid);

}  // namespace bisectlp
