#include "bisectlp/thresholds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace bisectlp {

bool inverse_gap_is_integer(double omega) {
  const double k = 1.0 / (1.0 - omega);
  return std::abs(k - std::round(k)) <= 1e-9 * k;
}

double lp_recovery_boundary_very_dense(double p) {
  if (!(p > 0.5 && p < 1.0)) throw ConfigError("recovery boundary: need 1/2 < p < 1");
  return p - 0.5;
}

double lp_nonrecovery_boundary(double omega, double alpha, std::optional<bool> integer_override) {
  if (!(omega >= 0.0 && omega < 1.0)) throw ConfigError("non-recovery boundary: need 0 <= omega < 1");
  if (!(alpha > 0.0)) throw ConfigError("non-recovery boundary: need alpha > 0");
  if (omega == 0.0) {
    if (alpha >= 1.0) throw ConfigError("non-recovery boundary: omega = 0 needs alpha < 1");
    const double r = 3.0 - alpha;
    return std::max((r - std::sqrt(r * r - 4.0 * alpha)) / 2.0, 2.0 * alpha - 1.0);
  }
  const double k = 1.0 / (1.0 - omega);
  const bool integral = integer_override.value_or(inverse_gap_is_integer(omega));
  if (!integral) return alpha / (2.0 * std::ceil(k) - 1.0);
  const long kk = std::lround(k);
  if (kk == 2) {
    const double e = std::exp(-alpha * alpha);
    return std::max((1.0 - 2.0 * e) / (2.0 - e), 1.0 / (3.0 + 2.0 * e)) * alpha;
  }
  return alpha / (2.0 * kk - 1.0 + 2.0 * std::exp(-std::pow(alpha, static_cast<double>(kk))));
}

double info_theoretic_log_boundary(double alpha) {
  if (!(alpha >= 2.0)) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " < 2: exact recovery is impossible for every beta";
    throw NoRecoveryRegion(msg.str());
  }
  const double d = std::sqrt(alpha) - std::sqrt(2.0);
  return d * d;
}

bool sdp_sufficient(int n, double p, double q, double eps) {
  if (n < 3) throw ConfigError("sdp condition: need n >= 3");
  const double ln = std::log(static_cast<double>(n));
  const bool first = ln / (3.0 * n) < p && p < 0.5;
  const bool second = p - q >= (12.0 + eps) * std::sqrt(p * ln / n);
  return first && second;
}

namespace {

std::vector<double> grid_points(const CurveGrid& g) {
  if (!(g.step > 0.0)) throw ConfigError("curve grid: step must be positive");
  if (!(g.hi >= g.lo)) throw ConfigError("curve grid: hi must not be below lo");
  std::vector<double> xs;
  const long count = static_cast<long>(std::floor((g.hi - g.lo) / g.step + 1e-9));
  for (long i = 0; i <= count; ++i) xs.push_back(g.lo + static_cast<double>(i) * g.step);
  return xs;
}

std::string omega_label(double w) {
  std::ostringstream s;
  s.precision(4);
  s << w;
  return s.str();
}

}  // namespace

std::vector<ThresholdCurve> emit_curves(CurveRegime regime, const CurveGrid& grid) {
  const auto xs = grid_points(grid);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<ThresholdCurve> out;
  switch (regime) {
    case CurveRegime::VeryDense: {
      ThresholdCurve rec{"lp_recovery", {}, nan}, non{"lp_nonrecovery", {}, 0.0};
      for (double p : xs) {
        if (p > 0.5 && p < 1.0) rec.samples.push_back({p, lp_recovery_boundary_very_dense(p)});
        if (p > 0.0 && p < 1.0) non.samples.push_back({p, lp_nonrecovery_boundary(0.0, p)});
      }
      out = {rec, non};
      break;
    }
    case CurveRegime::Dense: {
      ThresholdCurve ratio{"lp_nonrecovery_ratio_alpha_" + omega_label(grid.alpha), {}, nan};
      for (double w : xs)
        if (w >= 0.0 && w < 1.0 && (w > 0.0 || grid.alpha < 1.0))
          ratio.samples.push_back({w, lp_nonrecovery_boundary(w, grid.alpha) / grid.alpha});
      out.push_back(ratio);
      for (double w : grid.omegas) {
        ThresholdCurve c{"lp_nonrecovery_omega_" + omega_label(w), {}, w};
        for (double a : xs)
          if (a > 0.0 && (w > 0.0 || a < 1.0)) c.samples.push_back({a, lp_nonrecovery_boundary(w, a)});
        out.push_back(c);
      }
      break;
    }
    case CurveRegime::Log: {
      ThresholdCurve it{"info_theoretic", {}, nan};
      for (double a : xs)
        if (a >= 2.0) it.samples.push_back({a, info_theoretic_log_boundary(a)});
      out.push_back(it);
      break;
    }
  }
  return out;
}

}  // namespace bisectlp
