#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bisectlp/graph.hpp"

namespace bisectlp {

/// Regularity parameters of a planted instance as seen by the closed-form
/// certificate.
struct CertificateParameters {
  bool regular = false;
  /// Why the instance is not regular (empty when it is).
  std::string reason;
  int n = 0, d_in = 0, d_out = 0;
  /// 2 d_out / (n - 4 d_in - 4); NaN when the denominator vanishes.
  double omega_bar = 0.0;
  /// d_in - d_out >= n/4 - 1 (planted cut optimal for the relaxation).
  bool condition_holds = false;
  /// d_in - d_out >= n/4 (unique optimality).
  bool uniqueness_condition = false;
};

CertificateParameters certificate_parameters(const PlantedInstance& inst);

/// Closed-form dual multipliers for the metric relaxation at the planted cut
/// of a regular instance. Multipliers are evaluated on demand.
///
/// lambda(p, q, r) is the multiplier of the row x_pq <= x_pr + x_qr; mu(i, j, k)
/// that of x_ij + x_ik + x_jk <= 2; omega_bar that of sum x = n^2/4.
struct DualCertificate {
  PlantedInstance instance;
  int n = 0, d_in = 0, d_out = 0;
  double omega_bar = 0.0;
  /// gamma by pair index; zero off the inside edges.
  std::vector<double> gamma;

  double gamma_at(int i, int j) const;
  double lambda(int p, int q, int r) const;
  double mu(int i, int j, int k) const;
  /// -2 sum mu - (n^2/4) omega_bar.
  double dual_objective() const;
};

/// Throws ConfigError when the instance is not regular or the optimality
/// condition fails. With d_out = 0 the certificate is omega = mu = 0 and
/// gamma = 1/n.
DualCertificate build_dual_certificate(const PlantedInstance& inst);

struct DualCheck {
  bool pass = false;
  /// max over pairs of |a_ij + sum_k(...) + omega|.
  double max_residual = 0.0;
  double min_multiplier = 0.0;
  /// Rows with multiplier above tol that are slack at the planted cut.
  std::size_t slackness_violations = 0;
  double dual_objective = 0.0;
  double planted_objective = 0.0;
  /// First few failures in readable form.
  std::vector<std::string> failures;
};

/// Dual equality per pair, multiplier signs, complementary slackness against
/// the planted cut vector and the duality gap, all to tolerance tol.
DualCheck verify_dual(const DualCertificate& cert, const PlantedInstance& inst, double tol = 1e-9);

/// Multipliers above this count as strictly positive when splitting tight
/// rows into the equality and inequality parts of the uniqueness cone.
inline constexpr double kPositiveMultiplier = 1e-9;

/// True iff the planted cut is the unique optimum of the relaxation, decided
/// by the absence of a nonzero direction x with sum x = 0, C_K x = 0 and
/// C_L x >= 0 (K: tight rows with positive multiplier, L: tight rows with
/// zero multiplier). Requires n >= 8 and a certificate that verifies.
bool mangasarian_unique_check(const PlantedInstance& inst, const DualCertificate& cert);

struct FactorRecoveryCheck {
  bool applies = false;
  int d_in = 0, d_out = 0;
  /// d_in-regular spanning subgraph of the inside edges.
  std::optional<Graph> d_in_reg;
  /// d_out-regular bipartite supergraph of the cross edges.
  std::optional<Graph> d_out_reg;
  std::vector<std::string> reasons;
};

/// Regular-subgraph route to recovery on general instances: d_in is the
/// minimum inside degree and d_out the maximum cross degree.
FactorRecoveryCheck check_factor_recovery(const PlantedInstance& inst);

}  // namespace bisectlp
