#include <cmath>

#include "doctest.h"
#include "bisectlp/thresholds.hpp"

using namespace bisectlp;

TEST_CASE("thresholds: very dense recovery line") {
  CHECK(lp_recovery_boundary_very_dense(0.8) == doctest::Approx(0.3));
  CHECK(lp_recovery_boundary_very_dense(0.51) == doctest::Approx(0.01));
  CHECK_THROWS_AS(lp_recovery_boundary_very_dense(0.5), ConfigError);
  CHECK_THROWS_AS(lp_recovery_boundary_very_dense(1.0), ConfigError);
}

TEST_CASE("thresholds: non-recovery cases") {
  CHECK(lp_nonrecovery_boundary(0.0, 0.8) == doctest::Approx(0.6));
  const double root = (2.2 - std::sqrt(2.2 * 2.2 - 3.2)) / 2.0;
  CHECK(root == doctest::Approx(0.4597).epsilon(1e-4));
  CHECK(lp_nonrecovery_boundary(0.0, 0.3) == doctest::Approx((2.7 - std::sqrt(2.7 * 2.7 - 1.2)) / 2.0));

  const double e = std::exp(-1.0);
  CHECK((1 - 2 * e) / (2 - e) == doctest::Approx(0.1619).epsilon(1e-3));
  CHECK(lp_nonrecovery_boundary(0.5, 1.0) == doctest::Approx(1.0 / (3.0 + 2.0 * e)));
  CHECK(lp_nonrecovery_boundary(0.5, 1.0) == doctest::Approx(0.2677).epsilon(1e-3));
  CHECK(lp_nonrecovery_boundary(0.4, 1.0) == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(lp_nonrecovery_boundary(0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(lp_nonrecovery_boundary(1.0, 0.5), ConfigError);
  CHECK_THROWS_AS(lp_nonrecovery_boundary(0.3, 0.0), ConfigError);
}

TEST_CASE("thresholds: dense cases solve the edge-fraction equation") {
  // Non-recovery needs beta / (alpha + beta) above the b(G) bound; the
  // returned beta is where the two meet.
  for (double alpha : {0.3, 0.8, 1.7, 4.0}) {
    for (double w : {0.1, 0.3, 0.45, 0.55, 0.7, 0.85}) {
      const double beta = lp_nonrecovery_boundary(w, alpha);
      const double k = std::ceil(1.0 / (1.0 - w));
      CHECK(beta / (alpha + beta) == doctest::Approx(1.0 / (2.0 * k)));
    }
    for (int k : {3, 4, 5}) {
      const double w = 1.0 - 1.0 / k;
      const double beta = lp_nonrecovery_boundary(w, alpha);
      CHECK(beta / (alpha + beta) ==
            doctest::Approx(1.0 / (2.0 * k + 2.0 * std::exp(-std::pow(alpha, k)))));
    }
  }
}

TEST_CASE("thresholds: integrality detection and override") {
  CHECK(inverse_gap_is_integer(0.5));
  CHECK(inverse_gap_is_integer(2.0 / 3.0));
  CHECK(inverse_gap_is_integer(0.75));
  CHECK_FALSE(inverse_gap_is_integer(0.4));
  CHECK_FALSE(inverse_gap_is_integer(0.66));
  // 1/(1 - 0.6667) is just above 3, so the ceiling is 4 unless forced.
  CHECK(lp_nonrecovery_boundary(0.6667, 1.0) == doctest::Approx(1.0 / 7.0));
  CHECK(lp_nonrecovery_boundary(0.6667, 1.0, true) ==
        doctest::Approx(1.0 / (5.0 + 2.0 * std::exp(-1.0))));
}

TEST_CASE("thresholds: information-theoretic log boundary") {
  CHECK(info_theoretic_log_boundary(2.0) == 0.0);
  CHECK(info_theoretic_log_boundary(8.0) == doctest::Approx(2.0));
  // sqrt(4.5) - sqrt(2) = 3/sqrt(2) - 2/sqrt(2) = 1/sqrt(2).
  CHECK(info_theoretic_log_boundary(4.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(info_theoretic_log_boundary(1.9), NoRecoveryRegion);
}

TEST_CASE("thresholds: SDP condition") {
  CHECK(sdp_sufficient(1000000, 0.4, 0.1, 0.1));
  CHECK_FALSE(sdp_sufficient(100, 0.4, 0.39, 0.1));
  CHECK_FALSE(sdp_sufficient(1000000, 0.5, 0.1, 0.1));
  CHECK_FALSE(sdp_sufficient(1000000, 0.6, 0.1, 0.1));
  CHECK_THROWS_AS(sdp_sufficient(2, 0.4, 0.1, 0.1), ConfigError);
}

TEST_CASE("thresholds: the two very dense curves never cross") {
  for (int i = 1; i < 500; ++i) {
    const double p = 0.5 + i / 1000.0;
    CHECK(lp_nonrecovery_boundary(0.0, p) > lp_recovery_boundary_very_dense(p));
  }
}

TEST_CASE("thresholds: curve emission") {
  const auto vd = emit_curves(CurveRegime::VeryDense, {0.5, 1.0, 0.01});
  REQUIRE(vd.size() == 2);
  CHECK(vd[0].samples.size() == 49);
  CHECK(vd[1].samples.size() == 50);
  for (const auto& c : vd)
    for (std::size_t i = 1; i < c.samples.size(); ++i) {
      CHECK(c.samples[i].first > c.samples[i - 1].first);
      CHECK(std::isfinite(c.samples[i].second));
    }
  const auto dn = emit_curves(CurveRegime::Dense, {0.0, 0.95, 0.05});
  REQUIRE(dn.size() == 5);
  CHECK(dn[0].samples.front().second == doctest::Approx(0.75));  // 0.6 / 0.8 at omega = 0
  CHECK(dn[0].samples[10].second == doctest::Approx(lp_nonrecovery_boundary(0.5, 0.8) / 0.8));
  const auto lg = emit_curves(CurveRegime::Log, {1.0, 10.0, 0.5});
  REQUIRE(lg.size() == 1);
  CHECK(lg[0].samples.front().first == 2.0);
  CHECK(lg[0].samples.back().second == doctest::Approx(info_theoretic_log_boundary(10.0)));
  CHECK_THROWS_AS(emit_curves(CurveRegime::Log, {1.0, 2.0, 0.0}), ConfigError);
}
