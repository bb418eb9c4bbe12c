#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dpca/bounds.hpp"
#include "dpca/errors.hpp"

namespace {

const dpca::CommGraph& ring5() {
  static const dpca::CommGraph g = dpca::CommGraph::build_ring(5, 1.0);
  return g;
}

TEST(StepsizeBounds, RingFiveAlphaCeiling) {
  const double amax = dpca::alpha_max(ring5().lambda2(), ring5().lambda_max());
  EXPECT_NEAR(amax, 1.381966 / (2.0 * 3.618034 * 3.618034), 1e-6);
  EXPECT_NEAR(amax, 0.052786, 1e-6);
  EXPECT_LT(0.05, amax);
  EXPECT_DOUBLE_EQ(dpca::alpha_max(1.0, 1.0), 0.5);
}

TEST(StepsizeBounds, EpsilonCeilings) {
  const auto b = dpca::stepsize_bounds(2.0, 2.0, 1.0, 1.0, 2, 0.1);
  EXPECT_NEAR(b.epsilon_ceilings[0], 0.4 / 9.0, 1e-15);
  EXPECT_NEAR(b.epsilon_ceilings[1], 0.25, 1e-15);
  EXPECT_NEAR(b.epsilon_ceilings[2], 2.5, 1e-15);
  EXPECT_NEAR(b.epsilon_max, 0.04444, 1e-5);
  EXPECT_THROW(dpca::stepsize_bounds(2.0, 2.0, 0.0, 1.0, 2, 0.1), dpca::InvalidParameter);
  EXPECT_THROW(dpca::stepsize_bounds(2.0, 2.0, 1.0, 1.0, 2, -0.1), dpca::InvalidParameter);
  EXPECT_THROW(dpca::alpha_max(0.0, 1.0), dpca::InvalidParameter);
}

TEST(Contraction, VanishingEpsilonGivesNoContraction) {
  const auto c = dpca::contraction_factor(0.05, 0.0, ring5().lambda2(), ring5().lambda_max(), 0.2, 0.2, 5);
  EXPECT_EQ(c.a_matrix(0, 0), 0.0);
  EXPECT_EQ(c.a_matrix(0, 1), 0.0);
  EXPECT_NEAR(c.nu, 0.0, 1e-15);
  EXPECT_NEAR(c.rho, 1.0, 1e-15);
  EXPECT_FALSE(c.valid);
}

TEST(Contraction, DiagonalWhenThetaIsZero) {
  const double l2 = ring5().lambda2();
  const double ln = ring5().lambda_max();
  const auto c = dpca::contraction_factor(0.05, 0.01, l2, ln, 0.2, 0.0, 5);
  const double d1 = 0.01 * 0.2 / 5.0;
  const double d2 = 0.05 * l2 - 0.05 * 0.05 * ln * ln;
  EXPECT_NEAR(c.nu, 2.0 * std::min(d1, d2), 1e-16);
  EXPECT_TRUE(c.valid);
}

TEST(Contraction, ClosedFormMatchesEigensolver) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = dpca::contraction_factor(0.06 * u(rng), 0.2 * u(rng), 1.0 + u(rng), 2.0 + 2.0 * u(rng),
                                            0.1 + u(rng), 0.1 + u(rng), 1 + trial % 7);
    const double expected =
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(c.a_matrix).eigenvalues()(0);
    EXPECT_NEAR(c.lambda_min, expected, 1e-14);
  }
}

TEST(Contraction, ReferenceStyleParameters) {
  // Surveillance Jacobian: mu = 0.2, theta from the per-player rows.
  const double own = 0.2 + 0.875 / 125.0;
  const double off = 2.0 * 0.875 / 125.0;
  const auto c = dpca::contraction_factor(0.05, 0.01, ring5().lambda2(), ring5().lambda_max(), 0.2,
                                          std::sqrt(own * own + off * off), 5);
  EXPECT_TRUE(c.valid);
  EXPECT_GT(c.nu, 0.0);
  EXPECT_LT(c.nu, 1.0);
  EXPECT_NEAR(c.rho, std::sqrt(1.0 - c.nu), 1e-15);
}

// The admissible epsilon interval guarantees existence of a positive definite
// A, not positive definiteness everywhere: near the top of the interval
// lambda_min(A) turns negative.
TEST(ContractionProperty, AdmissibleRegionContainsContractingPoints) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double l2 = ring5().lambda2();
  const double ln = ring5().lambda_max();
  int counterexamples = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const double mu = 0.05 + u(rng);
    const double theta = mu * (1.0 + 2.0 * u(rng));
    const double alpha = dpca::alpha_max(l2, ln) * (0.05 + 0.9 * u(rng));
    const auto sb = dpca::stepsize_bounds(l2, ln, mu, theta, 5, alpha);
    // Small epsilon is always contracting.
    const auto small = dpca::contraction_factor(alpha, 1e-3 * sb.epsilon_max, l2, ln, mu, theta, 5);
    EXPECT_TRUE(small.valid);
    EXPECT_GT(small.a_matrix.determinant(), 0.0);
    EXPECT_GT(small.a_matrix.trace(), 0.0);

    const auto any = dpca::contraction_factor(alpha, sb.epsilon_max * (0.001 + 0.998 * u(rng)), l2, ln, mu,
                                              theta, 5);
    if (any.a_matrix.determinant() > 0.0 && any.a_matrix.trace() > 0.0) {
      EXPECT_TRUE(any.valid);
    } else {
      ++counterexamples;
    }
  }
  const auto top = dpca::contraction_factor(0.05, 0.999 * 0.023032766854168, l2, ln, 1.0, 1.0, 5);
  EXPECT_LT(top.nu, 0.0);
  EXPECT_GT(counterexamples, 0);
}

// rho falls with epsilon up to an interior minimum and rises afterwards; it is
// not monotone over the whole admissible interval.
TEST(ContractionProperty, RhoVersusEpsilon) {
  const double l2 = ring5().lambda2();
  const double ln = ring5().lambda_max();
  const double mu = 1.0;
  const double theta = 1.0;
  const double alpha = 0.05;
  const double emax = dpca::stepsize_bounds(l2, ln, mu, theta, 5, alpha).epsilon_max;
  double prev = 2.0;
  int turns = 0;
  bool falling = true;
  for (int j = 1; j < 1000; ++j) {
    const auto c = dpca::contraction_factor(alpha, emax * j / 1000.0, l2, ln, mu, theta, 5);
    if (falling && c.rho > prev) {
      falling = false;
      ++turns;
      EXPECT_GT(j, 300);
      EXPECT_LT(j, 500);
    } else if (!falling && c.rho < prev) {
      ++turns;
    }
    prev = c.rho;
  }
  EXPECT_EQ(turns, 1);
}

TEST(MinQ, Examples) {
  EXPECT_EQ(dpca::min_q(0.5, 1), 2);
  EXPECT_EQ(dpca::min_q(0.0, 1), 0);
  EXPECT_EQ(dpca::min_q(1e-12, 3), 0);
  EXPECT_EQ(dpca::min_q(0.9, 1), 18);
  EXPECT_EQ(dpca::min_q(std::sqrt(0.5), 2), 2);
  EXPECT_THROW(dpca::min_q(1.0, 1), dpca::InvalidParameter);
  EXPECT_THROW(dpca::min_q(0.5, 0), dpca::InvalidParameter);
}

TEST(MinQ, DenominatorPositivityMatchesThreshold) {
  for (double rt : {0.1, 0.3, 0.5, 0.77, 0.9, 0.95}) {
    const int qmin = dpca::min_q(rt, 1);
    for (int q = 1; q < 60; ++q) {
      if (std::abs(q * (1.0 - rt) - 2.0 * rt) < 1e-9) continue;  // exact tie, rounding decides
      const bool positive = 2.0 * q - 2.0 * rt * (q + 2) > 0.0;
      EXPECT_EQ(positive, q > 2.0 * rt / (1.0 - rt)) << "rt=" << rt << " q=" << q;
      if (q > qmin) EXPECT_TRUE(positive);
    }
  }
}

TEST(FindGamma, BracketsForHalf) {
  EXPECT_NEAR(dpca::envelope_rate_function(0.5, 3, 0.9), 0.9948, 1e-4);
  EXPECT_NEAR(dpca::envelope_rate_function(0.5, 3, 0.89), 1.0147, 1e-4);
  const double gamma = dpca::find_gamma(0.5, 1, 3);
  EXPECT_GT(gamma, 0.89);
  EXPECT_LT(gamma, 0.90);
  EXPECT_THROW(dpca::find_gamma(0.5, 1, 2), dpca::InvalidParameter);
}

// The 1/(q gamma^(q+1)) term blows up below 1, so the root drifts up towards 1 as q grows.
TEST(FindGamma, RootClimbsTowardsOneForLargeQ) {
  double prev = dpca::find_gamma(0.5, 1, 10);
  for (int q : {100, 1000, 100000}) {
    const double gamma = dpca::find_gamma(0.5, 1, q);
    EXPECT_GT(gamma, prev) << "q=" << q;
    EXPECT_LT(gamma, 1.0);
    EXPECT_LE(dpca::envelope_rate_function(0.5, q, gamma), 1.0);
    prev = gamma;
  }
  EXPECT_GT(prev, 0.999);
}

TEST(FindGammaProperty, RootIsTight) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double rho = 0.05 + 0.9 * u(rng);
    const int tau = 1 + trial % 4;
    const int q = dpca::min_q(rho, tau) + 1 + trial % 20;
    const double rt = std::pow(rho, tau);
    EXPECT_LT(dpca::envelope_rate_function(rt, q, 1.0), 1.0);
    EXPECT_NEAR(dpca::envelope_rate_function(rt, q, 1.0), rt * (q + 2.0) / q, 1e-15);
    const double gamma = dpca::find_gamma(rho, tau, q);
    EXPECT_GT(gamma, rt);
    EXPECT_LT(gamma, 1.0);
    EXPECT_LE(dpca::envelope_rate_function(rt, q, gamma), 1.0);
    EXPECT_GE(dpca::envelope_rate_function(rt, q, gamma - 1e-6), 1.0);
  }
}

TEST(EnvelopeConstants, Examples) {
  const auto a = dpca::envelope_constants(0.0, 0.5, 1, 3, 0.9, 0.1, 0.0, 1.0, 1);
  EXPECT_NEAR(a.c2, 6.0, 1e-12);
  EXPECT_EQ(a.c1, 0.0);
  const auto b = dpca::envelope_constants(2.0, 0.5, 1, 3, 0.9, 1e-12, 5.0, 1.0, 4);
  EXPECT_NEAR(b.c1, 2.0, 1e-10);
  const auto c = dpca::envelope_constants(2.0, 0.5, 1, 3, 0.9, 0.1, 5.0, 1.0, 4);
  EXPECT_NEAR(c.c1, 2.0 + 2.0 * 0.5 * 0.1 * 5.0 / 0.5, 1e-12);
  EXPECT_THROW(dpca::envelope_constants(0.0, 0.5, 1, 2, 0.9, 0.1, 0.0, 1.0, 1), dpca::InvalidParameter);
  EXPECT_THROW(dpca::envelope_constants(0.0, 1.0, 1, 50, 0.9, 0.1, 0.0, 1.0, 1), dpca::InvalidParameter);
}

TEST(Envelope, Examples) {
  EXPECT_DOUBLE_EQ(dpca::envelope(0, 3.0, 0.9, 2.0, 0.1), 3.0 + 2.0 * 0.01);
  EXPECT_NEAR(dpca::envelope(10, 6.0, 0.9, 6.0, 0.1), 2.152, 1e-3);
  EXPECT_NEAR(dpca::envelope(100000, 6.0, 0.9, 6.0, 0.1), 0.06, 1e-15);
}

TEST(PredictionBounds, Examples) {
  EXPECT_DOUBLE_EQ(dpca::prediction_bounds(1.0, 0.0, 1, 0.1).hold, 0.1);
  EXPECT_NEAR(dpca::prediction_bounds(0.0, 2.0, 1, 0.1).interpolation, 0.02, 1e-15);
  // interpolation < hold exactly when h < 2 c1 / (c2 (q+1))
  const double c1 = 1.3;
  const double c2 = 0.7;
  const int q = 4;
  const double threshold = 2.0 * c1 / (c2 * (q + 1));
  for (double f : {0.5, 0.9, 0.99}) {
    const auto b = dpca::prediction_bounds(c1, c2, q, f * threshold);
    EXPECT_LT(b.interpolation, b.hold);
  }
  const auto above = dpca::prediction_bounds(c1, c2, q, 1.1 * threshold);
  EXPECT_GT(above.interpolation, above.hold);
}

TEST(BoundReport, FlagsAndViolations) {
  const dpca::RegularityConstants k{.mu = 1.0, .theta = 1.0, .c1 = 0.5, .c2 = 0.2};
  dpca::DpcaConfig c{.q = 3, .tau = 1, .alpha = 0.06, .epsilon = 0.005, .h = 0.1, .horizon = 10,
                     .predictor = dpca::Predictor::kInterpolation};
  auto r = dpca::make_bound_report(ring5(), k, c, 1.0);
  EXPECT_FALSE(r.alpha_ok);
  EXPECT_FALSE(r.valid());
  const auto v = r.violations();
  ASSERT_FALSE(v.empty());
  EXPECT_NE(v.front().find("lambda2/(2 lambdaN^2)"), std::string::npos);

  c.alpha = 0.05;
  r = dpca::make_bound_report(ring5(), k, c, 1.0);
  EXPECT_TRUE(r.alpha_ok);
  EXPECT_TRUE(r.epsilon_ok);
  EXPECT_TRUE(r.contraction_ok);
  EXPECT_FALSE(r.q_ok);
  EXPECT_GT(r.q_min, 1000);
  EXPECT_TRUE(std::isnan(r.gamma));

  c.q = r.q_min + 1;
  r = dpca::make_bound_report(ring5(), k, c, 1.0);
  EXPECT_TRUE(r.valid());
  EXPECT_TRUE(r.violations().empty());
  EXPECT_GT(r.gamma, r.rho_tau);
  EXPECT_GT(r.c2_envelope, 0.0);
  EXPECT_NEAR(r.plateau_bound, r.c2_envelope * 0.01, 1e-15);

  c.epsilon = 0.0;
  r = dpca::make_bound_report(ring5(), k, c, 1.0);
  EXPECT_FALSE(r.contraction_ok);
  EXPECT_NEAR(r.nu, 0.0, 1e-15);
  EXPECT_NEAR(r.rho, 1.0, 1e-15);
}

}  // namespace
