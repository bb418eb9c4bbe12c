#include <gtest/gtest.h>

#include <sstream>

#include "dpca/bench.hpp"
#include "dpca/errors.hpp"

namespace {

dpca::TrackingTrace constant_trace(int rows, double v) {
  dpca::TrackingTrace t{5, 2, {}};
  for (int k = 0; k < rows; ++k) t.rows.push_back({k, 0.1 * k, v, 0.0, 0.0, Eigen::VectorXd::Zero(10)});
  return t;
}

// Reference setup with intruders frozen at their centres.
dpca::ExperimentSpec static_spec() {
  dpca::ExperimentSpec s = dpca::paper_experiment();
  s.game = std::make_shared<dpca::SurveillanceGame>(0.1, 0.1, 0.875, 0.0);
  s.config.epsilon = 0.1;
  s.config.tau = 5;
  s.config.horizon = 20000;
  return s;
}

TEST(Plateau, ConstantTrace) {
  const auto p = dpca::plateau(constant_trace(50, 0.3), 0.2);
  EXPECT_DOUBLE_EQ(p.mean_error, 0.3);
  EXPECT_DOUBLE_EQ(p.max_error, 0.3);
  EXPECT_EQ(p.first, 40);
  EXPECT_EQ(p.last, 49);
}

TEST(Plateau, WindowIsTheTail) {
  dpca::TrackingTrace t = constant_trace(20, 1.0);
  for (int k = 16; k < 20; ++k) t.rows[k].tracking_error = k;
  const auto p = dpca::plateau(t, 0.2);
  EXPECT_DOUBLE_EQ(p.mean_error, (16 + 17 + 18 + 19) / 4.0);
  EXPECT_DOUBLE_EQ(p.max_error, 19.0);
  EXPECT_LE(p.mean_error, p.max_error);
}

TEST(Plateau, RejectsShortTraces) {
  EXPECT_THROW(dpca::plateau(constant_trace(9, 1.0)), dpca::InvalidParameter);
  EXPECT_THROW(dpca::plateau(constant_trace(20, 1.0), 0.0), dpca::InvalidParameter);
}

TEST(ReferenceExperiment, Setup) {
  const dpca::ExperimentSpec s = dpca::paper_experiment();
  EXPECT_EQ(s.config.q, 400);
  EXPECT_EQ(s.config.tau, 1);
  EXPECT_DOUBLE_EQ(s.config.alpha, 0.05);
  EXPECT_DOUBLE_EQ(s.config.epsilon, 0.01);
  EXPECT_DOUBLE_EQ(s.config.h, 0.1);
  EXPECT_EQ(s.config.horizon, 4000);
  EXPECT_EQ(s.config.predictor, dpca::Predictor::kInterpolation);
  EXPECT_LT(s.config.alpha, dpca::alpha_max(s.graph.lambda2(), s.graph.lambda_max()));
  const auto& g = dynamic_cast<const dpca::SurveillanceGame&>(*s.game);
  EXPECT_NEAR((g.target_position(0.0) - Eigen::Vector2d(12.5, 10.0)).norm(), 0.0, 1e-12);
  // Interpolation kicks in once k reaches q, i.e. at t = q h.
  EXPECT_NEAR(s.config.q * s.config.h, 40.0, 1e-12);
  // Horizon spans two periods of the slowest intruder frequency.
  EXPECT_GE(s.config.horizon * s.config.h, 2.0 * 2.0 * 3.141592653589793 * 20.0);
}

TEST(Bench, StaticGamePlateauVanishes) {
  const auto cmp = dpca::compare_predictors(static_spec());
  EXPECT_LE(cmp.interpolation.mean_error, 1e-8);
  EXPECT_LE(cmp.hold.mean_error, 1e-8);
}

TEST(Bench, SweepIsDeterministic) {
  dpca::ExperimentSpec s = dpca::paper_experiment();
  s.config.horizon = 600;
  const auto entries = dpca::h_sweep(s, {0.1, 0.1});
  ASSERT_EQ(entries.size(), 4u);
  EXPECT_EQ(entries[0].predictor, dpca::Predictor::kInterpolation);
  EXPECT_EQ(entries[1].predictor, dpca::Predictor::kHold);
  EXPECT_EQ(entries[0].plateau.mean_error, entries[2].plateau.mean_error);
  EXPECT_EQ(entries[1].plateau.mean_error, entries[3].plateau.mean_error);
  EXPECT_THROW(dpca::h_sweep(s, {}), dpca::InvalidConfig);
}

TEST(Bench, SweepHoldsFinalTimeFixed) {
  dpca::ExperimentSpec s = dpca::paper_experiment();
  s.config.horizon = 200;
  s.config.q = 10;
  const auto entries = dpca::h_sweep(s, {0.1, 0.05});
  // 200 instants at h = 0.1 and 400 at h = 0.05: windows of 40 and 80 rows.
  EXPECT_EQ(entries[0].plateau.last, 200);
  EXPECT_EQ(entries[2].plateau.last, 400);
}

TEST(Bench, ManyCorrectionRoundsShrinkPredictorGap) {
  dpca::ExperimentSpec s = dpca::paper_experiment();
  s.config.tau = 50;
  const auto cmp = dpca::compare_predictors(s);
  const double ratio = cmp.hold.mean_error / cmp.interpolation.mean_error;
  EXPECT_GT(ratio, 0.5);
  EXPECT_LT(ratio, 2.0);
}

TEST(Bench, SummaryCsv) {
  std::vector<dpca::SummaryRow> rows;
  rows.push_back({"interpolation_h0.1_tau1", dpca::Predictor::kInterpolation, 0.1, 1, {0.5, 0.75, 0, 9}, 0});
  rows.push_back({"hold_h0.1_tau1", dpca::Predictor::kHold, 0.1, 1, {1.0, 2.0, 0, 9}, -1});
  std::ostringstream out;
  dpca::write_summary_csv(out, rows);
  EXPECT_EQ(out.str(),
            "run_id,predictor,h,tau,plateau_mean,plateau_max,envelope_violations\n"
            "interpolation_h0.1_tau1,interpolation,0.10000000000000001,1,0.5,0.75,0\n"
            "hold_h0.1_tau1,hold,0.10000000000000001,1,1,2,NA\n");
}

}  // namespace
