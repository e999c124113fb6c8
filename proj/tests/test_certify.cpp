#include <gtest/gtest.h>

#include "zslq/certify.hpp"
#include "zslq/experiment.hpp"

namespace zslq {
namespace {

const Dims kDims(3, 1, 1);

// Confidence set centered at `center` with V = I and the given radius.
ConfidenceSet ball(const ThetaMatrix& center, double beta) {
  return ConfidenceSet{center, Matrix::Identity(5, 5), beta, 0.2, 1.0};
}

CertifiedModel certified_truth(const RunConfig& cfg) {
  const ThetaMatrix truth = concat_model(cfg.game.truth);
  RegularityResult r = is_regular(truth, cfg.game.cost, cfg.margins);
  return CertifiedModel{truth, 1.0, *r.solution, true, 0, false};
}

TEST(IsRegular, TruthIsRegular) {
  const RunConfig cfg = reference_config();
  const RegularityResult r =
      is_regular(concat_model(cfg.game.truth), cfg.game.cost, RegularityMargins(0.1, 0.02));
  ASSERT_TRUE(r.regular);
  ASSERT_TRUE(r.solution.has_value());
  EXPECT_GE(r.solution->margin(), 0.1);
  EXPECT_LE(r.solution->rho_cl(), 0.98);
}

TEST(IsRegular, UnstableWithoutInputsIsNotRegular) {
  const RunConfig cfg = reference_config();
  Matrix theta = Matrix::Zero(3, 5);
  theta.leftCols(3) = 3.0 * Matrix::Identity(3, 3);
  const RegularityResult r =
      is_regular(ThetaMatrix(theta, kDims), cfg.game.cost, cfg.margins);
  EXPECT_FALSE(r.regular);
  EXPECT_FALSE(r.solution.has_value());
}

TEST(IsRegular, StabilityMarginAloneCanFail) {
  const RunConfig cfg = reference_config();
  const ThetaMatrix truth = concat_model(cfg.game.truth);
  const double rho = solve_gare(cfg.game.truth, cfg.game.cost).rho_cl();
  const double gamma = 1.0 - rho + 0.01;  // 1 - gamma < rho
  EXPECT_FALSE(is_regular(truth, cfg.game.cost, RegularityMargins(0.05, gamma)).regular);
  EXPECT_TRUE(
      is_regular(truth, cfg.game.cost, RegularityMargins(0.05, 1.0 - rho - 0.01)).regular);
}

TEST(IsRegular, SolvabilityMarginAloneCanFail) {
  const RunConfig cfg = reference_config();
  const ThetaMatrix truth = concat_model(cfg.game.truth);
  const double margin = solve_gare(cfg.game.truth, cfg.game.cost).margin();
  EXPECT_FALSE(
      is_regular(truth, cfg.game.cost, RegularityMargins(margin + 0.01, 0.02)).regular);
}

TEST(RegularityMargins, Validation) {
  EXPECT_THROW(RegularityMargins(0.0, 0.1), Error);
  EXPECT_THROW(RegularityMargins(0.1, 0.0), Error);
  EXPECT_THROW(RegularityMargins(0.1, 1.0), Error);
}

TEST(Shrink, FeasibleEstimateIsAcceptedWhole) {
  const RunConfig cfg = reference_config();
  const CertifiedModel prev = certified_truth(cfg);
  Matrix hat = prev.theta.matrix();
  hat(0, 0) += 0.01;
  const ThetaMatrix theta_hat(hat, kDims);
  const CertifiedModel out =
      shrink(theta_hat, prev, ball(theta_hat, 1.0), cfg.game.cost, cfg.margins);
  EXPECT_EQ(out.alpha, 1.0);
  EXPECT_EQ(out.theta.matrix(), hat);
  EXPECT_FALSE(out.failure_flag);
  EXPECT_TRUE(out.in_confidence);
  EXPECT_EQ(out.episode, 1);
}

TEST(Shrink, DegenerateSegment) {
  const RunConfig cfg = reference_config();
  const CertifiedModel prev = certified_truth(cfg);

  const CertifiedModel inside =
      shrink(prev.theta, prev, ball(prev.theta, 0.5), cfg.game.cost, cfg.margins);
  EXPECT_EQ(inside.alpha, 1.0);
  EXPECT_FALSE(inside.failure_flag);
  EXPECT_EQ(inside.theta.matrix(), prev.theta.matrix());

  // Confidence set far away: nothing on the segment qualifies.
  const ThetaMatrix away(prev.theta.matrix() + Matrix::Ones(3, 5), kDims);
  const CertifiedModel outside =
      shrink(prev.theta, prev, ball(away, 0.5), cfg.game.cost, cfg.margins);
  EXPECT_TRUE(outside.failure_flag);
  EXPECT_FALSE(outside.in_confidence);
  EXPECT_EQ(outside.theta.matrix(), prev.theta.matrix());
}

TEST(Shrink, ScaledDynamicsBacktrackToMaximalAlpha) {
  const RunConfig cfg = reference_config();
  const CertifiedModel prev = certified_truth(cfg);
  Matrix hat = prev.theta.matrix();
  hat.leftCols(3) *= 3.0;
  const ThetaMatrix theta_hat(hat, kDims);
  const ConfidenceSet conf = ball(prev.theta, 100.0);
  ASSERT_FALSE(is_regular(theta_hat, cfg.game.cost, cfg.margins).regular);

  const double tol = 1e-3;
  const CertifiedModel out =
      shrink(theta_hat, prev, conf, cfg.game.cost, cfg.margins, tol);
  EXPECT_FALSE(out.failure_flag);
  EXPECT_GT(out.alpha, 0.0);
  EXPECT_LT(out.alpha, 1.0);

  auto at = [&](double alpha) {
    return ThetaMatrix((1.0 - alpha) * prev.theta.matrix() + alpha * hat, kDims);
  };
  EXPECT_EQ(out.theta.matrix(), at(out.alpha).matrix());
  EXPECT_TRUE(contains(conf, out.theta));
  const RegularityResult certified = is_regular(out.theta, cfg.game.cost, cfg.margins);
  ASSERT_TRUE(certified.regular);
  EXPECT_LE(certified.solution->rho_cl(), 1.0 - cfg.margins.gamma);
  EXPECT_GE(certified.solution->margin(), cfg.margins.mu);
  EXPECT_LT((out.solution.P() - certified.solution->P()).norm(), 1e-12);

  const double beyond = out.alpha + tol;
  EXPECT_TRUE(beyond > 1.0 ||
              !(contains(conf, at(beyond)) &&
                is_regular(at(beyond), cfg.game.cost, cfg.margins).regular));
}

TEST(Shrink, ConfidenceBoundaryLimitsAlpha) {
  // Regular everywhere on the segment, but the set only reaches part way.
  const RunConfig cfg = reference_config();
  const CertifiedModel prev = certified_truth(cfg);
  Matrix step = Matrix::Zero(3, 5);
  step(0, 3) = 0.1;
  const ThetaMatrix theta_hat(prev.theta.matrix() + step, kDims);
  const CertifiedModel out =
      shrink(theta_hat, prev, ball(prev.theta, 0.03), cfg.game.cost, cfg.margins, 1e-4);
  EXPECT_FALSE(out.failure_flag);
  EXPECT_NEAR(out.alpha, 0.3, 1e-4);
  EXPECT_LE(out.alpha, 0.3);
}

TEST(Shrink, IsDeterministic) {
  const RunConfig cfg = reference_config();
  const CertifiedModel prev = certified_truth(cfg);
  Matrix hat = prev.theta.matrix();
  hat.leftCols(3) *= 2.0;
  const ThetaMatrix theta_hat(hat, kDims);
  const ConfidenceSet conf = ball(prev.theta, 100.0);
  const CertifiedModel a = shrink(theta_hat, prev, conf, cfg.game.cost, cfg.margins);
  const CertifiedModel b = shrink(theta_hat, prev, conf, cfg.game.cost, cfg.margins);
  EXPECT_EQ(a.alpha, b.alpha);
  EXPECT_EQ(a.theta.matrix(), b.theta.matrix());
}

}  // namespace
}  // namespace zslq
