#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "zslq/experiment.hpp"
#include "zslq/model.hpp"

namespace zslq {
namespace {

using testing::random_matrix;

TEST(ConcatModel, IdentityAndZeroBlocks) {
  const ThetaMatrix t = concat_model(SystemModel(Matrix::Identity(2, 2),
                                                 Matrix::Zero(2, 1),
                                                 Matrix::Zero(2, 1)));
  Matrix expected(2, 4);
  expected << 1, 0, 0, 0, 0, 1, 0, 0;
  EXPECT_EQ(t.matrix(), expected);
}

TEST(ConcatModel, ReferencePlantColumns) {
  const RunConfig cfg = reference_config();
  const ThetaMatrix t = concat_model(cfg.game.truth);
  ASSERT_EQ(t.matrix().rows(), 3);
  ASSERT_EQ(t.matrix().cols(), 5);
  EXPECT_EQ(t.matrix().leftCols(3), cfg.game.truth.A());
  EXPECT_EQ(t.matrix().col(3), cfg.game.truth.B1());
  EXPECT_EQ(t.matrix().col(4), cfg.game.truth.B2());
  EXPECT_DOUBLE_EQ(t.matrix()(1, 1), 0.62);
  EXPECT_DOUBLE_EQ(t.matrix()(2, 4), 0.15);
}

TEST(SplitTheta, ZeroTheta) {
  const SystemModel m = split_theta(Matrix::Zero(3, 5), Dims(3, 1, 1));
  EXPECT_TRUE(m.A().isZero(0));
  EXPECT_TRUE(m.B1().isZero(0));
  EXPECT_TRUE(m.B2().isZero(0));
}

TEST(SplitTheta, RecoversReferencePlantExactly) {
  const RunConfig cfg = reference_config();
  const SystemModel back = split_theta(concat_model(cfg.game.truth));
  EXPECT_EQ(back.A(), cfg.game.truth.A());
  EXPECT_EQ(back.B1(), cfg.game.truth.B1());
  EXPECT_EQ(back.B2(), cfg.game.truth.B2());
}

TEST(SplitTheta, ShapeMismatchNamesTheBlock) {
  try {
    split_theta(Matrix::Zero(3, 4), Dims(3, 1, 1));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
    EXPECT_NE(std::string(e.what()).find("Theta"), std::string::npos);
  }
  EXPECT_THROW(SystemModel(Matrix::Zero(3, 3), Matrix::Zero(2, 1),
                           Matrix::Zero(3, 1)),
               Error);
}

TEST(ConcatSplit, RoundTripOverRandomDims) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const Dims d(dim(rng), dim(rng), dim(rng));
    const Matrix A = random_matrix(rng, d.n, d.n);
    const Matrix B1 = random_matrix(rng, d.n, d.m1);
    const Matrix B2 = random_matrix(rng, d.n, d.m2);
    const SystemModel back = split_theta(concat_model(SystemModel(A, B1, B2)));
    ASSERT_EQ(back.A(), A);
    ASSERT_EQ(back.B1(), B1);
    ASSERT_EQ(back.B2(), B2);

    const Matrix theta = random_matrix(rng, d.n, d.d());
    ASSERT_EQ(concat_model(split_theta(theta, d)).matrix(), theta);
  }
}

TEST(ThetaMatrix, FlatIsColumnMajor) {
  Matrix m(2, 4);
  m << 1, 2, 3, 4, 5, 6, 7, 8;
  const Vector flat = ThetaMatrix(m, Dims(2, 1, 1)).flat();
  Vector expected(8);
  expected << 1, 5, 2, 6, 3, 7, 4, 8;
  EXPECT_EQ(flat, expected);
}

TEST(ThetaDistance, Examples) {
  const Dims d(3, 1, 1);
  const ThetaMatrix a(Matrix::Zero(3, 5), d);
  EXPECT_EQ(theta_distance(a, a), 0.0);
  Matrix one = Matrix::Zero(3, 5);
  one(2, 3) = 3.0;
  EXPECT_DOUBLE_EQ(theta_distance(a, ThetaMatrix(one, d)), 3.0);

  const ThetaMatrix ref = concat_model(reference_config().game.truth);
  const ThetaMatrix shifted(ref.matrix() + 0.01 * Matrix::Ones(3, 5), d);
  EXPECT_NEAR(theta_distance(ref, shifted), 0.01 * std::sqrt(15.0), 1e-15);
  EXPECT_NEAR(theta_distance(ref, shifted), (ref.flat() - shifted.flat()).norm(),
              1e-15);
}

TEST(ThetaDistance, IsAMetric) {
  std::mt19937_64 rng(3);
  const Dims d(3, 2, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const ThetaMatrix a(random_matrix(rng, 3, 6), d);
    const ThetaMatrix b(random_matrix(rng, 3, 6), d);
    const ThetaMatrix c(random_matrix(rng, 3, 6), d);
    EXPECT_NEAR(theta_distance(a, b), theta_distance(b, a), 1e-12);
    EXPECT_LE(theta_distance(a, c),
              theta_distance(a, b) + theta_distance(b, c) + 1e-12);
  }
  EXPECT_THROW(theta_distance(ThetaMatrix(Matrix::Zero(3, 5), Dims(3, 1, 1)),
                              ThetaMatrix(Matrix::Zero(3, 6), d)),
               Error);
}

TEST(CostSpec, Validation) {
  Matrix Q = Matrix::Identity(2, 2);
  Q(1, 1) = 0.0;  // PSD with a zero eigenvalue is allowed
  EXPECT_NO_THROW(CostSpec(Q, Matrix::Identity(1, 1), Matrix::Identity(1, 1)));

  Matrix Ru(2, 2);
  Ru << 1.0, 0.0, 0.0, -1e-3;
  EXPECT_THROW(CostSpec(Matrix::Identity(2, 2), Ru, Matrix::Identity(1, 1)),
               Error);
  EXPECT_THROW(CostSpec(Matrix::Identity(2, 2), Matrix::Zero(1, 1),
                        Matrix::Identity(1, 1)),
               Error);
  EXPECT_THROW(CostSpec(Matrix::Identity(2, 2), Matrix::Identity(1, 1),
                        -Matrix::Identity(1, 1)),
               Error);
  EXPECT_THROW(CostSpec(-Matrix::Identity(2, 2), Matrix::Identity(1, 1),
                        Matrix::Identity(1, 1)),
               Error);
}

TEST(CostSpec, SymmetrizesInput) {
  Matrix Q(2, 2);
  Q << 2.0, 0.5, 0.3, 1.0;
  const CostSpec c(Q, Matrix::Identity(1, 1), Matrix::Identity(1, 1));
  EXPECT_DOUBLE_EQ(c.Q()(0, 1), 0.4);
  EXPECT_DOUBLE_EQ(c.Q()(1, 0), 0.4);
}

TEST(NoiseSpec, IsotropicAndFactor) {
  const NoiseSpec iso(0.01, 3);
  EXPECT_TRUE(iso.Sigma_w().isApprox(1e-4 * Matrix::Identity(3, 3)));
  EXPECT_TRUE((iso.factor() * iso.factor().transpose()).isApprox(iso.Sigma_w()));

  Matrix S(2, 2);
  S << 1.0, 1.0, 1.0, 1.0;  // singular PSD
  const NoiseSpec rank_one(1.0, S);
  EXPECT_LT((rank_one.factor() * rank_one.factor().transpose() - S).norm(), 1e-12);
  EXPECT_THROW(NoiseSpec(-1.0, 2), Error);
  EXPECT_THROW(NoiseSpec(1.0, Matrix(-Matrix::Identity(2, 2))), Error);
}

TEST(GameSpec, RejectsInconsistentShapes) {
  const RunConfig cfg = reference_config();
  EXPECT_THROW(GameSpec(cfg.game.truth, cfg.game.cost, NoiseSpec(0.01, 2),
                        FixedInitialState{Vector::Zero(3)}),
               Error);
  EXPECT_THROW(GameSpec(cfg.game.truth, cfg.game.cost, NoiseSpec(0.01, 3),
                        FixedInitialState{Vector::Zero(2)}),
               Error);
  Vector bad = Vector::Zero(3);
  bad(1) = std::nan("");
  EXPECT_THROW(GameSpec(cfg.game.truth, cfg.game.cost, NoiseSpec(0.01, 3),
                        FixedInitialState{bad}),
               Error);
}

TEST(Dims, RejectsNonPositive) {
  EXPECT_THROW(Dims(0, 1, 1), Error);
  EXPECT_THROW(Dims(1, 0, 1), Error);
  EXPECT_EQ(Dims(3, 1, 2).d(), 6);
}

}  // namespace
}  // namespace zslq
