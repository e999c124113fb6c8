#pragma once

#include <Eigen/Dense>
#include <variant>

#include "zslq/error.hpp"

namespace zslq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Problem dimensions. The regressor z = [x; u; v] has length d = n + m1 + m2.
struct Dims {
  int n = 0;
  int m1 = 0;
  int m2 = 0;

  Dims() = default;
  Dims(int n, int m1, int m2);

  int d() const { return n + m1 + m2; }
  bool operator==(const Dims&) const = default;
};

/// Plant matrices (A, B1, B2) of x+ = A x + B1 u + B2 v + w.
class SystemModel {
 public:
  SystemModel(Matrix A, Matrix B1, Matrix B2);

  const Matrix& A() const { return A_; }
  const Matrix& B1() const { return B1_; }
  const Matrix& B2() const { return B2_; }
  Dims dims() const;

 private:
  Matrix A_;
  Matrix B1_;
  Matrix B2_;
};

/// The stacked parameter [A B1 B2] (n x d). Its flat form is the column-wise
/// vectorization, i.e. Eigen's native storage order.
class ThetaMatrix {
 public:
  ThetaMatrix(Matrix theta, Dims dims);

  const Matrix& matrix() const { return theta_; }
  const Dims& dims() const { return dims_; }
  Vector flat() const;

 private:
  Matrix theta_;
  Dims dims_;
};

ThetaMatrix concat_model(const SystemModel& m);
SystemModel split_theta(const ThetaMatrix& t);
SystemModel split_theta(const Matrix& t, const Dims& dims);

/// Frobenius norm of a - b; equal to the l2 norm of the flattened difference.
double theta_distance(const ThetaMatrix& a, const ThetaMatrix& b);

/// Stage cost weights. Q >= 0, Ru > 0, Rv > 0; inputs are symmetrized.
class CostSpec {
 public:
  CostSpec(Matrix Q, Matrix Ru, Matrix Rv);

  const Matrix& Q() const { return Q_; }
  const Matrix& Ru() const { return Ru_; }
  const Matrix& Rv() const { return Rv_; }

 private:
  Matrix Q_;
  Matrix Ru_;
  Matrix Rv_;
};

/// Disturbance description: sub-Gaussian scale and covariance.
class NoiseSpec {
 public:
  /// Isotropic: Sigma_w = sigma_w^2 I.
  NoiseSpec(double sigma_w, int n);
  NoiseSpec(double sigma_w, Matrix Sigma_w);

  double sigma_w() const { return sigma_w_; }
  const Matrix& Sigma_w() const { return Sigma_w_; }
  /// F with F F^T = Sigma_w, used to draw w = F g, g ~ N(0, I).
  const Matrix& factor() const { return factor_; }

 private:
  double sigma_w_;
  Matrix Sigma_w_;
  Matrix factor_;
};

/// Initial state: a fixed vector, or x0 ~ N(mean, scale^2 I) drawn per seed.
struct FixedInitialState {
  Vector x0;
};
struct GaussianInitialState {
  Vector mean;
  double scale = 0.0;
};
using InitialState = std::variant<FixedInitialState, GaussianInitialState>;

struct GameSpec {
  SystemModel truth;
  CostSpec cost;
  NoiseSpec noise;
  InitialState x0;

  GameSpec(SystemModel truth, CostSpec cost, NoiseSpec noise, InitialState x0);
  Dims dims() const { return truth.dims(); }
};

// Validation helpers shared across modules.
namespace detail {
void require_finite(const Matrix& m, const char* name);
void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                   const char* name);
Matrix symmetrized(const Matrix& m, const char* name);
}  // namespace detail

}  // namespace zslq
