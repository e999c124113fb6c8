#pragma once

#include <cstdint>

#include "zslq/model.hpp"

namespace zslq {

/// Regularized design V = lambda I + sum z z', cross-moments S = sum x+ z',
/// and a Cholesky factor of V kept current by rank-one updates.
///
/// The factor is rebuilt from V every `kRefactorInterval` updates; the gap
/// between the incremental and fresh log-determinants at those points is
/// tracked in `max_audit_drift()`.
class DesignState {
 public:
  static constexpr std::int64_t kRefactorInterval = 1000;

  DesignState(Dims dims, double lambda);

  void update(const Vector& z, const Vector& x_next);

  const Dims& dims() const { return dims_; }
  double lambda() const { return lambda_; }
  const Matrix& V() const { return V_; }
  const Matrix& S() const { return S_; }
  std::int64_t t() const { return t_; }
  double logdet_V() const { return logdet_; }

  /// V^{-1} rhs through the maintained factor.
  Matrix solve(const Matrix& rhs) const;
  /// log det(V) from a fresh factorization (audit path).
  double fresh_logdet() const;
  double max_audit_drift() const { return max_drift_; }

 private:
  void refactor();

  Dims dims_;
  double lambda_;
  Matrix V_;
  Matrix S_;
  Eigen::LLT<Matrix> chol_;
  double logdet_;
  std::int64_t t_ = 0;
  double max_drift_ = 0.0;
};

/// Ellipsoid {Theta : tr((Theta - center) V (Theta - center)') <= beta^2}.
struct ConfidenceSet {
  ThetaMatrix center;
  Matrix V;
  double beta;
  double delta;
  double S_theta;
};

/// Theta_hat = S V^{-1}.
ThetaMatrix ridge_estimate(const DesignState& state);

/// beta = sigma_w sqrt(n (logdet V - d log lambda) + 2 log(1/delta))
///        + sqrt(lambda) S_theta.
double confidence_radius(const DesignState& state, const NoiseSpec& noise,
                         double delta, double S_theta);

ConfidenceSet confidence_set(const DesignState& state, const NoiseSpec& noise,
                             double delta, double S_theta);

/// V-weighted squared distance tr(D V D') with D = candidate - center.
double weighted_distance_sq(const ConfidenceSet& set,
                            const ThetaMatrix& candidate);

bool contains(const ConfidenceSet& set, const ThetaMatrix& candidate);

/// lambda_min(V) / t, the empirical excitation rate.
double min_eig_ratio(const DesignState& state);

/// 2 beta / sqrt(nu t_k).
double l2_error_bound(double beta, double nu, std::int64_t t_k);

}  // namespace zslq
