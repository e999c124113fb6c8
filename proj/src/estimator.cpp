#include "zslq/estimator.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

namespace zslq {

namespace {

double factor_logdet(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

DesignState::DesignState(Dims dims, double lambda)
    : dims_(dims),
      lambda_(lambda),
      V_(Matrix::Identity(dims.d(), dims.d()) * lambda),
      S_(Matrix::Zero(dims.n, dims.d())) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
  }
  chol_.compute(V_);
  logdet_ = dims.d() * std::log(lambda);
}

void DesignState::update(const Vector& z, const Vector& x_next) {
  detail::require_shape(z, dims_.d(), 1, "z");
  detail::require_shape(x_next, dims_.n, 1, "x_next");
  detail::require_finite(z, "z");
  detail::require_finite(x_next, "x_next");

  V_.noalias() += z * z.transpose();
  S_.noalias() += x_next * z.transpose();
  chol_.rankUpdate(z, 1.0);
  if (chol_.info() != Eigen::Success) {
    refactor();
  } else {
    logdet_ = factor_logdet(chol_);
  }
  ++t_;
  if (t_ % kRefactorInterval == 0) refactor();
}

void DesignState::refactor() {
  chol_.compute(V_);
  if (chol_.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "design matrix lost definiteness");
  }
  const double fresh = factor_logdet(chol_);
  const double drift = std::abs(fresh - logdet_);
  max_drift_ = std::max(max_drift_, drift);
  if (drift > 1e-8) {
    std::cerr << "[zslq] warning: design log-det drifted by " << drift
              << " at t=" << t_ << "\n";
  }
  logdet_ = fresh;
}

Matrix DesignState::solve(const Matrix& rhs) const { return chol_.solve(rhs); }

double DesignState::fresh_logdet() const {
  return factor_logdet(Eigen::LLT<Matrix>(V_));
}

ThetaMatrix ridge_estimate(const DesignState& state) {
  // Theta V = S, with V symmetric.
  Matrix theta = state.solve(state.S().transpose()).transpose();
  return ThetaMatrix(std::move(theta), state.dims());
}

double confidence_radius(const DesignState& state, const NoiseSpec& noise,
                         double delta, double S_theta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  }
  if (!(S_theta >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "S_theta must be >= 0");
  }
  const Dims& dims = state.dims();
  double gap = state.logdet_V() - dims.d() * std::log(state.lambda());
  if (gap < -1e-9) {
    std::ostringstream os;
    os << "log det(V) below log det(lambda I) by " << -gap;
    throw Error(ErrorCode::kNegativeLogDetGap, os.str());
  }
  gap = std::max(gap, 0.0);
  return noise.sigma_w() * std::sqrt(dims.n * gap + 2.0 * std::log(1.0 / delta)) +
         std::sqrt(state.lambda()) * S_theta;
}

ConfidenceSet confidence_set(const DesignState& state, const NoiseSpec& noise,
                             double delta, double S_theta) {
  return ConfidenceSet{ridge_estimate(state), state.V(),
                       confidence_radius(state, noise, delta, S_theta), delta,
                       S_theta};
}

double weighted_distance_sq(const ConfidenceSet& set,
                            const ThetaMatrix& candidate) {
  if (!(candidate.dims() == set.center.dims())) {
    throw Error(ErrorCode::kDimensionMismatch,
                "candidate shape differs from confidence set center");
  }
  const Matrix D = candidate.matrix() - set.center.matrix();
  return (D * set.V * D.transpose()).trace();
}

bool contains(const ConfidenceSet& set, const ThetaMatrix& candidate) {
  return weighted_distance_sq(set, candidate) <= set.beta * set.beta;
}

double min_eig_ratio(const DesignState& state) {
  if (state.t() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "min_eig_ratio needs t >= 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(state.V(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() / static_cast<double>(state.t());
}

double l2_error_bound(double beta, double nu, std::int64_t t_k) {
  if (!(nu > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "nu must be positive");
  }
  if (t_k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "t_k must be >= 1");
  }
  return 2.0 * beta / std::sqrt(nu * static_cast<double>(t_k));
}

}  // namespace zslq
