#include "zslq/model.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

namespace zslq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kMarginViolation: return "MarginViolation";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kSingularH: return "SingularH";
    case ErrorCode::kSingularSchurBlock: return "SingularSchurBlock";
    case ErrorCode::kUnstableClosedLoop: return "UnstableClosedLoop";
    case ErrorCode::kEigenFailure: return "EigenFailure";
    case ErrorCode::kNegativeLogDetGap: return "NegativeLogDetGap";
    case ErrorCode::kStateBlowup: return "StateBlowup";
    case ErrorCode::kCertificationCollapse: return "CertificationCollapse";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace detail {

void require_finite(const Matrix& m, const char* name) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kNonFiniteInput,
                std::string(name) + " has non-finite entries");
  }
}

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                   const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << name << " is " << m.rows() << "x" << m.cols() << ", expected "
       << rows << "x" << cols;
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
}

Matrix symmetrized(const Matrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << name << " must be square, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
  require_finite(m, name);
  const double scale = std::max(1.0, m.norm());
  const double asym = (m - m.transpose()).norm();
  if (asym > 1e-12 * scale) {
    std::cerr << "[zslq] warning: " << name << " asymmetric by " << asym
              << ", symmetrizing\n";
  }
  return 0.5 * (m + m.transpose());
}

}  // namespace detail

Dims::Dims(int n_, int m1_, int m2_) : n(n_), m1(m1_), m2(m2_) {
  if (n < 1 || m1 < 1 || m2 < 1) {
    std::ostringstream os;
    os << "dims must be positive, got n=" << n << " m1=" << m1
       << " m2=" << m2;
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
}

SystemModel::SystemModel(Matrix A, Matrix B1, Matrix B2)
    : A_(std::move(A)), B1_(std::move(B1)), B2_(std::move(B2)) {
  const auto n = A_.rows();
  detail::require_shape(A_, n, n, "A");
  if (B1_.rows() != n) detail::require_shape(B1_, n, B1_.cols(), "B1");
  if (B2_.rows() != n) detail::require_shape(B2_, n, B2_.cols(), "B2");
  detail::require_finite(A_, "A");
  detail::require_finite(B1_, "B1");
  detail::require_finite(B2_, "B2");
  (void)dims();  // rejects empty blocks
}

Dims SystemModel::dims() const {
  return Dims(static_cast<int>(A_.rows()), static_cast<int>(B1_.cols()),
              static_cast<int>(B2_.cols()));
}

ThetaMatrix::ThetaMatrix(Matrix theta, Dims dims)
    : theta_(std::move(theta)), dims_(dims) {
  detail::require_shape(theta_, dims_.n, dims_.d(), "Theta");
  detail::require_finite(theta_, "Theta");
}

Vector ThetaMatrix::flat() const {
  return Eigen::Map<const Vector>(theta_.data(), theta_.size());
}

ThetaMatrix concat_model(const SystemModel& m) {
  const Dims dims = m.dims();
  Matrix theta(dims.n, dims.d());
  theta << m.A(), m.B1(), m.B2();
  return ThetaMatrix(std::move(theta), dims);
}

SystemModel split_theta(const Matrix& t, const Dims& dims) {
  detail::require_shape(t, dims.n, dims.d(), "Theta");
  return SystemModel(t.leftCols(dims.n), t.middleCols(dims.n, dims.m1),
                     t.rightCols(dims.m2));
}

SystemModel split_theta(const ThetaMatrix& t) {
  return split_theta(t.matrix(), t.dims());
}

double theta_distance(const ThetaMatrix& a, const ThetaMatrix& b) {
  if (!(a.dims() == b.dims())) {
    throw Error(ErrorCode::kDimensionMismatch,
                "theta_distance on parameters of different shape");
  }
  return (a.matrix() - b.matrix()).norm();
}

CostSpec::CostSpec(Matrix Q, Matrix Ru, Matrix Rv)
    : Q_(detail::symmetrized(Q, "Q")),
      Ru_(detail::symmetrized(Ru, "Ru")),
      Rv_(detail::symmetrized(Rv, "Rv")) {
  Eigen::SelfAdjointEigenSolver<Matrix> q_eig(Q_, Eigen::EigenvaluesOnly);
  const double q_tol = 1e-12 * std::max(1.0, Q_.norm());
  if (q_eig.eigenvalues().minCoeff() < -q_tol) {
    throw Error(ErrorCode::kInvalidArgument, "Q is not positive semidefinite");
  }
  if (Eigen::LLT<Matrix>(Ru_).info() != Eigen::Success ||
      Eigen::SelfAdjointEigenSolver<Matrix>(Ru_, Eigen::EigenvaluesOnly)
              .eigenvalues()
              .minCoeff() <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "Ru is not positive definite");
  }
  if (Eigen::LLT<Matrix>(Rv_).info() != Eigen::Success ||
      Eigen::SelfAdjointEigenSolver<Matrix>(Rv_, Eigen::EigenvaluesOnly)
              .eigenvalues()
              .minCoeff() <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "Rv is not positive definite");
  }
}

namespace {

Matrix psd_factor(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "Sigma_w eigendecomposition failed");
  }
  const double tol = 1e-12 * std::max(1.0, S.norm());
  if (eig.eigenvalues().minCoeff() < -tol) {
    throw Error(ErrorCode::kInvalidArgument,
                "Sigma_w is not positive semidefinite");
  }
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

}  // namespace

NoiseSpec::NoiseSpec(double sigma_w, int n)
    : NoiseSpec(sigma_w, Matrix::Identity(n, n) * sigma_w * sigma_w) {}

NoiseSpec::NoiseSpec(double sigma_w, Matrix Sigma_w)
    : sigma_w_(sigma_w), Sigma_w_(detail::symmetrized(Sigma_w, "Sigma_w")) {
  if (!std::isfinite(sigma_w_) || sigma_w_ < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "sigma_w must be finite and >= 0");
  }
  factor_ = psd_factor(Sigma_w_);
}

GameSpec::GameSpec(SystemModel truth_, CostSpec cost_, NoiseSpec noise_,
                   InitialState x0_)
    : truth(std::move(truth_)),
      cost(std::move(cost_)),
      noise(std::move(noise_)),
      x0(std::move(x0_)) {
  const Dims d = truth.dims();
  detail::require_shape(cost.Q(), d.n, d.n, "Q");
  detail::require_shape(cost.Ru(), d.m1, d.m1, "Ru");
  detail::require_shape(cost.Rv(), d.m2, d.m2, "Rv");
  detail::require_shape(noise.Sigma_w(), d.n, d.n, "Sigma_w");
  std::visit(
      [&](const auto& init) {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, FixedInitialState>) {
          detail::require_shape(init.x0, d.n, 1, "x0");
          detail::require_finite(init.x0, "x0");
        } else {
          detail::require_shape(init.mean, d.n, 1, "x0.mean");
          detail::require_finite(init.mean, "x0.mean");
          if (!std::isfinite(init.scale) || init.scale < 0.0) {
            throw Error(ErrorCode::kInvalidArgument,
                        "x0.scale must be finite and >= 0");
          }
        }
      },
      x0);
}

}  // namespace zslq
