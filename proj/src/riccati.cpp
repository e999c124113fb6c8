#include "zslq/riccati.hpp"

#include <cmath>
#include <sstream>

namespace zslq {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr int kMaxLyapunovDim = 32;

double condition_number(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

void require_square(const Matrix& P, Eigen::Index n, const char* name) {
  detail::require_shape(P, n, n, name);
}

Matrix sym(const Matrix& M) { return 0.5 * (M + M.transpose()); }

Matrix stacked_b(const SystemModel& m) {
  Matrix B(m.A().rows(), m.B1().cols() + m.B2().cols());
  B << m.B1(), m.B2();
  return B;
}

// Phi(P) at the stage saddle pair (K, L).
Matrix phi(const Matrix& P, const SystemModel& m, const CostSpec& c,
           const Matrix& K, const Matrix& L) {
  const Matrix Acl = closed_loop(m, K, L);
  return c.Q() + Acl.transpose() * P * Acl + K.transpose() * c.Ru() * K -
         L.transpose() * c.Rv() * L;
}

}  // namespace

void SolverOptions::validate() const {
  if (!(tol > 0.0) || max_iter < 1 || !(mu_floor >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "solver options need tol > 0, max_iter >= 1, mu_floor >= 0");
  }
}

GareSolution::GareSolution(Matrix P, Matrix K, Matrix L, Matrix H,
                           double margin, double rho_cl, double residual,
                           int iterations, double tol)
    : P_(std::move(P)),
      K_(std::move(K)),
      L_(std::move(L)),
      H_(std::move(H)),
      margin_(margin),
      rho_cl_(rho_cl),
      residual_(residual),
      iterations_(iterations) {
  if ((P_ - P_.transpose()).norm() > 1e-10 * std::max(1.0, P_.norm())) {
    throw Error(ErrorCode::kInvalidArgument, "GARE solution is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(P_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw Error(ErrorCode::kInvalidArgument,
                "GARE solution is not positive semidefinite");
  }
  if (!(margin_ > 0.0)) {
    throw Error(ErrorCode::kMarginViolation,
                "solution has non-positive solvability margin");
  }
  if (!(rho_cl_ < 1.0)) {
    throw Error(ErrorCode::kUnstableClosedLoop,
                "solution closed loop is not Schur stable");
  }
  if (!(residual_ <= tol)) {
    std::ostringstream os;
    os << "residual " << residual_ << " exceeds tolerance " << tol;
    throw Error(ErrorCode::kNonConvergence, os.str());
  }
}

Matrix h_matrix(const Matrix& P, const SystemModel& m, const CostSpec& c) {
  const Dims dims = m.dims();
  require_square(P, dims.n, "P");
  const Matrix& B1 = m.B1();
  const Matrix& B2 = m.B2();
  Matrix H(dims.m1 + dims.m2, dims.m1 + dims.m2);
  H << c.Ru() + B1.transpose() * P * B1, B1.transpose() * P * B2,
      B2.transpose() * P * B1, -c.Rv() + B2.transpose() * P * B2;
  return H;
}

SaddleGains gains_from_p(const Matrix& P, const SystemModel& m,
                         const CostSpec& c) {
  const Dims dims = m.dims();
  Matrix H = h_matrix(P, m, c);
  const double cond = condition_number(H);
  if (cond > kMaxCondition) {
    std::ostringstream os;
    os << "H(P) condition number " << cond;
    throw Error(ErrorCode::kSingularH, os.str());
  }
  const Matrix rhs = stacked_b(m).transpose() * P * m.A();
  const Matrix KL = H.fullPivLu().solve(rhs);
  return {KL.topRows(dims.m1), KL.bottomRows(dims.m2), std::move(H)};
}

SaddleGains gains_from_p_explicit(const Matrix& P, const SystemModel& m,
                                  const CostSpec& c) {
  const Dims dims = m.dims();
  require_square(P, dims.n, "P");
  const Matrix& A = m.A();
  const Matrix& B1 = m.B1();
  const Matrix& B2 = m.B2();

  const Matrix S1 = c.Ru() + B1.transpose() * P * B1;
  const Matrix S2 = -c.Rv() + B2.transpose() * P * B2;
  if (condition_number(S2) > kMaxCondition) {
    throw Error(ErrorCode::kSingularSchurBlock, "-Rv + B2'PB2 is singular");
  }
  if (condition_number(S1) > kMaxCondition) {
    throw Error(ErrorCode::kSingularSchurBlock, "Ru + B1'PB1 is singular");
  }
  const auto S1_lu = S1.fullPivLu();
  const auto S2_lu = S2.fullPivLu();
  const Matrix B1PB2 = B1.transpose() * P * B2;
  const Matrix B1PA = B1.transpose() * P * A;
  const Matrix B2PA = B2.transpose() * P * A;

  const Matrix K_lhs = S1 - B1PB2 * S2_lu.solve(B1PB2.transpose());
  const Matrix K_rhs = B1PA - B1PB2 * S2_lu.solve(B2PA);
  const Matrix L_lhs = S2 - B1PB2.transpose() * S1_lu.solve(B1PB2);
  const Matrix L_rhs = B2PA - B1PB2.transpose() * S1_lu.solve(B1PA);
  if (condition_number(K_lhs) > kMaxCondition ||
      condition_number(L_lhs) > kMaxCondition) {
    throw Error(ErrorCode::kSingularH, "Schur complement of H(P) is singular");
  }
  return {K_lhs.fullPivLu().solve(K_rhs), L_lhs.fullPivLu().solve(L_rhs),
          h_matrix(P, m, c)};
}

Matrix closed_loop(const SystemModel& m, const Matrix& K, const Matrix& L) {
  const Dims dims = m.dims();
  detail::require_shape(K, dims.m1, dims.n, "K");
  detail::require_shape(L, dims.m2, dims.n, "L");
  return m.A() - m.B1() * K - m.B2() * L;
}

double spectral_radius(const Matrix& M) {
  if (M.rows() != M.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "spectral_radius needs a square matrix");
  }
  if (M.size() == 0) return 0.0;
  detail::require_finite(M, "matrix");
  Eigen::EigenSolver<Matrix> es(M, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "eigenvalue computation failed");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix solve_lyapunov(const Matrix& Acl, const Matrix& W) {
  const Eigen::Index n = Acl.rows();
  require_square(Acl, n, "Acl");
  require_square(W, n, "W");
  if (n > kMaxLyapunovDim) {
    throw Error(ErrorCode::kInvalidArgument,
                "direct Lyapunov solve supports n <= 32");
  }
  const double rho = spectral_radius(Acl);
  if (rho >= 1.0 - 1e-9) {
    std::ostringstream os;
    os << "closed loop spectral radius " << rho;
    throw Error(ErrorCode::kUnstableClosedLoop, os.str());
  }

  // vec(Acl' X Acl) = (Acl' kron Acl') vec(X) for column-major vec.
  const Matrix At = Acl.transpose();
  Matrix M = Matrix::Identity(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      M.block(i * n, j * n, n, n) -= At(i, j) * At;
    }
  }
  const Vector w = Eigen::Map<const Vector>(W.data(), n * n);
  const Vector x = M.partialPivLu().solve(w);
  Matrix X = Eigen::Map<const Matrix>(x.data(), n, n);
  if ((W - W.transpose()).norm() <= 1e-12 * std::max(1.0, W.norm())) {
    X = sym(X);
  }
  return X;
}

double solvability_margin(const Matrix& P, const SystemModel& m,
                          const CostSpec& c) {
  const Matrix G = sym(c.Rv() - m.B2().transpose() * P * m.B2());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(G, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "margin eigenvalues failed");
  }
  return eig.eigenvalues().minCoeff();
}

Matrix gare_residual(const Matrix& P, const SystemModel& m,
                     const CostSpec& c) {
  const SaddleGains g = gains_from_p(P, m, c);
  return P - phi(P, m, c, g.K, g.L);
}

GareSolution solve_gare(const SystemModel& m, const CostSpec& c,
                        const SolverOptions& opts) {
  opts.validate();
  const Dims dims = m.dims();
  require_square(c.Q(), dims.n, "Q");

  const Matrix& A = m.A();
  const Matrix B = stacked_b(m);

  auto check_margin = [&](const Matrix& P, int iter) {
    const double margin = solvability_margin(P, m, c);
    if (margin < opts.mu_floor || !(margin > 0.0)) {
      std::ostringstream os;
      os << "lambda_min(Rv - B2'PB2) = " << margin << " at iterate " << iter
         << " (floor " << opts.mu_floor << ")";
      throw Error(ErrorCode::kMarginViolation, os.str());
    }
    return margin;
  };

  Matrix P = c.Q();
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    check_margin(P, iter - 1);
    const SaddleGains g = gains_from_p(P, m, c);
    const Matrix BPA = B.transpose() * P * A;
    Matrix next = sym(c.Q() + A.transpose() * P * A -
                      BPA.transpose() * g.H.fullPivLu().solve(BPA));
    if (!next.allFinite() || next.norm() > 1e15) {
      std::ostringstream os;
      os << "Riccati iterates diverged at iterate " << iter;
      throw Error(ErrorCode::kNonConvergence, os.str());
    }
    const double step = (next - P).norm();
    P = std::move(next);
    if (step >= opts.tol) continue;

    const double margin = check_margin(P, iter);
    SaddleGains gains = gains_from_p(P, m, c);
    const double residual =
        (P - phi(P, m, c, gains.K, gains.L)).norm();
    if (residual > opts.tol) continue;

    const double rho = spectral_radius(closed_loop(m, gains.K, gains.L));
    if (rho >= 1.0) {
      std::ostringstream os;
      os << "converged solution has closed-loop spectral radius " << rho;
      throw Error(ErrorCode::kUnstableClosedLoop, os.str());
    }
    return GareSolution(std::move(P), std::move(gains.K), std::move(gains.L),
                        std::move(gains.H), margin, rho, residual, iter,
                        opts.tol);
  }
  std::ostringstream os;
  os << "no convergence within " << opts.max_iter << " iterations";
  throw Error(ErrorCode::kNonConvergence, os.str());
}

}  // namespace zslq
