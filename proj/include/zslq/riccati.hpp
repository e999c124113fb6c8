#pragma once

#include "zslq/model.hpp"

namespace zslq {

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 10'000;
  // Smallest acceptable lambda_min(Rv - B2' P B2) at any iterate.
  double mu_floor = 0.0;

  void validate() const;
};

/// Certified stabilizing saddle-point solution of the zero-sum GARE.
///
/// Construction verifies the solution: P symmetric PSD, positive margin,
/// Schur-stable closed loop and residual within `tol`. A GareSolution that
/// exists is therefore always usable for control.
class GareSolution {
 public:
  GareSolution(Matrix P, Matrix K, Matrix L, Matrix H, double margin,
               double rho_cl, double residual, int iterations, double tol);

  const Matrix& P() const { return P_; }
  const Matrix& K() const { return K_; }
  const Matrix& L() const { return L_; }
  const Matrix& H() const { return H_; }
  double margin() const { return margin_; }
  double rho_cl() const { return rho_cl_; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  Matrix P_, K_, L_, H_;
  double margin_;
  double rho_cl_;
  double residual_;
  int iterations_;
};

struct SaddleGains {
  Matrix K;
  Matrix L;
  Matrix H;
};

/// H(P) = [Ru + B1'PB1, B1'PB2; B2'PB1, -Rv + B2'PB2].
Matrix h_matrix(const Matrix& P, const SystemModel& m, const CostSpec& c);

/// Stage saddle gains [K; L] = H(P)^{-1} [B1'PA; B2'PA] by a joint block solve.
SaddleGains gains_from_p(const Matrix& P, const SystemModel& m,
                         const CostSpec& c);

/// The same gains through the explicit Schur-complement expressions for K and
/// L separately. Kept as an independent route for cross-checking.
SaddleGains gains_from_p_explicit(const Matrix& P, const SystemModel& m,
                                  const CostSpec& c);

Matrix closed_loop(const SystemModel& m, const Matrix& K, const Matrix& L);

double spectral_radius(const Matrix& M);

/// Solves X = W + Acl' X Acl through the n^2 x n^2 vectorized system.
Matrix solve_lyapunov(const Matrix& Acl, const Matrix& W);

/// F(P) = P - Phi(P) with Phi evaluated at the stage saddle pair of P.
Matrix gare_residual(const Matrix& P, const SystemModel& m, const CostSpec& c);

/// lambda_min(Rv - B2' P B2).
double solvability_margin(const Matrix& P, const SystemModel& m,
                          const CostSpec& c);

GareSolution solve_gare(const SystemModel& m, const CostSpec& c,
                        const SolverOptions& opts = {});

}  // namespace zslq
