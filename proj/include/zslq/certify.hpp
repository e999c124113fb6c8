#pragma once

#include <optional>

#include "zslq/estimator.hpp"
#include "zslq/riccati.hpp"

namespace zslq {

struct RegularityMargins {
  double mu = 0.05;
  double gamma = 0.02;

  RegularityMargins() = default;
  RegularityMargins(double mu, double gamma);
};

/// A parameter that passed the regularity test, with its GARE solution.
struct CertifiedModel {
  ThetaMatrix theta;
  double alpha = 1.0;
  GareSolution solution;
  bool in_confidence = false;
  int episode = 0;
  // No tested point on the segment was feasible; theta is the previous model.
  bool failure_flag = false;
};

struct RegularityResult {
  bool regular = false;
  std::optional<GareSolution> solution;
};

/// Membership in the regularity set: the GARE has a stabilizing solution with
/// lambda_min(Rv - B2'PB2) >= mu and rho(A_cl) <= 1 - gamma. Solver failures
/// map to `regular == false`.
RegularityResult is_regular(const ThetaMatrix& theta, const CostSpec& cost,
                            const RegularityMargins& margins,
                            SolverOptions opts = {});

/// Segment search between the previous certified model and a new estimate.
///
/// Tests alpha = 1, then backtracks over 1/2, 1/4, ..., 2^-20 and finally 0.
/// Once a feasible alpha_lo is found below an infeasible 2 alpha_lo, the
/// bracket is bisected down to `tol_alpha` and the feasible end is returned.
/// With nothing feasible the previous model is kept and `failure_flag` is set.
CertifiedModel shrink(const ThetaMatrix& theta_hat,
                      const CertifiedModel& previous,
                      const ConfidenceSet& conf, const CostSpec& cost,
                      const RegularityMargins& margins, double tol_alpha = 1e-3,
                      const SolverOptions& opts = {});

}  // namespace zslq
