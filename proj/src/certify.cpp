#include "zslq/certify.hpp"

#include <cmath>
#include <map>

namespace zslq {

RegularityMargins::RegularityMargins(double mu_, double gamma_)
    : mu(mu_), gamma(gamma_) {
  if (!(mu > 0.0) || !(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "regularity margins need mu > 0 and 0 < gamma < 1");
  }
}

RegularityResult is_regular(const ThetaMatrix& theta, const CostSpec& cost,
                            const RegularityMargins& margins,
                            SolverOptions opts) {
  opts.mu_floor = margins.mu;
  try {
    GareSolution sol = solve_gare(split_theta(theta), cost, opts);
    if (sol.margin() < margins.mu || sol.rho_cl() > 1.0 - margins.gamma) {
      return {false, std::nullopt};
    }
    return {true, std::move(sol)};
  } catch (const Error&) {
    return {false, std::nullopt};
  }
}

namespace {

struct Probe {
  bool feasible = false;
  bool in_confidence = false;
  std::optional<GareSolution> solution;
};

}  // namespace

CertifiedModel shrink(const ThetaMatrix& theta_hat,
                      const CertifiedModel& previous,
                      const ConfidenceSet& conf, const CostSpec& cost,
                      const RegularityMargins& margins, double tol_alpha,
                      const SolverOptions& opts) {
  if (!(tol_alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tol_alpha must be positive");
  }
  if (!(theta_hat.dims() == previous.theta.dims())) {
    throw Error(ErrorCode::kDimensionMismatch,
                "estimate and previous surrogate differ in shape");
  }
  const Dims dims = theta_hat.dims();
  const Matrix& from = previous.theta.matrix();
  const Matrix& to = theta_hat.matrix();

  std::map<double, Probe> probes;
  auto point = [&](double alpha) {
    return ThetaMatrix((1.0 - alpha) * from + alpha * to, dims);
  };
  auto probe = [&](double alpha) -> const Probe& {
    if (auto it = probes.find(alpha); it != probes.end()) return it->second;
    Probe p;
    const ThetaMatrix candidate = point(alpha);
    p.in_confidence = contains(conf, candidate);
    // The regularity solve only matters inside the confidence set.
    if (p.in_confidence) {
      RegularityResult r = is_regular(candidate, cost, margins, opts);
      p.feasible = r.regular;
      p.solution = std::move(r.solution);
    }
    return probes.emplace(alpha, std::move(p)).first->second;
  };
  auto accept = [&](double alpha) {
    const Probe& p = probe(alpha);
    return CertifiedModel{point(alpha), alpha, *p.solution, true,
                          previous.episode + 1, false};
  };

  if (probe(1.0).feasible) return accept(1.0);

  double infeasible = 1.0;
  double feasible = -1.0;
  for (int k = 1; k <= 20; ++k) {
    const double alpha = std::ldexp(1.0, -k);
    if (probe(alpha).feasible) {
      feasible = alpha;
      break;
    }
    infeasible = alpha;
  }
  if (feasible < 0.0) {
    if (!probe(0.0).feasible) {
      CertifiedModel kept = previous;
      kept.alpha = 0.0;
      kept.in_confidence = probe(0.0).in_confidence;
      kept.episode = previous.episode + 1;
      kept.failure_flag = true;
      return kept;
    }
    feasible = 0.0;
  }

  double lo = feasible;
  double hi = infeasible;
  while (hi - lo > tol_alpha) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid).feasible) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return accept(lo);
}

}  // namespace zslq
