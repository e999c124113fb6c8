#pragma once

#include <vector>

#include "zslq/riccati.hpp"

namespace zslq {

/// c = x'Qx + u'Ru u - v'Rv v.
double stage_cost(const Vector& x, const Vector& u, const Vector& v,
                  const CostSpec& c);

/// J* = tr(P* Sigma_w).
double benchmark_cost(const GareSolution& sol, const NoiseSpec& noise);

/// Average cost tr(P_KL Sigma_w) of the stationary policy pair (K, L), where
/// P_KL solves P = Q + K'Ru K - L'Rv L + Acl' P Acl.
double closed_loop_cost(const Matrix& K, const Matrix& L,
                        const SystemModel& m, const CostSpec& c,
                        const NoiseSpec& noise);

/// Running regret against the benchmark J*. Entry i covers the first i + 1
/// stage costs: regret[i] = cumulative[i] - (i + 1) J*.
class RegretSeries {
 public:
  explicit RegretSeries(double J_star) : J_star_(J_star) {}

  void accumulate(double c_t);

  double J_star() const { return J_star_; }
  std::size_t size() const { return cumulative_.size(); }
  const std::vector<double>& cumulative_cost() const { return cumulative_; }
  const std::vector<double>& regret() const { return regret_; }
  /// regret / sqrt(t) with t the number of accumulated costs.
  const std::vector<double>& normalized() const { return normalized_; }

 private:
  double J_star_;
  std::vector<double> cumulative_;
  std::vector<double> regret_;
  std::vector<double> normalized_;
};

}  // namespace zslq
