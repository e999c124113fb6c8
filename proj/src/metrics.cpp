#include "zslq/metrics.hpp"

#include <cmath>

namespace zslq {

double stage_cost(const Vector& x, const Vector& u, const Vector& v,
                  const CostSpec& c) {
  detail::require_shape(x, c.Q().rows(), 1, "x");
  detail::require_shape(u, c.Ru().rows(), 1, "u");
  detail::require_shape(v, c.Rv().rows(), 1, "v");
  return x.dot(c.Q() * x) + u.dot(c.Ru() * u) - v.dot(c.Rv() * v);
}

double benchmark_cost(const GareSolution& sol, const NoiseSpec& noise) {
  detail::require_shape(noise.Sigma_w(), sol.P().rows(), sol.P().cols(),
                        "Sigma_w");
  return (sol.P() * noise.Sigma_w()).trace();
}

double closed_loop_cost(const Matrix& K, const Matrix& L,
                        const SystemModel& m, const CostSpec& c,
                        const NoiseSpec& noise) {
  const Matrix Acl = closed_loop(m, K, L);
  const Matrix W =
      c.Q() + K.transpose() * c.Ru() * K - L.transpose() * c.Rv() * L;
  const Matrix P = solve_lyapunov(Acl, W);
  return (P * noise.Sigma_w()).trace();
}

void RegretSeries::accumulate(double c_t) {
  const double prev = cumulative_.empty() ? 0.0 : cumulative_.back();
  const double total = prev + c_t;
  const double t = static_cast<double>(cumulative_.size() + 1);
  const double regret = total - t * J_star_;
  cumulative_.push_back(total);
  regret_.push_back(regret);
  normalized_.push_back(regret / std::sqrt(t));
}

}  // namespace zslq
