#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zslq/metrics.hpp"

namespace zslq {

/// Options used for every solve inside the verification battery. Finite
/// differences down to 1e-6 need the Riccati fixed point far below the default
/// run tolerance.
SolverOptions tight_solver_options();

/// Least-squares slope of log(y) against log(x). Non-positive y are skipped;
/// returns NaN when fewer than two points remain.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Random matrix with unit Frobenius norm. Columns listed in `zero_cols` are
/// held at zero.
Matrix random_unit_direction(Eigen::Index rows, Eigen::Index cols,
                             std::uint64_t seed,
                             std::pair<Eigen::Index, Eigen::Index> zero_cols = {0, 0});

struct DirectionProbe {
  Matrix direction;
  std::vector<double> dP;  // ||P(theta* + eps D) - P*||_F per scale
  std::vector<double> dK;
  std::vector<double> dL;
  double slope_P = 0.0;
  double slope_K = 0.0;
  double slope_L = 0.0;
  bool failed = false;
  std::string failure;
};

/// Empirical sensitivity of the saddle solution to parameter perturbations.
struct PerturbationReport {
  std::vector<double> scales;
  std::vector<DirectionProbe> directions;
  // Largest ||dP|| / eps over all probes, i.e. empirical C_P, C_K, C_L.
  double C_P = 0.0;
  double C_K = 0.0;
  double C_L = 0.0;
  // True when L* = 0 and no probe moves it (one-player reduction).
  bool L_trivial = false;

  int failed_directions() const;
  /// Smallest and largest fitted slope over successful probes.
  std::pair<double, double> slope_range_P() const;
  std::pair<double, double> slope_range_K() const;
  std::pair<double, double> slope_range_L() const;
};

PerturbationReport lipschitz_probe(const ThetaMatrix& theta_star,
                                   const CostSpec& cost,
                                   std::span<const Matrix> directions,
                                   std::vector<double> scales);

/// Draws `count` seeded unit directions. When B2 = 0 the B2 block of each
/// direction is zeroed so the probe stays in the one-player family.
PerturbationReport lipschitz_probe(const ThetaMatrix& theta_star,
                                   const CostSpec& cost, int count,
                                   std::vector<double> scales,
                                   std::uint64_t seed = 1);

/// || [F(P* + eps X) - F(P*)] / eps - (X - Acl' X Acl) ||_F.
double envelope_check(const GareSolution& sol, const SystemModel& m,
                      const CostSpec& c, const Matrix& X, double eps);

/// (||B1'P Acl - Ru K||_F, ||B2'P Acl + Rv L||_F).
std::pair<double, double> stationarity_check(const GareSolution& sol,
                                             const SystemModel& m,
                                             const CostSpec& c);

enum class GainPerturbation { kJoint, kMinimizerOnly, kMaximizerOnly };

struct CostGapReport {
  std::vector<double> scales;
  // Mean over directions of J(K, L) - J* (signed) and |J(K, L) - J*|.
  std::vector<double> mean_gap;
  std::vector<double> mean_abs_gap;
  double slope = 0.0;
  double J_star = 0.0;
  int probes = 0;
  int discarded = 0;
};

/// Fits the order of J(K* + s dK, L* + s dL) - J* in s. Unstable probes are
/// discarded; more than half discarded is an error.
CostGapReport cost_gap_fit(const SystemModel& m, const CostSpec& c,
                           const NoiseSpec& noise, std::vector<double> scales,
                           GainPerturbation mode = GainPerturbation::kJoint,
                           int directions = 8, std::uint64_t seed = 1);

/// || L^{-1}(X) - sum_{t<N} (Acl')^t X Acl^t ||_F.
double lyapunov_series_check(const Matrix& Acl, const Matrix& X, int N);

}  // namespace zslq
