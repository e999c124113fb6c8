#include "zslq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "zslq/random.hpp"

namespace zslq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_scales(const std::vector<double>& scales, bool decreasing) {
  if (scales.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no perturbation scales given");
  }
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0) || !std::isfinite(scales[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "perturbation scales must be positive and finite");
    }
    if (decreasing && i > 0 && !(scales[i] < scales[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "perturbation scales must be strictly decreasing");
    }
  }
}

void require_unit(const Matrix& M, const char* name) {
  if (std::abs(M.norm() - 1.0) > 1e-12) {
    std::ostringstream os;
    os << name << " must have unit Frobenius norm, got " << M.norm();
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
}

std::pair<double, double> slope_range(
    const std::vector<DirectionProbe>& probes,
    double DirectionProbe::*field) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : probes) {
    if (p.failed || std::isnan(p.*field)) continue;
    lo = std::min(lo, p.*field);
    hi = std::max(hi, p.*field);
  }
  if (lo > hi) return {kNaN, kNaN};
  return {lo, hi};
}

}  // namespace

SolverOptions tight_solver_options() {
  SolverOptions opts;
  opts.tol = 1e-13;
  opts.max_iter = 100'000;
  return opts;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "loglog_slope size mismatch");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) return kNaN;
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) return kNaN;
  return (count * sxy - sx * sy) / denom;
}

Matrix random_unit_direction(Eigen::Index rows, Eigen::Index cols,
                             std::uint64_t seed,
                             std::pair<Eigen::Index, Eigen::Index> zero_cols) {
  RandomStream rng(seed, 0x616e616c79736973ULL);
  Matrix D(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) D(i, j) = rng.normal();
  }
  if (zero_cols.second > 0) {
    D.middleCols(zero_cols.first, zero_cols.second).setZero();
  }
  return D / D.norm();
}

int PerturbationReport::failed_directions() const {
  return static_cast<int>(std::count_if(
      directions.begin(), directions.end(),
      [](const DirectionProbe& p) { return p.failed; }));
}

std::pair<double, double> PerturbationReport::slope_range_P() const {
  return slope_range(directions, &DirectionProbe::slope_P);
}
std::pair<double, double> PerturbationReport::slope_range_K() const {
  return slope_range(directions, &DirectionProbe::slope_K);
}
std::pair<double, double> PerturbationReport::slope_range_L() const {
  return slope_range(directions, &DirectionProbe::slope_L);
}

PerturbationReport lipschitz_probe(const ThetaMatrix& theta_star,
                                   const CostSpec& cost,
                                   std::span<const Matrix> directions,
                                   std::vector<double> scales) {
  require_scales(scales, /*decreasing=*/true);
  const Dims dims = theta_star.dims();
  const SolverOptions opts = tight_solver_options();
  const GareSolution base = solve_gare(split_theta(theta_star), cost, opts);

  PerturbationReport report;
  report.scales = scales;
  report.L_trivial = base.L().norm() == 0.0;

  for (const Matrix& dir : directions) {
    detail::require_shape(dir, dims.n, dims.d(), "direction");
    require_unit(dir, "direction");
    DirectionProbe probe;
    probe.direction = dir;
    try {
      for (double eps : scales) {
        const GareSolution s = solve_gare(
            split_theta(theta_star.matrix() + eps * dir, dims), cost, opts);
        probe.dP.push_back((s.P() - base.P()).norm());
        probe.dK.push_back((s.K() - base.K()).norm());
        probe.dL.push_back((s.L() - base.L()).norm());
      }
    } catch (const Error& e) {
      probe.failed = true;
      probe.failure = e.what();
      report.directions.push_back(std::move(probe));
      continue;
    }
    probe.slope_P = loglog_slope(scales, probe.dP);
    probe.slope_K = loglog_slope(scales, probe.dK);
    probe.slope_L = loglog_slope(scales, probe.dL);
    for (std::size_t i = 0; i < scales.size(); ++i) {
      report.C_P = std::max(report.C_P, probe.dP[i] / scales[i]);
      report.C_K = std::max(report.C_K, probe.dK[i] / scales[i]);
      report.C_L = std::max(report.C_L, probe.dL[i] / scales[i]);
    }
    if (probe.dL.back() != 0.0) report.L_trivial = false;
    report.directions.push_back(std::move(probe));
  }
  return report;
}

PerturbationReport lipschitz_probe(const ThetaMatrix& theta_star,
                                   const CostSpec& cost, int count,
                                   std::vector<double> scales,
                                   std::uint64_t seed) {
  if (count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one direction");
  }
  const Dims dims = theta_star.dims();
  const bool one_player =
      split_theta(theta_star).B2().cwiseAbs().maxCoeff() == 0.0;
  std::pair<Eigen::Index, Eigen::Index> frozen{0, 0};
  if (one_player) frozen = {dims.n + dims.m1, dims.m2};
  std::vector<Matrix> dirs;
  for (int i = 0; i < count; ++i) {
    dirs.push_back(
        random_unit_direction(dims.n, dims.d(), seed + static_cast<std::uint64_t>(i), frozen));
  }
  return lipschitz_probe(theta_star, cost, dirs, std::move(scales));
}

double envelope_check(const GareSolution& sol, const SystemModel& m,
                      const CostSpec& c, const Matrix& X, double eps) {
  const Dims dims = m.dims();
  detail::require_shape(X, dims.n, dims.n, "X");
  require_unit(X, "X");
  if (!(eps > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
  }
  const Matrix F0 = gare_residual(sol.P(), m, c);
  const Matrix F1 = gare_residual(sol.P() + eps * X, m, c);
  const Matrix Acl = closed_loop(m, sol.K(), sol.L());
  const Matrix lyap = X - Acl.transpose() * X * Acl;
  return ((F1 - F0) / eps - lyap).norm();
}

std::pair<double, double> stationarity_check(const GareSolution& sol,
                                             const SystemModel& m,
                                             const CostSpec& c) {
  const Matrix Acl = closed_loop(m, sol.K(), sol.L());
  const Matrix PAcl = sol.P() * Acl;
  return {(m.B1().transpose() * PAcl - c.Ru() * sol.K()).norm(),
          (m.B2().transpose() * PAcl + c.Rv() * sol.L()).norm()};
}

CostGapReport cost_gap_fit(const SystemModel& m, const CostSpec& c,
                           const NoiseSpec& noise, std::vector<double> scales,
                           GainPerturbation mode, int directions,
                           std::uint64_t seed) {
  require_scales(scales, /*decreasing=*/false);
  if (directions < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one direction");
  }
  const Dims dims = m.dims();
  const GareSolution sol = solve_gare(m, c, tight_solver_options());

  CostGapReport report;
  report.scales = scales;
  report.J_star = closed_loop_cost(sol.K(), sol.L(), m, c, noise);
  report.mean_gap.assign(scales.size(), 0.0);
  report.mean_abs_gap.assign(scales.size(), 0.0);
  std::vector<int> kept(scales.size(), 0);

  for (int i = 0; i < directions; ++i) {
    Matrix dir = random_unit_direction(dims.m1 + dims.m2, dims.n,
                                       seed + static_cast<std::uint64_t>(i));
    if (mode == GainPerturbation::kMinimizerOnly) {
      dir.bottomRows(dims.m2).setZero();
    } else if (mode == GainPerturbation::kMaximizerOnly) {
      dir.topRows(dims.m1).setZero();
    }
    dir /= dir.norm();
    for (std::size_t s = 0; s < scales.size(); ++s) {
      ++report.probes;
      const Matrix K = sol.K() + scales[s] * dir.topRows(dims.m1);
      const Matrix L = sol.L() + scales[s] * dir.bottomRows(dims.m2);
      if (spectral_radius(closed_loop(m, K, L)) >= 1.0 - 1e-9) {
        ++report.discarded;
        continue;
      }
      const double gap = closed_loop_cost(K, L, m, c, noise) - report.J_star;
      report.mean_gap[s] += gap;
      report.mean_abs_gap[s] += std::abs(gap);
      ++kept[s];
    }
  }
  if (2 * report.discarded > report.probes) {
    std::ostringstream os;
    os << report.discarded << " of " << report.probes
       << " gain perturbations were destabilizing";
    throw Error(ErrorCode::kUnstableClosedLoop, os.str());
  }
  for (std::size_t s = 0; s < scales.size(); ++s) {
    if (kept[s] == 0) {
      report.mean_gap[s] = kNaN;
      report.mean_abs_gap[s] = kNaN;
      continue;
    }
    report.mean_gap[s] /= kept[s];
    report.mean_abs_gap[s] /= kept[s];
  }
  report.slope = loglog_slope(report.scales, report.mean_abs_gap);
  return report;
}

double lyapunov_series_check(const Matrix& Acl, const Matrix& X, int N) {
  if (N < 1) {
    throw Error(ErrorCode::kInvalidArgument, "truncation N must be >= 1");
  }
  const Matrix direct = solve_lyapunov(Acl, X);
  Matrix term = X;
  Matrix series = Matrix::Zero(X.rows(), X.cols());
  for (int t = 0; t < N; ++t) {
    series += term;
    term = Acl.transpose() * term * Acl;
  }
  return (direct - series).norm();
}

}  // namespace zslq
