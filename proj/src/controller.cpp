#include "zslq/controller.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#ifndef ZSLQ_VERSION
#define ZSLQ_VERSION "unknown"
#endif

namespace zslq {

std::string code_version() { return ZSLQ_VERSION; }

ControlAction control(const Vector& x, const EpisodeState& ep,
                      const ExplorationSpec& expl, RandomStream& rng) {
  detail::require_finite(x, "x");
  ControlAction a;
  a.eta = Vector::Zero(ep.K.rows());
  a.zeta = Vector::Zero(ep.L.rows());
  if (expl.sigma_eta_sq > 0.0) {
    a.eta = std::sqrt(expl.sigma_eta_sq) * rng.normal(ep.K.rows());
  }
  if (expl.sigma_zeta_sq > 0.0) {
    a.zeta = std::sqrt(expl.sigma_zeta_sq) * rng.normal(ep.L.rows());
  }
  a.u = -ep.K * x + a.eta;
  a.v = -ep.L * x + a.zeta;
  return a;
}

bool should_update(double logdet_now, double logdet_at_start) {
  return logdet_now >= logdet_at_start + std::log(2.0);
}

void RunConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kConfigError, what);
  };
  if (T < 0) fail("horizon must be >= 0");
  if (!(lambda > 0.0)) fail("lambda must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) fail("delta must lie in (0, 1)");
  if (!(margins.mu > 0.0)) fail("margins.mu must be > 0");
  if (!(margins.gamma > 0.0 && margins.gamma < 1.0)) {
    fail("margins.gamma must lie in (0, 1)");
  }
  if (sigma_eta_sq && !(*sigma_eta_sq >= 0.0)) fail("sigma_eta_sq must be >= 0");
  if (sigma_zeta_sq && !(*sigma_zeta_sq >= 0.0)) {
    fail("sigma_zeta_sq must be >= 0");
  }
  if (S_theta && !(*S_theta >= 0.0)) fail("S_theta must be >= 0");
  if (seeds.empty()) fail("seeds must be nonempty");
  if (!(theta0_perturbation >= 0.0)) fail("theta0_perturbation must be >= 0");
  if (!(tol_alpha > 0.0 && tol_alpha < 1.0)) fail("tol_alpha must lie in (0, 1)");
  if (!(blowup_threshold > 0.0)) fail("blowup_threshold must be > 0");
  if (max_failed_episodes < 0) fail("max_failed_episodes must be >= 0");
  solver.validate();
}

double RunConfig::resolved_S_theta() const {
  if (S_theta) return *S_theta;
  return 1.5 * concat_model(game.truth).matrix().norm();
}

ExplorationSpec RunConfig::exploration(std::uint64_t seed) const {
  const double fallback = 1.0 / std::sqrt(static_cast<double>(T));
  return {sigma_eta_sq.value_or(fallback), sigma_zeta_sq.value_or(fallback),
          seed};
}

double RunTrace::episode_bound() const {
  return (final_logdet_V - d * std::log(lambda)) / std::log(2.0) + 1.0;
}

CertifiedModel initial_model(const RunConfig& cfg, RandomStream& rng) {
  const ThetaMatrix truth = concat_model(cfg.game.truth);
  const Dims dims = truth.dims();
  const double scale = cfg.theta0_perturbation * truth.matrix().norm();
  constexpr int kMaxDraws = 100;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    Matrix offset = Matrix::Zero(dims.n, dims.d());
    if (scale > 0.0) {
      const Vector g = rng.normal(dims.n * dims.d());
      offset = Eigen::Map<const Matrix>(g.data(), dims.n, dims.d());
      offset *= scale / offset.norm();
    }
    ThetaMatrix candidate(truth.matrix() + offset, dims);
    RegularityResult r =
        is_regular(candidate, cfg.game.cost, cfg.margins, cfg.solver);
    if (r.regular) {
      return CertifiedModel{std::move(candidate), 1.0, std::move(*r.solution),
                            false, 0, false};
    }
    if (scale == 0.0) break;
  }
  throw Error(ErrorCode::kCertificationCollapse,
              "no regular initial surrogate found near the truth");
}

namespace {

EpisodeRecord episode_record(const EpisodeState& ep, const DesignState& state,
                             const ConfidenceSet& conf,
                             const ThetaMatrix& theta_hat,
                             const ThetaMatrix& truth,
                             const GareSolution& truth_sol) {
  const GareSolution& sol = ep.certified.solution;
  return EpisodeRecord{
      ep.k,
      ep.t_k,
      ep.certified.alpha,
      conf.beta,
      theta_distance(theta_hat, truth),
      theta_distance(ep.certified.theta, truth),
      (ep.K - truth_sol.K()).norm(),
      (ep.L - truth_sol.L()).norm(),
      sol.margin(),
      sol.rho_cl(),
      state.t() > 0 ? min_eig_ratio(state)
                    : std::numeric_limits<double>::quiet_NaN(),
      ep.certified.failure_flag,
      contains(conf, truth),
      contains(conf, ep.certified.theta),
      state.logdet_V(),
  };
}

}  // namespace

RunTrace run(const RunConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const GameSpec& game = cfg.game;
  const SystemModel& plant = game.truth;
  const Dims dims = game.dims();
  const ThetaMatrix truth = concat_model(plant);
  const double S_theta = cfg.resolved_S_theta();

  RunTrace trace;
  trace.seed = seed;
  trace.code_version = code_version();
  trace.config_hash = cfg.config_hash;
  trace.lambda = cfg.lambda;
  trace.d = dims.d();

  const GareSolution truth_sol = solve_gare(plant, game.cost, cfg.solver);
  trace.J_star = benchmark_cost(truth_sol, game.noise);
  trace.truth_regular = is_regular(truth, game.cost, cfg.margins, cfg.solver).regular;
  if (!trace.truth_regular) {
    std::cerr << "[zslq] warning: true parameter is outside the regularity "
                 "set for the configured margins\n";
  }

  DesignState state(dims, cfg.lambda);
  trace.final_logdet_V = state.logdet_V();
  if (cfg.T == 0) return trace;

  RandomStream init_rng(seed, static_cast<std::uint64_t>(StreamTag::kInitialization));
  RandomStream noise_rng(seed, static_cast<std::uint64_t>(StreamTag::kDisturbance));
  RandomStream expl_rng(seed, static_cast<std::uint64_t>(StreamTag::kExploration));
  const ExplorationSpec expl = cfg.exploration(seed);

  CertifiedModel certified = initial_model(cfg, init_rng);
  Vector x = std::visit(
      [&](const auto& init) -> Vector {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, FixedInitialState>) {
          return init.x0;
        } else {
          return init.mean + init.scale * init_rng.normal(dims.n);
        }
      },
      game.x0);

  EpisodeState ep{0, 0, certified.solution.K(), certified.solution.L(),
                  state.logdet_V(), certified};
  {
    const ConfidenceSet conf =
        confidence_set(state, game.noise, cfg.delta, S_theta);
    trace.episodes.push_back(
        episode_record(ep, state, conf, conf.center, truth, truth_sol));
  }

  RegretSeries regret(trace.J_star);
  trace.steps.reserve(static_cast<std::size_t>(cfg.T));
  Vector z(dims.d());
  double eta_energy = 0.0;
  double zeta_energy = 0.0;
  int consecutive_failures = 0;

  for (std::int64_t t = 0; t < cfg.T; ++t) {
    const ControlAction a = control(x, ep, expl, expl_rng);
    eta_energy += a.eta.squaredNorm();
    zeta_energy += a.zeta.squaredNorm();
    const double cost = stage_cost(x, a.u, a.v, game.cost);
    regret.accumulate(cost);

    const Vector w = game.noise.factor() * noise_rng.normal(dims.n);
    Vector x_next = plant.A() * x + plant.B1() * a.u + plant.B2() * a.v + w;
    z << x, a.u, a.v;
    state.update(z, x_next);
    trace.steps.push_back(StepRecord{t, cost, regret.regret().back(),
                                     regret.normalized().back(), x.norm()});

    const double next_norm = x_next.norm();
    if (!(next_norm <= cfg.blowup_threshold)) {
      std::ostringstream os;
      os << "||x|| = " << next_norm << " at t=" << t + 1 << " (seed " << seed
         << ")";
      throw Error(ErrorCode::kStateBlowup, os.str());
    }
    x = std::move(x_next);

    if (t + 1 < cfg.T && should_update(state.logdet_V(), ep.logdet_at_start)) {
      const ConfidenceSet conf =
          confidence_set(state, game.noise, cfg.delta, S_theta);
      CertifiedModel next = shrink(conf.center, ep.certified, conf, game.cost,
                                   cfg.margins, cfg.tol_alpha, cfg.solver);
      if (next.failure_flag) {
        if (++consecutive_failures > cfg.max_failed_episodes) {
          std::ostringstream os;
          os << consecutive_failures
             << " consecutive episodes without a certified surrogate (seed "
             << seed << ")";
          throw Error(ErrorCode::kCertificationCollapse, os.str());
        }
      } else {
        consecutive_failures = 0;
      }
      ep = EpisodeState{ep.k + 1,          t + 1,
                        next.solution.K(), next.solution.L(),
                        state.logdet_V(),  std::move(next)};
      trace.episodes.push_back(
          episode_record(ep, state, conf, conf.center, truth, truth_sol));
    }
  }

  trace.final_logdet_V = state.logdet_V();
  trace.mean_eta_sq = eta_energy / static_cast<double>(cfg.T);
  trace.mean_zeta_sq = zeta_energy / static_cast<double>(cfg.T);

  const double bound = trace.episode_bound();
  if (static_cast<double>(trace.episodes.size()) > bound + 1e-9) {
    std::ostringstream os;
    os << trace.episodes.size() << " episodes exceed the doubling bound "
       << bound;
    throw std::logic_error(os.str());
  }
  return trace;
}

}  // namespace zslq
