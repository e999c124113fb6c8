#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zslq/certify.hpp"
#include "zslq/metrics.hpp"
#include "zslq/random.hpp"

namespace zslq {

struct ExplorationSpec {
  double sigma_eta_sq = 0.0;
  double sigma_zeta_sq = 0.0;
  std::uint64_t rng_seed = 0;
};

struct EpisodeState {
  int k = 0;
  std::int64_t t_k = 0;
  Matrix K;
  Matrix L;
  double logdet_at_start = 0.0;
  CertifiedModel certified;
};

struct ControlAction {
  Vector u;
  Vector v;
  Vector eta;
  Vector zeta;
};

/// u = -K x + eta, v = -L x + zeta with eta ~ N(0, s_eta^2 I), zeta likewise.
/// Zero variances draw nothing from the stream.
ControlAction control(const Vector& x, const EpisodeState& ep,
                      const ExplorationSpec& expl, RandomStream& rng);

/// det(V_t) >= 2 det(V_{t_k}), evaluated in log space.
bool should_update(double logdet_now, double logdet_at_start);

struct RunConfig {
  GameSpec game;
  std::int64_t T = 50'000;
  double lambda = 1.0;
  double delta = 0.2;
  RegularityMargins margins;
  // Unset variances default to T^{-1/2}.
  std::optional<double> sigma_eta_sq;
  std::optional<double> sigma_zeta_sq;
  // Unset bound defaults to 1.5 ||Theta*||_F.
  std::optional<double> S_theta;
  std::vector<std::uint64_t> seeds{7};
  std::string output_dir = "out";
  // Frobenius-relative size of the initial surrogate's offset from the truth.
  double theta0_perturbation = 0.05;
  double tol_alpha = 1e-3;
  SolverOptions solver;
  double blowup_threshold = 1e6;
  int max_failed_episodes = 5;
  // Identifies the configuration in trace metadata.
  std::string config_hash = "none";

  explicit RunConfig(GameSpec g) : game(std::move(g)) {}

  void validate() const;
  double resolved_S_theta() const;
  ExplorationSpec exploration(std::uint64_t seed) const;
};

struct StepRecord {
  std::int64_t t;
  double cost;
  double regret;
  double normalized_regret;
  double state_norm;
};

struct EpisodeRecord {
  int k;
  std::int64_t t_k;
  double alpha;
  double beta;
  double theta_hat_error;
  double theta_tilde_error;
  double K_error;
  double L_error;
  double margin;
  double rho_cl;
  double min_eig_ratio;  // NaN for the initial episode (no data yet)
  bool failure_flag;
  bool truth_in_confidence;
  bool surrogate_in_confidence;
  double logdet_V;
};

struct RunTrace {
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string code_version;
  double J_star = 0.0;
  double lambda = 1.0;
  int d = 0;
  double final_logdet_V = 0.0;
  double mean_eta_sq = 0.0;   // (1/T) sum ||eta_t||^2
  double mean_zeta_sq = 0.0;  // (1/T) sum ||zeta_t||^2
  bool truth_regular = false;
  std::vector<StepRecord> steps;
  std::vector<EpisodeRecord> episodes;

  /// log2(det(V_T) / lambda^d) + 1.
  double episode_bound() const;
};

std::string code_version();

/// Draws the initial surrogate Theta* + s ||Theta*|| G/||G|| until it passes
/// the regularity test (at most 100 draws).
CertifiedModel initial_model(const RunConfig& cfg, RandomStream& rng);

/// Simulates the certified learning loop on the true plant for cfg.T steps.
RunTrace run(const RunConfig& cfg, std::uint64_t seed);

}  // namespace zslq
