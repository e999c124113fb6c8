#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zslq/analysis.hpp"
#include "zslq/controller.hpp"

namespace zslq {

inline constexpr std::string_view kTraceSchema = "zslq-trace/1";
inline constexpr std::string_view kStepsHeader =
    "t,cost,regret,normalized_regret,state_norm";
inline constexpr std::string_view kEpisodesHeader =
    "k,t_k,alpha,beta,theta_hat_error,theta_tilde_error,K_error,L_error,"
    "margin,rho_cl,min_eig_ratio,failure_flag,truth_in_confidence,"
    "surrogate_in_confidence,logdet_V";

/// The three-state, scalar-input benchmark game (Q = I, Ru = 1.1, Rv = 2.5,
/// sigma_w = 0.01, x0 = [1.2, -0.9, 0.7]) with its default run settings.
RunConfig reference_config();

/// Parses and validates a JSON run configuration. Unknown keys are rejected.
/// Errors carry the line/column (parse errors) or the field path.
RunConfig load_config(const std::filesystem::path& path);
RunConfig load_config_text(std::string_view text);

/// "1,2,5-8" -> {1, 2, 5, 6, 7, 8}.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// Fixed 17-significant-digit rendering used by every trace file.
std::string format_number(double value);

std::string steps_csv(const RunTrace& trace);
std::string episodes_csv(const RunTrace& trace);

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::optional<RunTrace> trace;
  std::string error;  // empty on success
};

/// Runs every configured seed (concurrently) and writes steps_<seed>.csv,
/// episodes_<seed>.csv and manifest.txt into cfg.output_dir. A failing seed
/// is recorded in the manifest; siblings still run.
std::vector<SeedOutcome> run_experiment(const RunConfig& cfg);

struct CheckResult {
  std::string name;
  double value = 0.0;
  std::string threshold;
  bool passed = false;
  std::string note;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  std::string to_csv() const;
};

/// Runs the analysis battery on the configured true game and writes
/// verify_report.csv into cfg.output_dir.
VerifyReport verify(const RunConfig& cfg);

/// Recomputes the true game's saddle solution and renders it with provenance
/// notes, one `key = value` per line.
std::string golden_values(const RunConfig& cfg);

}  // namespace zslq
