// Command-line driver: `run`, `verify` and `golden` over a JSON config.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 at least one seed
// failed, 4 a verification check failed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "zslq/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRun = 3;
constexpr int kExitVerify = 4;

struct Options {
  std::string config;
  std::string seeds;
  std::string out;
  std::int64_t horizon = 0;
};

zslq::RunConfig resolve(const Options& opts) {
  zslq::RunConfig cfg = zslq::load_config(opts.config);
  if (const char* env = std::getenv("ZSLQ_OUTPUT_DIR"); env && *env) {
    cfg.output_dir = env;
  }
  if (!opts.out.empty()) cfg.output_dir = opts.out;
  if (!opts.seeds.empty()) cfg.seeds = zslq::parse_seed_list(opts.seeds);
  if (opts.horizon > 0) cfg.T = opts.horizon;
  cfg.validate();
  return cfg;
}

int cmd_run(const Options& opts) {
  const zslq::RunConfig cfg = resolve(opts);
  const auto outcomes = zslq::run_experiment(cfg);
  int failed = 0;
  for (const auto& o : outcomes) {
    if (o.trace) {
      const auto& t = *o.trace;
      std::cout << "seed " << o.seed << ": " << t.steps.size() << " steps, "
                << t.episodes.size() << " episodes, final regret "
                << zslq::format_number(t.steps.empty() ? 0.0 : t.steps.back().regret)
                << "\n";
    } else {
      ++failed;
      std::cerr << "seed " << o.seed << " failed: " << o.error << "\n";
    }
  }
  std::cout << "traces written to " << cfg.output_dir << "\n";
  return failed ? kExitRun : 0;
}

int cmd_verify(const Options& opts) {
  const zslq::RunConfig cfg = resolve(opts);
  const zslq::VerifyReport report = zslq::verify(cfg);
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "[pass] " : "[FAIL] ") << c.name << " = "
              << zslq::format_number(c.value) << " (" << c.threshold << ")";
    if (!c.note.empty()) std::cout << "  " << c.note;
    std::cout << "\n";
  }
  std::cout << "report written to "
            << (std::filesystem::path(cfg.output_dir) / "verify_report.csv").string()
            << "\n";
  return report.passed() ? 0 : kExitVerify;
}

int cmd_golden(const Options& opts) {
  const zslq::RunConfig cfg = resolve(opts);
  const std::string text = zslq::golden_values(cfg);
  std::filesystem::create_directories(cfg.output_dir);
  const auto path = std::filesystem::path(cfg.output_dir) / "golden.txt";
  std::ofstream(path, std::ios::binary) << text;
  std::cout << text << "written to " << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified online learning for zero-sum linear-quadratic games"};
  app.require_subcommand(1);
  Options opts;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out,
                    "Output directory (overrides ZSLQ_OUTPUT_DIR and the config)");
    sub->add_option("--horizon-override", opts.horizon, "Replace the horizon T")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* run = app.add_subcommand("run", "Simulate the learning loop per seed");
  add_common(run);
  run->add_option("--seeds", opts.seeds, "Seed list, e.g. 1,2,10-20");
  CLI::App* verify = app.add_subcommand("verify", "Run the numerical verification battery");
  add_common(verify);
  CLI::App* golden = app.add_subcommand("golden", "Recompute golden saddle values");
  add_common(golden);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(opts);
    if (*verify) return cmd_verify(opts);
    if (*golden) return cmd_golden(opts);
  } catch (const zslq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == zslq::ErrorCode::kConfigError ? kExitConfig : kExitRun;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRun;
  }
  return kExitConfig;
}
