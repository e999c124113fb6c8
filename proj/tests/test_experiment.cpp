#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "zslq/experiment.hpp"

namespace zslq {
namespace {

namespace fs = std::filesystem;

const fs::path kSource = ZSLQ_SOURCE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("zslq_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string shipped_config_text() {
  return slurp(kSource / "configs" / "three_state_game.json");
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  if (pos != std::string::npos) text.replace(pos, from.size(), to);
  return text;
}

void expect_config_error(const std::string& text, const std::string& fragment) {
  try {
    load_config_text(text);
    ADD_FAILURE() << "config accepted; expected error mentioning " << fragment;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError);
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(LoadConfig, ShippedConfigIsTheReferenceScenario) {
  const RunConfig cfg = load_config(kSource / "configs" / "three_state_game.json");
  const RunConfig ref = reference_config();
  EXPECT_EQ(cfg.game.truth.A(), ref.game.truth.A());
  EXPECT_EQ(cfg.game.truth.B1(), ref.game.truth.B1());
  EXPECT_EQ(cfg.game.truth.B2(), ref.game.truth.B2());
  EXPECT_EQ(cfg.game.cost.Q(), Matrix::Identity(3, 3));
  EXPECT_DOUBLE_EQ(cfg.game.cost.Ru()(0, 0), 1.1);
  EXPECT_DOUBLE_EQ(cfg.game.cost.Rv()(0, 0), 2.5);
  EXPECT_DOUBLE_EQ(cfg.game.noise.sigma_w(), 0.01);
  EXPECT_EQ(cfg.T, 50'000);
  EXPECT_DOUBLE_EQ(cfg.lambda, 1.0);
  EXPECT_DOUBLE_EQ(cfg.delta, 0.2);
  ASSERT_TRUE(std::holds_alternative<FixedInitialState>(cfg.game.x0));
  Vector x0(3);
  x0 << 1.2, -0.9, 0.7;
  EXPECT_EQ(std::get<FixedInitialState>(cfg.game.x0).x0, x0);
  EXPECT_DOUBLE_EQ(cfg.margins.mu, 0.05);
  EXPECT_DOUBLE_EQ(cfg.margins.gamma, 0.02);
  EXPECT_FALSE(cfg.sigma_eta_sq.has_value());
  EXPECT_FALSE(cfg.S_theta.has_value());
  EXPECT_EQ(cfg.seeds, std::vector<std::uint64_t>{7});
}

TEST(LoadConfig, ValidationErrors) {
  const std::string text = shipped_config_text();
  expect_config_error(replace(text, "\"delta\": 0.2", "\"delta\": 1.5"), "delta");
  expect_config_error(
      replace(text, ",\n    \"B2\": [[0.10], [0.08], [0.15]]", ""), "system.B2");
  expect_config_error(replace(text, "\"lambda\": 1.0", "\"lambda\": 1.0, \"lamda\": 2"),
                      "lamda");
  expect_config_error(replace(text, "\"horizon\": 50000", "\"horizon\": 0"), "horizon");
  expect_config_error(replace(text, "\"horizon\": 50000", "\"horizon\": 2.5"), "horizon");
  expect_config_error(replace(text, "\"Rv\": [[2.5]]", "\"Rv\": [[-2.5]]"), "cost");
  expect_config_error(replace(text, "\"B1\": [[0.80], [0.25], [0.12]]",
                              "\"B1\": [[0.80], [0.25]]"),
                      "system");
}

TEST(LoadConfig, ParseErrorsCarryPosition) {
  const std::string text = replace(shipped_config_text(), "\"lambda\": 1.0,", "\"lambda\": 1.0,,");
  try {
    load_config_text(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 18"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_config(kSource / "configs" / "does_not_exist.json"), Error);
}

TEST(LoadConfig, GaussianInitialState) {
  const RunConfig cfg = load_config_text(replace(
      shipped_config_text(), "\"x0\": [1.2, -0.90, 0.70]",
      "\"x0\": {\"mean\": [0, 0, 0], \"scale\": 0.5}"));
  ASSERT_TRUE(std::holds_alternative<GaussianInitialState>(cfg.game.x0));
  EXPECT_DOUBLE_EQ(std::get<GaussianInitialState>(cfg.game.x0).scale, 0.5);
}

TEST(ParseSeedList, Examples) {
  EXPECT_EQ(parse_seed_list("1,2,5-8"),
            (std::vector<std::uint64_t>{1, 2, 5, 6, 7, 8}));
  EXPECT_EQ(parse_seed_list("42"), std::vector<std::uint64_t>{42});
  EXPECT_THROW(parse_seed_list(""), Error);
  EXPECT_THROW(parse_seed_list("3-1"), Error);
  EXPECT_THROW(parse_seed_list("a"), Error);
}

TEST(FormatNumber, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 1e300}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(RunExperiment, WritesTracesWithinEpisodeBound) {
  RunConfig cfg = reference_config();
  cfg.T = 1000;
  cfg.seeds = {7};
  cfg.output_dir = scratch_dir("single").string();
  const auto outcomes = run_experiment(cfg);
  ASSERT_EQ(outcomes.size(), 1u);
  ASSERT_TRUE(outcomes[0].trace) << outcomes[0].error;
  const fs::path dir = cfg.output_dir;
  const std::string steps = slurp(dir / "steps_7.csv");
  const std::string episodes = slurp(dir / "episodes_7.csv");
  EXPECT_EQ(line_count(steps), 1001u);
  EXPECT_EQ(steps.substr(0, steps.find('\n')), kStepsHeader);
  EXPECT_EQ(episodes.substr(0, episodes.find('\n')), kEpisodesHeader);
  const RunTrace& t = *outcomes[0].trace;
  EXPECT_EQ(line_count(episodes), t.episodes.size() + 1);
  const double bound = (t.final_logdet_V - 5 * std::log(cfg.lambda)) / std::log(2.0) + 1;
  EXPECT_LE(static_cast<double>(t.episodes.size()), bound);
  const std::string manifest = slurp(dir / "manifest.txt");
  EXPECT_NE(manifest.find("schema = zslq-trace/1"), std::string::npos);
  EXPECT_NE(manifest.find("seed.7.status = ok"), std::string::npos);
  fs::remove_all(dir);
}

TEST(RunExperiment, RerunIsByteIdenticalAndSeedsDiffer) {
  RunConfig cfg = reference_config();
  cfg.T = 800;
  cfg.seeds = {3, 4};
  cfg.output_dir = scratch_dir("first").string();
  run_experiment(cfg);
  RunConfig again = cfg;
  again.output_dir = scratch_dir("second").string();
  run_experiment(again);
  for (const char* name : {"steps_3.csv", "episodes_3.csv", "steps_4.csv",
                           "episodes_4.csv", "manifest.txt"}) {
    EXPECT_EQ(slurp(fs::path(cfg.output_dir) / name),
              slurp(fs::path(again.output_dir) / name))
        << name;
  }
  EXPECT_NE(slurp(fs::path(cfg.output_dir) / "steps_3.csv"),
            slurp(fs::path(cfg.output_dir) / "steps_4.csv"));
  fs::remove_all(cfg.output_dir);
  fs::remove_all(again.output_dir);
}

TEST(RunExperiment, MatchesCommittedGoldenTrace) {
  RunConfig cfg = load_config(kSource / "configs" / "three_state_game.json");
  cfg.T = 50;
  cfg.seeds = {7};
  cfg.output_dir = scratch_dir("golden").string();
  run_experiment(cfg);
  const fs::path golden = kSource / "tests" / "golden";
  EXPECT_EQ(slurp(fs::path(cfg.output_dir) / "steps_7.csv"), slurp(golden / "steps_7.csv"));
  EXPECT_EQ(slurp(fs::path(cfg.output_dir) / "episodes_7.csv"),
            slurp(golden / "episodes_7.csv"));
  fs::remove_all(cfg.output_dir);
}

TEST(Verify, ReferenceScenarioPasses) {
  RunConfig cfg = reference_config();
  cfg.output_dir = scratch_dir("verify").string();
  const VerifyReport report = verify(cfg);
  for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.note;
  EXPECT_TRUE(report.passed());
  EXPECT_TRUE(fs::exists(fs::path(cfg.output_dir) / "verify_report.csv"));
  fs::remove_all(cfg.output_dir);
}

TEST(Verify, StabilityMarginTooLargeFailsPrecheck) {
  RunConfig cfg = reference_config();
  cfg.margins = RegularityMargins(0.05, 0.5);
  cfg.output_dir = scratch_dir("verify_gamma").string();
  const VerifyReport report = verify(cfg);
  EXPECT_FALSE(report.passed());
  ASSERT_FALSE(report.checks.empty());
  EXPECT_EQ(report.checks[0].name, "regularity_precheck");
  EXPECT_FALSE(report.checks[0].passed);
  EXPECT_FALSE(report.checks[0].note.empty());
  fs::remove_all(cfg.output_dir);
}

TEST(Verify, OnePlayerModeReportsTrivialL) {
  const RunConfig ref = reference_config();
  RunConfig cfg(GameSpec(SystemModel(ref.game.truth.A(), ref.game.truth.B1(),
                                     Matrix::Zero(3, 1)),
                         ref.game.cost, ref.game.noise, ref.game.x0));
  cfg.output_dir = scratch_dir("verify_lqr").string();
  const VerifyReport report = verify(cfg);
  EXPECT_TRUE(report.passed()) << report.to_csv();
  EXPECT_NE(report.to_csv().find("trivial"), std::string::npos);
  fs::remove_all(cfg.output_dir);
}

TEST(GoldenValues, ContainsSaddleQuantities) {
  const std::string text = golden_values(reference_config());
  for (const char* key : {"P[0][0] =", "K[0][0] =", "L[0][2] =", "J_star =", "rho_cl ="}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

}  // namespace
}  // namespace zslq
