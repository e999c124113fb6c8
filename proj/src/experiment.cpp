#include "zslq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace zslq {

namespace {

using json = nlohmann::json;

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kConfigError, "field '" + path + "': " + what);
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& path) {
  if (!obj.is_object()) config_error(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      config_error(join(path, item.key()), "unknown key");
    }
  }
}

const json& require(const json& obj, const std::string& key,
                    const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) config_error(join(path, key), "missing");
  return *it;
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) config_error(path, "expected a number");
  return j.get<double>();
}

std::optional<double> read_optional_number(const json& obj,
                                           const std::string& key,
                                           const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return read_number(*it, join(path, key));
}

Matrix read_matrix(const json& j, const std::string& path) {
  if (j.is_number()) return Matrix::Constant(1, 1, j.get<double>());
  if (!j.is_array() || j.empty()) {
    config_error(path, "expected a number or a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  Matrix M;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.empty()) config_error(row_path, "expected a nonempty row array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      M.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      config_error(row_path, "ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      M(r, c) = read_number(row[static_cast<std::size_t>(c)],
                            row_path + "[" + std::to_string(c) + "]");
    }
  }
  return M;
}

Vector read_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) config_error(path, "expected a nonempty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) =
        read_number(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

json matrix_json(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text,
                                                std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

RunConfig parse_config(const json& root) {
  reject_unknown(root,
                 {"name", "system", "cost", "noise", "x0", "horizon", "lambda",
                  "delta", "margins", "exploration", "S_theta", "seeds",
                  "output_dir", "theta0_perturbation", "tol_alpha", "solver",
                  "blowup_threshold", "max_failed_episodes"},
                 "");

  const json& sys = require(root, "system", "");
  reject_unknown(sys, {"A", "B1", "B2"}, "system");
  const json& cost = require(root, "cost", "");
  reject_unknown(cost, {"Q", "Ru", "Rv"}, "cost");
  const json& noise = require(root, "noise", "");
  reject_unknown(noise, {"sigma_w", "Sigma_w"}, "noise");

  auto build = [](const std::string& path, auto&& fn) {
    try {
      return fn();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kConfigError) throw;
      config_error(path, e.what());
    }
  };

  SystemModel truth = build("system", [&] {
    return SystemModel(read_matrix(require(sys, "A", "system"), "system.A"),
                       read_matrix(require(sys, "B1", "system"), "system.B1"),
                       read_matrix(require(sys, "B2", "system"), "system.B2"));
  });
  const int n = truth.dims().n;
  CostSpec cost_spec = build("cost", [&] {
    return CostSpec(read_matrix(require(cost, "Q", "cost"), "cost.Q"),
                    read_matrix(require(cost, "Ru", "cost"), "cost.Ru"),
                    read_matrix(require(cost, "Rv", "cost"), "cost.Rv"));
  });
  NoiseSpec noise_spec = build("noise", [&] {
    const double sigma =
        read_number(require(noise, "sigma_w", "noise"), "noise.sigma_w");
    auto it = noise.find("Sigma_w");
    if (it == noise.end() || it->is_null()) return NoiseSpec(sigma, n);
    return NoiseSpec(sigma, read_matrix(*it, "noise.Sigma_w"));
  });

  const json& x0 = require(root, "x0", "");
  InitialState init;
  if (x0.is_object()) {
    reject_unknown(x0, {"mean", "scale"}, "x0");
    init = GaussianInitialState{read_vector(require(x0, "mean", "x0"), "x0.mean"),
                                read_number(require(x0, "scale", "x0"), "x0.scale")};
  } else {
    init = FixedInitialState{read_vector(x0, "x0")};
  }

  GameSpec game = build("", [&] {
    return GameSpec(std::move(truth), std::move(cost_spec),
                    std::move(noise_spec), std::move(init));
  });

  RunConfig cfg(std::move(game));
  const json& horizon = require(root, "horizon", "");
  if (!horizon.is_number_integer()) config_error("horizon", "expected an integer");
  cfg.T = horizon.get<std::int64_t>();
  if (cfg.T < 1) config_error("horizon", "must be >= 1");
  cfg.lambda = read_number(require(root, "lambda", ""), "lambda");
  cfg.delta = read_number(require(root, "delta", ""), "delta");

  if (auto it = root.find("margins"); it != root.end()) {
    reject_unknown(*it, {"mu", "gamma"}, "margins");
    cfg.margins.mu = read_optional_number(*it, "mu", "margins").value_or(cfg.margins.mu);
    cfg.margins.gamma =
        read_optional_number(*it, "gamma", "margins").value_or(cfg.margins.gamma);
  }
  if (auto it = root.find("exploration"); it != root.end()) {
    reject_unknown(*it, {"sigma_eta_sq", "sigma_zeta_sq"}, "exploration");
    cfg.sigma_eta_sq = read_optional_number(*it, "sigma_eta_sq", "exploration");
    cfg.sigma_zeta_sq = read_optional_number(*it, "sigma_zeta_sq", "exploration");
  }
  cfg.S_theta = read_optional_number(root, "S_theta", "");
  if (auto it = root.find("seeds"); it != root.end()) {
    if (!it->is_array()) config_error("seeds", "expected an array of integers");
    cfg.seeds.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& s = (*it)[i];
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
        config_error("seeds[" + std::to_string(i) + "]", "expected a non-negative integer");
      }
      cfg.seeds.push_back(s.get<std::uint64_t>());
    }
  }
  if (auto it = root.find("output_dir"); it != root.end()) {
    if (!it->is_string()) config_error("output_dir", "expected a string");
    cfg.output_dir = it->get<std::string>();
  }
  cfg.theta0_perturbation = read_optional_number(root, "theta0_perturbation", "")
                                .value_or(cfg.theta0_perturbation);
  cfg.tol_alpha = read_optional_number(root, "tol_alpha", "").value_or(cfg.tol_alpha);
  if (auto it = root.find("solver"); it != root.end()) {
    reject_unknown(*it, {"tol", "max_iter"}, "solver");
    cfg.solver.tol = read_optional_number(*it, "tol", "solver").value_or(cfg.solver.tol);
    if (auto m = it->find("max_iter"); m != it->end()) {
      if (!m->is_number_integer()) config_error("solver.max_iter", "expected an integer");
      cfg.solver.max_iter = m->get<int>();
    }
  }
  cfg.blowup_threshold =
      read_optional_number(root, "blowup_threshold", "").value_or(cfg.blowup_threshold);
  if (auto it = root.find("max_failed_episodes"); it != root.end()) {
    if (!it->is_number_integer()) config_error("max_failed_episodes", "expected an integer");
    cfg.max_failed_episodes = it->get<int>();
  }

  cfg.validate();
  return cfg;
}

// Canonical form of everything that determines a single-seed run.
json canonical_json(const RunConfig& cfg) {
  const GameSpec& g = cfg.game;
  json j;
  j["system"] = {{"A", matrix_json(g.truth.A())},
                 {"B1", matrix_json(g.truth.B1())},
                 {"B2", matrix_json(g.truth.B2())}};
  j["cost"] = {{"Q", matrix_json(g.cost.Q())},
               {"Ru", matrix_json(g.cost.Ru())},
               {"Rv", matrix_json(g.cost.Rv())}};
  j["noise"] = {{"sigma_w", g.noise.sigma_w()},
                {"Sigma_w", matrix_json(g.noise.Sigma_w())}};
  std::visit(
      [&](const auto& init) {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, FixedInitialState>) {
          j["x0"] = vector_json(init.x0);
        } else {
          j["x0"] = {{"mean", vector_json(init.mean)}, {"scale", init.scale}};
        }
      },
      g.x0);
  j["horizon"] = cfg.T;
  j["lambda"] = cfg.lambda;
  j["delta"] = cfg.delta;
  j["margins"] = {{"mu", cfg.margins.mu}, {"gamma", cfg.margins.gamma}};
  const ExplorationSpec expl = cfg.exploration(0);
  j["exploration"] = {{"sigma_eta_sq", expl.sigma_eta_sq},
                      {"sigma_zeta_sq", expl.sigma_zeta_sq}};
  j["S_theta"] = cfg.resolved_S_theta();
  j["theta0_perturbation"] = cfg.theta0_perturbation;
  j["tol_alpha"] = cfg.tol_alpha;
  j["solver"] = {{"tol", cfg.solver.tol}, {"max_iter", cfg.solver.max_iter}};
  j["blowup_threshold"] = cfg.blowup_threshold;
  j["max_failed_episodes"] = cfg.max_failed_episodes;
  return j;
}

std::string fingerprint(const RunConfig& cfg) {
  const std::string text = canonical_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

}  // namespace

RunConfig reference_config() {
  Matrix A(3, 3);
  A << 0.85, 0.10, 0.10,
       0.10, 0.62, 0.08,
       0.10, 0.06, 0.72;
  Matrix B1(3, 1);
  B1 << 0.80, 0.25, 0.12;
  Matrix B2(3, 1);
  B2 << 0.10, 0.08, 0.15;
  Vector x0(3);
  x0 << 1.2, -0.90, 0.70;
  GameSpec game(SystemModel(A, B1, B2),
                CostSpec(Matrix::Identity(3, 3), Matrix::Constant(1, 1, 1.1),
                         Matrix::Constant(1, 1, 2.5)),
                NoiseSpec(0.01, 3), FixedInitialState{x0});
  RunConfig cfg(std::move(game));
  cfg.T = 50'000;
  cfg.lambda = 1.0;
  cfg.delta = 0.2;
  cfg.margins = RegularityMargins(0.05, 0.02);
  cfg.config_hash = fingerprint(cfg);
  return cfg;
}

RunConfig load_config_text(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream os;
    os << "parse error at line " << line << ", column " << col << ": "
       << e.what();
    throw Error(ErrorCode::kConfigError, os.str());
  }
  RunConfig cfg = parse_config(root);
  cfg.config_hash = fingerprint(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kConfigError, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config_text(buf.str());
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  auto parse_u64 = [&](std::string_view s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos) {
      throw Error(ErrorCode::kConfigError,
                  "invalid seed '" + std::string(s) + "'");
    }
    return static_cast<std::uint64_t>(std::stoull(std::string(s)));
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item = text.substr(start, comma - start);
    if (const auto dash = item.find('-'); dash != std::string_view::npos) {
      const auto lo = parse_u64(item.substr(0, dash));
      const auto hi = parse_u64(item.substr(dash + 1));
      if (hi < lo) {
        throw Error(ErrorCode::kConfigError,
                    "empty seed range '" + std::string(item) + "'");
      }
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(parse_u64(item));
    }
    start = comma + 1;
  }
  return seeds;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string steps_csv(const RunTrace& trace) {
  std::string out;
  out.reserve(trace.steps.size() * 96 + 64);
  out += kStepsHeader;
  out += '\n';
  for (const StepRecord& s : trace.steps) {
    out += std::to_string(s.t);
    for (double v : {s.cost, s.regret, s.normalized_regret, s.state_norm}) {
      out += ',';
      out += format_number(v);
    }
    out += '\n';
  }
  return out;
}

std::string episodes_csv(const RunTrace& trace) {
  std::ostringstream os;
  os << kEpisodesHeader << '\n';
  for (const EpisodeRecord& e : trace.episodes) {
    os << e.k << ',' << e.t_k;
    for (double v : {e.alpha, e.beta, e.theta_hat_error, e.theta_tilde_error,
                     e.K_error, e.L_error, e.margin, e.rho_cl, e.min_eig_ratio}) {
      os << ',' << format_number(v);
    }
    os << ',' << int(e.failure_flag) << ',' << int(e.truth_in_confidence) << ','
       << int(e.surrogate_in_confidence) << ',' << format_number(e.logdet_V)
       << '\n';
  }
  return os.str();
}

std::vector<SeedOutcome> run_experiment(const RunConfig& input) {
  RunConfig cfg = input;
  cfg.validate();
  cfg.config_hash = fingerprint(cfg);
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);

  std::vector<SeedOutcome> outcomes(cfg.seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.seeds.size(); i = next++) {
      SeedOutcome& out = outcomes[i];
      out.seed = cfg.seeds[i];
      try {
        out.trace = run(cfg, out.seed);
        const std::string tag = std::to_string(out.seed);
        write_file(dir / ("steps_" + tag + ".csv"), steps_csv(*out.trace));
        write_file(dir / ("episodes_" + tag + ".csv"), episodes_csv(*out.trace));
      } catch (const std::exception& e) {
        out.trace.reset();
        out.error = e.what();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(
      std::thread::hardware_concurrency(), 1, std::max<std::size_t>(cfg.seeds.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::ostringstream m;
  m << "schema = " << kTraceSchema << '\n'
    << "code_version = " << code_version() << '\n'
    << "config_hash = " << cfg.config_hash << '\n'
    << "rng = " << RandomStream::kEngineName << '\n'
    << "horizon = " << cfg.T << '\n'
    << "seeds = ";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    m << (i ? "," : "") << cfg.seeds[i];
  }
  m << '\n';
  for (const SeedOutcome& o : outcomes) {
    const std::string key = "seed." + std::to_string(o.seed) + ".";
    if (!o.trace) {
      m << key << "status = failed\n" << key << "error = " << o.error << '\n';
      continue;
    }
    const RunTrace& t = *o.trace;
    m << key << "status = ok\n"
      << key << "steps_file = steps_" << o.seed << ".csv\n"
      << key << "episodes_file = episodes_" << o.seed << ".csv\n"
      << key << "episodes = " << t.episodes.size() << '\n'
      << key << "episode_bound = " << format_number(t.episode_bound()) << '\n'
      << key << "J_star = " << format_number(t.J_star) << '\n'
      << key << "final_regret = "
      << format_number(t.steps.empty() ? 0.0 : t.steps.back().regret) << '\n';
  }
  write_file(dir / "manifest.txt", m.str());
  return outcomes;
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::to_csv() const {
  std::ostringstream os;
  os << "check,value,threshold,pass,note\n";
  for (const CheckResult& c : checks) {
    os << c.name << ',' << format_number(c.value) << ',' << c.threshold << ','
       << (c.passed ? "pass" : "FAIL") << ',' << c.note << '\n';
  }
  return os.str();
}

VerifyReport verify(const RunConfig& cfg) {
  VerifyReport report;
  auto add = [&](std::string name, double value, std::string threshold,
                 bool passed, std::string note = {}) {
    report.checks.push_back(CheckResult{std::move(name), value,
                                        std::move(threshold), passed,
                                        std::move(note)});
  };
  const SystemModel& m = cfg.game.truth;
  const CostSpec& c = cfg.game.cost;
  const NoiseSpec& noise = cfg.game.noise;
  const ThetaMatrix theta = concat_model(m);
  const Dims dims = m.dims();
  const bool one_player = m.B2().cwiseAbs().maxCoeff() == 0.0;

  auto finish = [&] {
    std::filesystem::create_directories(cfg.output_dir);
    write_file(std::filesystem::path(cfg.output_dir) / "verify_report.csv",
               report.to_csv());
    return report;
  };

  const RegularityResult reg = is_regular(theta, c, cfg.margins, tight_solver_options());
  if (!reg.regular) {
    double rho = std::numeric_limits<double>::quiet_NaN();
    std::string note = "true parameter fails the regularity test";
    try {
      const GareSolution s = solve_gare(m, c, tight_solver_options());
      rho = s.rho_cl();
      std::ostringstream os;
      os << "true parameter fails the regularity test: rho(A_cl) = " << rho
         << ", margin = " << s.margin() << ", need rho <= "
         << 1.0 - cfg.margins.gamma << " and margin >= " << cfg.margins.mu;
      note = os.str();
    } catch (const Error& e) {
      note += std::string(": ") + e.what();
    }
    add("regularity_precheck", rho, "regular", false, note);
    return finish();
  }
  const GareSolution& sol = *reg.solution;
  add("regularity_precheck", sol.rho_cl(),
      "rho <= " + format_number(1.0 - cfg.margins.gamma), true,
      "margin " + format_number(sol.margin()));

  const auto [s1, s2] = stationarity_check(sol, m, c);
  add("stationarity_minimizer", s1, "<= 1e-8", s1 <= 1e-8);
  add("stationarity_maximizer", s2, "<= 1e-8", s2 <= 1e-8,
      one_player ? "one-player reduction: L* = 0" : "");

  {
    Matrix X = random_unit_direction(dims.n, dims.n, 11);
    X = 0.5 * (X + X.transpose());
    X /= X.norm();
    const double disc = envelope_check(sol, m, c, X, 1e-6);
    add("envelope_eps_1e-6", disc, "<= 1e-4", disc <= 1e-4);
    const std::vector<double> eps{1e-4, 1e-5, 1e-6, 1e-7};
    std::vector<double> discs;
    for (double e : eps) discs.push_back(envelope_check(sol, m, c, X, e));
    const double slope = loglog_slope(eps, discs);
    add("envelope_order", slope, "in [0.8, 1.2]", slope >= 0.8 && slope <= 1.2);
  }

  {
    const PerturbationReport pr =
        lipschitz_probe(theta, c, 20, {1e-4, 1e-5, 1e-6}, 1);
    add("lipschitz_failed_directions", pr.failed_directions(), "== 0",
        pr.failed_directions() == 0);
    auto slope_check = [&](const char* name, std::pair<double, double> r,
                           double constant) {
      const bool ok = r.first >= 0.9 && r.second <= 1.1;
      const double worst =
          std::abs(r.first - 1.0) > std::abs(r.second - 1.0) ? r.first : r.second;
      add(name, worst, "in [0.9, 1.1]", ok, "C = " + format_number(constant));
    };
    slope_check("lipschitz_slope_P", pr.slope_range_P(), pr.C_P);
    slope_check("lipschitz_slope_K", pr.slope_range_K(), pr.C_K);
    if (pr.L_trivial) {
      add("lipschitz_slope_L", 0.0, "trivial", true,
          "one-player reduction: L stays 0");
    } else {
      slope_check("lipschitz_slope_L", pr.slope_range_L(), pr.C_L);
    }
  }

  {
    const std::vector<double> scales{1e-3, 3e-4, 1e-4, 3e-5, 1e-5};
    const CostGapReport joint = cost_gap_fit(m, c, noise, scales);
    add("cost_gap_slope", joint.slope, "in [1.9, 2.1]",
        joint.slope >= 1.9 && joint.slope <= 2.1,
        "discarded " + std::to_string(joint.discarded));
    const CostGapReport minimizer =
        cost_gap_fit(m, c, noise, scales, GainPerturbation::kMinimizerOnly);
    const double min_gap = *std::min_element(minimizer.mean_gap.begin(),
                                             minimizer.mean_gap.end());
    add("cost_gap_minimizer_sign", min_gap, ">= -1e-12", min_gap >= -1e-12);
    if (one_player) {
      add("cost_gap_maximizer_sign", 0.0, "trivial", true,
          "one-player reduction: L does not act on the state");
    } else {
      const CostGapReport maximizer =
          cost_gap_fit(m, c, noise, scales, GainPerturbation::kMaximizerOnly);
      const double max_gap = *std::max_element(maximizer.mean_gap.begin(),
                                               maximizer.mean_gap.end());
      add("cost_gap_maximizer_sign", max_gap, "<= 1e-12", max_gap <= 1e-12);
    }
  }

  {
    const Matrix Acl = closed_loop(m, sol.K(), sol.L());
    const double rho = spectral_radius(Acl);
    const int N = static_cast<int>(std::ceil(std::log(1e-12) / std::log(rho + 0.01)));
    const Matrix W = c.Q() + sol.K().transpose() * c.Ru() * sol.K() -
                     sol.L().transpose() * c.Rv() * sol.L();
    const double series = lyapunov_series_check(Acl, W, N);
    add("lyapunov_series", series, "<= 1e-9", series <= 1e-9,
        "N = " + std::to_string(N));
    const double consistency = (solve_lyapunov(Acl, W) - sol.P()).norm();
    add("lyapunov_saddle_consistency", consistency, "<= 1e-8",
        consistency <= 1e-8);
  }
  return finish();
}

std::string golden_values(const RunConfig& cfg) {
  const SystemModel& m = cfg.game.truth;
  const CostSpec& c = cfg.game.cost;
  const SolverOptions opts = tight_solver_options();
  const GareSolution sol = solve_gare(m, c, opts);
  const auto [s1, s2] = stationarity_check(sol, m, c);
  const double J = benchmark_cost(sol, cfg.game.noise);
  const double J_closed = closed_loop_cost(sol.K(), sol.L(), m, c, cfg.game.noise);

  std::ostringstream os;
  os << "# Saddle-point solution of the true game.\n"
     << "# Fixed-point Riccati iteration from P0 = Q, tol = "
     << format_number(opts.tol) << ", " << sol.iterations() << " iterations.\n"
     << "# Cross-checks: residual ||F(P)||_F, stationarity residuals, and\n"
     << "# J* = tr(P Sigma_w) against the Lyapunov closed-loop cost.\n"
     << "config_hash = " << fingerprint(cfg) << '\n'
     << "code_version = " << code_version() << '\n';
  auto put = [&](const std::string& name, const Matrix& M) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      for (Eigen::Index j = 0; j < M.cols(); ++j) {
        os << name << '[' << i << "][" << j << "] = " << format_number(M(i, j))
           << '\n';
      }
    }
  };
  put("P", sol.P());
  put("K", sol.K());
  put("L", sol.L());
  os << "J_star = " << format_number(J) << '\n'
     << "J_closed_loop = " << format_number(J_closed) << '\n'
     << "margin = " << format_number(sol.margin()) << '\n'
     << "rho_cl = " << format_number(sol.rho_cl()) << '\n'
     << "residual = " << format_number(sol.residual()) << '\n'
     << "stationarity_minimizer = " << format_number(s1) << '\n'
     << "stationarity_maximizer = " << format_number(s2) << '\n';
  return os.str();
}

}  // namespace zslq
