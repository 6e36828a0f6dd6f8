// Command-line harness: seeded game generation, exact solvers, drift audits,
// chain diagnostics, and learner runs, all emitting manifests plus CSVs that
// are byte-identical across reruns with the same configuration and seed.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "zsg/csv.hpp"
#include "zsg/dynamics.hpp"
#include "zsg/envelope.hpp"
#include "zsg/game.hpp"
#include "zsg/game_io.hpp"
#include "zsg/learner.hpp"
#include "zsg/matrix_game.hpp"
#include "zsg/oracles.hpp"

namespace {

using namespace zsg;

// Output directory resolution: explicit --outdir wins, then the environment
// override, then the working directory.
std::string resolve_outdir(const CLI::App* sub, const std::string& flag_value) {
  if (sub->count("--outdir") > 0) return flag_value;
  if (const char* env = std::getenv("ZSG_OUTPUT_ROOT"); env && *env) return env;
  return ".";
}

std::string join_out(const std::string& dir, const std::string& name) {
  if (name.find('/') != std::string::npos) return name;
  if (dir != ".") std::filesystem::create_directories(dir);
  return dir + "/" + name;
}

// FNV-1a over the sorted key=value pairs, so the hash does not depend on the
// order configuration arrived in.
std::string config_hash(const std::map<std::string, std::string>& config) {
  std::uint64_t h = 1469598103934665603ull;
  auto eat = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [k, v] : config) {
    eat(k);
    eat("=");
    eat(v);
    eat(";");
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Manifests are deterministic by default; wall-clock stamps are opt-in via
// ZSG_MANIFEST_CLOCK because they would break byte-identical reruns.
std::string timestamp_or_dash() {
  if (const char* env = std::getenv("ZSG_MANIFEST_CLOCK"); env && *env) {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }
  return "-";
}

void finish_manifest(const std::string& path, const std::string& command,
                     const std::map<std::string, std::string>& config,
                     std::vector<std::pair<std::string, std::string>> extra,
                     const std::vector<std::string>& outputs) {
  std::vector<std::pair<std::string, std::string>> echo;
  echo.emplace_back("artifact_version", "1");
  echo.emplace_back("config_hash", config_hash(config));
  echo.emplace_back("start_time", timestamp_or_dash());
  for (const auto& [k, v] : config) echo.emplace_back(k, v);
  for (auto& p : extra) echo.push_back(std::move(p));
  echo.emplace_back("end_time", timestamp_or_dash());
  write_manifest(path, command, echo, outputs);
}

Vec vec_from(const std::vector<double>& v) {
  Vec out(long(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out[long(i)] = v[i];
  return out;
}

// ---------------------------------------------------------------- gen ----

struct GenArgs {
  int states = 2;
  std::vector<int> actions{2, 2};
  int branching = 0; // 0 means min(2, states)
  double discount = 0.9;
  unsigned long long seed = 0;
  std::string out = "random.game";
  std::string outdir = ".";
};

void run_gen(const CLI::App* sub, const GenArgs& a) {
  int branching = a.branching > 0 ? a.branching : std::min(2, a.states);
  Rng rng(a.seed);
  StochasticGame game =
      random_game(rng, a.states, a.actions[0], a.actions[1], branching, a.discount);

  std::string dir = resolve_outdir(sub, a.outdir);
  std::string game_path = join_out(dir, a.out);
  save_game(game, game_path);

  std::map<std::string, std::string> cfg{
      {"states", std::to_string(a.states)},
      {"actions1", std::to_string(a.actions[0])},
      {"actions2", std::to_string(a.actions[1])},
      {"branching", std::to_string(branching)},
      {"discount", format_g17(a.discount)},
      {"seed", std::to_string(a.seed)},
  };
  finish_manifest(game_path + ".manifest", "gen", cfg, {}, {game_path});
  std::cout << "wrote " << game_path << "\n";
}

// ----------------------------------------------------------------- vi ----

struct ViArgs {
  std::string game_file;
  double tol = 1e-8;
  std::string prefix = "vi";
  std::string outdir = ".";
};

void run_vi(const CLI::App* sub, const ViArgs& a) {
  StochasticGame game = load_game(a.game_file);
  ValueIterationResult r1 = minimax_value_iteration(game, 1, a.tol);
  ValueIterationResult r2 = minimax_value_iteration(game, 2, a.tol);

  std::string dir = resolve_outdir(sub, a.outdir);
  std::string values_path = join_out(dir, a.prefix + "_values.csv");
  std::string iters_path = join_out(dir, a.prefix + "_iterations.csv");

  std::vector<std::vector<double>> values;
  for (int s = 0; s < game.num_states; ++s)
    values.push_back({double(s), r1.v[s], r2.v[s], r1.v[s] + r2.v[s]});
  emit_csv(values_path, {"s", "v1", "v2", "v_sum"}, values);

  std::vector<std::vector<double>> iters;
  for (size_t t = 0; t < r1.step_norms.size(); ++t)
    iters.push_back({1.0, double(t + 1), r1.step_norms[t]});
  for (size_t t = 0; t < r2.step_norms.size(); ++t)
    iters.push_back({2.0, double(t + 1), r2.step_norms[t]});
  emit_csv(iters_path, {"player", "t", "step_norm"}, iters);

  std::map<std::string, std::string> cfg{
      {"game", a.game_file},
      {"tol", format_g17(a.tol)},
  };
  std::vector<std::pair<std::string, std::string>> extra{
      {"iterations_player1", std::to_string(r1.iterations)},
      {"iterations_player2", std::to_string(r2.iterations)},
      {"duality_defect", format_g17((r1.v + r2.v).lpNorm<Eigen::Infinity>())},
  };
  std::string manifest = join_out(dir, a.prefix + "_manifest.txt");
  finish_manifest(manifest, "vi", cfg, extra, {values_path, iters_path});
  std::cout << "v* computed in " << r1.iterations << "/" << r2.iterations
            << " iterations, duality defect "
            << format_g17((r1.v + r2.v).lpNorm<Eigen::Infinity>()) << "\n";
}

// ---------------------------------------------------------------- gap ----

struct GapArgs {
  std::string game_file;
  std::string policy_file;
  double tol = 1e-10;
  std::vector<double> rho;
  std::string prefix = "gap";
  std::string outdir = ".";
};

void run_gap(const CLI::App* sub, const GapArgs& a) {
  StochasticGame game = load_game(a.game_file);
  JointPolicy policy = load_policy(a.policy_file);
  if (policy.pi1.rows() != game.num_states || policy.pi1.cols() != game.num_actions1 ||
      policy.pi2.rows() != game.num_states || policy.pi2.cols() != game.num_actions2)
    throw std::invalid_argument("gap: policy shape does not match the game");

  Vec rho = a.rho.empty() ? Vec() : vec_from(a.rho);
  NashGapResult r = nash_gap(game, policy, rho, a.tol);

  std::string dir = resolve_outdir(sub, a.outdir);
  std::string values_path = join_out(dir, a.prefix + "_values.csv");
  std::vector<std::vector<double>> rows;
  for (int s = 0; s < game.num_states; ++s)
    rows.push_back({double(s), r.br1[s], r.v1[s], r.br2[s], r.v2[s]});
  emit_csv(values_path, {"s", "br1", "v1", "br2", "v2"}, rows);

  std::map<std::string, std::string> cfg{
      {"game", a.game_file},
      {"policy", a.policy_file},
      {"tol", format_g17(a.tol)},
      {"rho", a.rho.empty() ? "uniform" : "custom"},
  };
  std::string manifest = join_out(dir, a.prefix + "_manifest.txt");
  finish_manifest(manifest, "gap", cfg, {{"nash_gap", format_g17(r.gap)}},
                  {values_path});
  std::cout << "nash_gap " << format_g17(r.gap) << "\n";
}

// -------------------------------------------------------------- drift ----

struct DriftArgs {
  int trials = 50;
  int size = 3;
  double tau = 0.5;
  double beta = 0.01;
  long steps = 500;
  double noise = 0.0;
  double x0_scale = 1.0;
  double tolerance = 1e-8;
  unsigned long long seed = 0;
  std::string prefix = "drift";
  std::string outdir = ".";
};

void run_drift(const CLI::App* sub, const DriftArgs& a) {
  if (a.trials < 1 || a.size < 1 || a.steps < 1)
    throw std::invalid_argument("drift: trials, size, and steps must be positive");

  std::string dir = resolve_outdir(sub, a.outdir);
  Rng rng(a.seed);
  std::normal_distribution<double> start(0.0, a.x0_scale);
  EnvelopeConfig env = EnvelopeConfig::with_default_mu(a.tau);

  std::vector<std::string> outputs;
  std::vector<std::vector<double>> summary;
  int satisfied = 0;
  double global_min_slack = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < a.trials; ++trial) {
    MatrixGamePair pair = random_zero_sum_pair(rng, a.size, a.size);
    Vec x1(a.size), x2(a.size);
    for (int i = 0; i < a.size; ++i) x1[i] = start(rng);
    for (int i = 0; i < a.size; ++i) x2[i] = start(rng);
    ParamTrajectory traj =
        simulate_param_dynamics(pair, x1, x2, a.tau, a.beta, a.steps, a.noise, rng);
    DriftAudit audit = drift_check(traj, pair, env, a.beta, a.tolerance);

    std::vector<std::vector<double>> rows;
    for (const DriftRow& row : audit.rows)
      rows.push_back({double(row.k), row.v_k, row.v_next, row.bound, row.slack,
                      row.noise_x1_norm, row.noise_x2_norm});
    std::string path = join_out(dir, a.prefix + "_trial" + std::to_string(trial) +
                                         ".csv");
    emit_csv(path, {"k", "V_k", "V_next", "bound", "slack", "noise_x_norm",
                    "noise_y_norm"},
             rows);
    outputs.push_back(path);

    satisfied += audit.certified ? 1 : 0;
    global_min_slack = std::min(global_min_slack, audit.min_slack);
    summary.push_back({double(trial), double(a.steps), audit.l_b, audit.min_slack,
                       audit.certified ? 1.0 : 0.0});
  }
  std::string summary_path = join_out(dir, a.prefix + "_summary.csv");
  emit_csv(summary_path, {"trial", "steps", "l_b", "min_slack", "satisfied"}, summary);
  outputs.push_back(summary_path);

  std::map<std::string, std::string> cfg{
      {"trials", std::to_string(a.trials)}, {"size", std::to_string(a.size)},
      {"tau", format_g17(a.tau)},           {"beta", format_g17(a.beta)},
      {"steps", std::to_string(a.steps)},   {"noise", format_g17(a.noise)},
      {"x0_scale", format_g17(a.x0_scale)}, {"tolerance", format_g17(a.tolerance)},
      {"seed", std::to_string(a.seed)},     {"mu", format_g17(env.mu)},
  };
  std::string manifest = join_out(dir, a.prefix + "_manifest.txt");
  finish_manifest(manifest, "drift", cfg,
                  {{"satisfied_trials", std::to_string(satisfied)},
                   {"min_slack", format_g17(global_min_slack)}},
                  outputs);
  std::cout << "drift certificate satisfied in " << satisfied << "/" << a.trials
            << " trials, min slack " << format_g17(global_min_slack) << "\n";
}

// ----------------------------------------------------------- diagnose ----

struct DiagnoseArgs {
  std::string game_file;
  std::string features_file;
  double tau = 0.1;
  double delta = 0.1;
  double radius = 1.0;
  int samples = 8;
  int pairs = 32;
  double wscale = 1.0;
  unsigned long long seed = 0;
  std::string prefix = "diagnose";
  std::string outdir = ".";
};

void run_diagnose(const CLI::App* sub, const DiagnoseArgs& a) {
  StochasticGame game = load_game(a.game_file);
  FeatureMap features =
      a.features_file.empty()
          ? FeatureMap::tabular(game.num_states, game.num_actions1, game.num_actions2)
          : load_features(a.features_file);
  ValidationReport report = validate_features(game, features);
  if (!report.ok)
    throw std::invalid_argument("diagnose: " + report.problems.front());

  Rng rng(a.seed);
  JointPolicy probe =
      JointPolicy::uniform(game.num_states, game.num_actions1, game.num_actions2);
  ChainDiagnostics diag = chain_diagnostics(game, features, probe, a.delta, a.tau,
                                            a.radius, a.samples, rng);

  // Worst sampled completeness residual per player. The true quantity is a
  // supremum over every (policy, weight) pair; this is an estimate from
  // `pairs` sampled pairs and is labeled as such.
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst1 = 0.0, worst2 = 0.0;
  for (int j = 0; j < a.pairs; ++j) {
    Vec t1(features.dim(1)), t2(features.dim(2));
    for (int i = 0; i < t1.size(); ++i) t1[i] = a.radius * normal(rng);
    for (int i = 0; i < t2.size(); ++i) t2[i] = a.radius * normal(rng);
    JointPolicy pi = policy_from_params(game, features, t1, t2, a.tau);
    Vec w1(features.dim(1)), w2(features.dim(2));
    for (int i = 0; i < w1.size(); ++i) w1[i] = a.wscale * normal(rng);
    for (int i = 0; i < w2.size(); ++i) w2[i] = a.wscale * normal(rng);
    worst1 = std::max(worst1, completeness_residual(game, features, pi, w1, 1));
    worst2 = std::max(worst2, completeness_residual(game, features, pi, w2, 2));
  }

  std::string dir = resolve_outdir(sub, a.outdir);
  std::string stationary_path = join_out(dir, a.prefix + "_stationary.csv");
  std::vector<std::vector<double>> srows;
  for (int s = 0; s < game.num_states; ++s)
    srows.push_back({double(s), diag.stationary[s]});
  emit_csv(stationary_path, {"s", "stationary"}, srows);

  std::string summary_path = join_out(dir, a.prefix + "_summary.csv");
  emit_csv(summary_path,
           {"mixing_steps", "excitation_1", "excitation_2", "excitation_floor",
            "completeness_max_1", "completeness_max_2", "sampled_pairs"},
           {{double(diag.mixing_steps), diag.excitation1, diag.excitation2,
             diag.excitation_floor, worst1, worst2, double(a.pairs)}});

  std::map<std::string, std::string> cfg{
      {"game", a.game_file},
      {"features", a.features_file.empty() ? "tabular" : a.features_file},
      {"tau", format_g17(a.tau)},
      {"delta", format_g17(a.delta)},
      {"radius", format_g17(a.radius)},
      {"samples", std::to_string(a.samples)},
      {"pairs", std::to_string(a.pairs)},
      {"wscale", format_g17(a.wscale)},
      {"seed", std::to_string(a.seed)},
  };
  std::string manifest = join_out(dir, a.prefix + "_manifest.txt");
  finish_manifest(manifest, "diagnose", cfg,
                  {{"completeness_note", "max over sampled pairs, an estimate"}},
                  {stationary_path, summary_path});
  std::cout << "mixing_steps " << diag.mixing_steps << " excitation_floor "
            << format_g17(diag.excitation_floor) << " completeness_max "
            << format_g17(std::max(worst1, worst2)) << " (sampled estimate)\n";
}

// -------------------------------------------------------------- learn ----

struct LearnArgs {
  std::string game_file;
  std::string config_file;
  std::string features_file;
  long T = 10;
  long K = 1000;
  double alpha = 0.05;
  double beta = 0.002;
  double tau = 0.1;
  double radius = 0.0; // 0 means the 10/(1-discount) default
  unsigned long long seed = 0;
  bool instrumented = false;
  long gap_every = 0; // 0 means gap tracking off
  long diag_every = 0;
  int initial_state = 0;
  bool record = false;
  std::vector<double> rho;
  std::string prefix = "learn";
  std::string outdir = ".";
};

// Flat key=value configuration: file values override defaults, explicit
// command-line flags override the file.
void apply_config_file(LearnArgs& a) {
  auto kv = parse_config_file(a.config_file);
  for (const auto& [key, value] : kv) {
    try {
      if (key == "T") a.T = std::stol(value);
      else if (key == "K") a.K = std::stol(value);
      else if (key == "alpha") a.alpha = std::stod(value);
      else if (key == "beta") a.beta = std::stod(value);
      else if (key == "tau") a.tau = std::stod(value);
      else if (key == "M") a.radius = std::stod(value);
      else if (key == "seed") a.seed = std::stoull(value);
      else if (key == "instrumented") a.instrumented = value == "true" || value == "1";
      else if (key == "gap_every") a.gap_every = std::stol(value);
      else if (key == "diag_every") a.diag_every = std::stol(value);
      else if (key == "initial_state") a.initial_state = std::stoi(value);
      else throw std::invalid_argument("learn config: unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("learn config: bad value for '" + key + "'");
    }
  }
}

void run_learn(const CLI::App* sub, LearnArgs a) {
  if (!a.config_file.empty()) {
    LearnArgs file_defaults = a;
    apply_config_file(file_defaults);
    // Explicit flags win over the file.
    if (sub->count("--T") == 0) a.T = file_defaults.T;
    if (sub->count("--K") == 0) a.K = file_defaults.K;
    if (sub->count("--alpha") == 0) a.alpha = file_defaults.alpha;
    if (sub->count("--beta") == 0) a.beta = file_defaults.beta;
    if (sub->count("--tau") == 0) a.tau = file_defaults.tau;
    if (sub->count("--M") == 0) a.radius = file_defaults.radius;
    if (sub->count("--seed") == 0) a.seed = file_defaults.seed;
    if (sub->count("--instrumented") == 0) a.instrumented = file_defaults.instrumented;
    if (sub->count("--gap-every") == 0) a.gap_every = file_defaults.gap_every;
    if (sub->count("--diag-every") == 0) a.diag_every = file_defaults.diag_every;
    if (sub->count("--initial-state") == 0)
      a.initial_state = file_defaults.initial_state;
  }

  StochasticGame game = load_game(a.game_file);
  FeatureMap features =
      a.features_file.empty()
          ? FeatureMap::tabular(game.num_states, game.num_actions1, game.num_actions2)
          : load_features(a.features_file);
  ValidationReport report = validate_features(game, features);
  if (!report.ok)
    throw std::invalid_argument("learn: " + report.problems.front());

  RunConfig config;
  config.tau = a.tau;
  config.alpha = a.alpha;
  config.beta = a.beta;
  config.radius = a.radius > 0.0 ? a.radius : 10.0 / (1.0 - game.discount);
  config.outer_loops = a.T;
  config.inner_steps = a.K;
  config.initial_state = a.initial_state;
  config.instrumented = a.instrumented;
  config.diag_every = a.diag_every;
  config.track_gap = a.gap_every > 0;
  config.gap_every = std::max(a.gap_every, long(1));
  config.record_observations = a.record;
  if (!a.rho.empty()) config.rho = vec_from(a.rho);
  validate_run_config(game, config);
  for (const std::string& w : config_warnings(game, config))
    std::cerr << "warning: " << w << "\n";

  Rng rng(a.seed);
  RunResult result = run_learner(game, features, config, rng);

  std::string dir = resolve_outdir(sub, a.outdir);
  std::vector<std::string> outputs;

  std::vector<std::string> header{"t", "k", "L_v", "L_sum", "L_theta", "L_w"};
  if (config.track_gap) header.push_back("nash_gap");
  header.push_back("td_norm_1");
  header.push_back("td_norm_2");
  std::vector<std::vector<double>> rows;
  for (const DiagnosticRecord& rec : result.diagnostics) {
    std::vector<double> row{double(rec.t), double(rec.k), rec.l_v, rec.l_sum,
                            rec.l_theta, rec.l_w};
    if (config.track_gap) row.push_back(rec.nash_gap);
    row.push_back(rec.td_rms_1);
    row.push_back(rec.td_rms_2);
    rows.push_back(std::move(row));
  }
  std::string diag_path = join_out(dir, a.prefix + "_diag.csv");
  emit_csv(diag_path, header, rows);
  outputs.push_back(diag_path);

  if (config.instrumented) {
    std::vector<std::vector<double>> series;
    for (size_t t = 0; t < result.l_v_series.size(); ++t)
      series.push_back({double(t), result.l_v_series[t], result.l_sum_series[t]});
    std::string series_path = join_out(dir, a.prefix + "_series.csv");
    emit_csv(series_path, {"t", "L_v", "L_sum"}, series);
    outputs.push_back(series_path);
  }

  std::string policy_path = join_out(dir, a.prefix + "_policy.txt");
  save_policy(result.final_policy, policy_path);
  outputs.push_back(policy_path);

  std::vector<std::vector<double>> wrows;
  for (int i = 0; i < result.player1.w.size(); ++i)
    wrows.push_back({1.0, double(i), result.player1.w[i], result.player1.theta[i]});
  for (int i = 0; i < result.player2.w.size(); ++i)
    wrows.push_back({2.0, double(i), result.player2.w[i], result.player2.theta[i]});
  std::string weights_path = join_out(dir, a.prefix + "_weights.csv");
  emit_csv(weights_path, {"player", "index", "w", "theta"}, wrows);
  outputs.push_back(weights_path);

  if (config.record_observations) {
    for (int player = 1; player <= 2; ++player) {
      const auto& stream = player == 1 ? result.stream1 : result.stream2;
      std::vector<std::vector<double>> obs_rows;
      for (const Observation& o : stream)
        obs_rows.push_back({double(o.s), double(o.a_own), o.reward_own,
                            double(o.s_next)});
      std::string path =
          join_out(dir, a.prefix + "_stream" + std::to_string(player) + ".csv");
      emit_csv(path, {"s", "a_own", "reward_own", "s_next"}, obs_rows);
      outputs.push_back(path);
    }
  }

  std::map<std::string, std::string> cfg{
      {"game", a.game_file},
      {"features", a.features_file.empty() ? "tabular" : a.features_file},
      {"T", std::to_string(config.outer_loops)},
      {"K", std::to_string(config.inner_steps)},
      {"alpha", format_g17(config.alpha)},
      {"beta", format_g17(config.beta)},
      {"tau", format_g17(config.tau)},
      {"M", format_g17(config.radius)},
      {"seed", std::to_string(a.seed)},
      {"instrumented", config.instrumented ? "true" : "false"},
      {"gap_every", std::to_string(a.gap_every)},
      {"diag_every", std::to_string(config.diag_every)},
      {"initial_state", std::to_string(config.initial_state)},
  };
  std::vector<std::pair<std::string, std::string>> extra{
      {"final_state", std::to_string(result.final_state)},
  };
  if (config.track_gap || config.instrumented)
    extra.emplace_back("final_nash_gap", format_g17(result.final_nash_gap));
  std::string manifest = join_out(dir, a.prefix + "_manifest.txt");
  finish_manifest(manifest, "learn", cfg, extra, outputs);

  if (config.track_gap || config.instrumented)
    std::cout << "final nash_gap " << format_g17(result.final_nash_gap) << "\n";
  else
    std::cout << "run complete, final state " << result.final_state << "\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-sum stochastic game learning and auditing toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a seeded random game file");
  gen_cmd->add_option("--states", gen.states, "number of states")->required();
  gen_cmd->add_option("--actions", gen.actions, "actions per player")->expected(2);
  gen_cmd->add_option("--branching", gen.branching, "successors per joint action");
  gen_cmd->add_option("--discount", gen.discount, "discount factor");
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("-o,--out", gen.out, "output game file");
  gen_cmd->add_option("--outdir", gen.outdir, "output directory");

  ViArgs vi;
  CLI::App* vi_cmd = app.add_subcommand("vi", "exact minimax value iteration");
  vi_cmd->add_option("game", vi.game_file, "game file")->required();
  vi_cmd->add_option("--tol", vi.tol, "sup-norm accuracy of v*");
  vi_cmd->add_option("-o,--out", vi.prefix, "output file prefix");
  vi_cmd->add_option("--outdir", vi.outdir, "output directory");

  GapArgs gap;
  CLI::App* gap_cmd = app.add_subcommand("gap", "Nash gap of a saved policy");
  gap_cmd->add_option("game", gap.game_file, "game file")->required();
  gap_cmd->add_option("policy", gap.policy_file, "policy file")->required();
  gap_cmd->add_option("--tol", gap.tol, "best-response solver accuracy");
  gap_cmd->add_option("--rho", gap.rho, "initial state weighting");
  gap_cmd->add_option("-o,--out", gap.prefix, "output file prefix");
  gap_cmd->add_option("--outdir", gap.outdir, "output directory");

  DriftArgs drift;
  CLI::App* drift_cmd =
      app.add_subcommand("drift", "per-step envelope decay audit on random games");
  drift_cmd->add_option("--trials", drift.trials, "number of random games");
  drift_cmd->add_option("--size", drift.size, "actions per player");
  drift_cmd->add_option("--tau", drift.tau, "temperature");
  drift_cmd->add_option("--beta", drift.beta, "dynamics stepsize");
  drift_cmd->add_option("--steps", drift.steps, "steps per trajectory");
  drift_cmd->add_option("--noise", drift.noise, "noise standard deviation");
  drift_cmd->add_option("--x0-scale", drift.x0_scale, "start point scale");
  drift_cmd->add_option("--tolerance", drift.tolerance, "slack tolerance");
  drift_cmd->add_option("--seed", drift.seed, "generator seed");
  drift_cmd->add_option("-o,--out", drift.prefix, "output file prefix");
  drift_cmd->add_option("--outdir", drift.outdir, "output directory");

  DiagnoseArgs diagnose;
  CLI::App* diagnose_cmd = app.add_subcommand(
      "diagnose", "chain mixing, feature excitation, and completeness estimates");
  diagnose_cmd->add_option("game", diagnose.game_file, "game file")->required();
  diagnose_cmd->add_option("--features", diagnose.features_file,
                           "feature file (default tabular)");
  diagnose_cmd->add_option("--tau", diagnose.tau, "temperature for sampled policies");
  diagnose_cmd->add_option("--delta", diagnose.delta, "mixing-time threshold");
  diagnose_cmd->add_option("--radius", diagnose.radius, "sampled parameter radius");
  diagnose_cmd->add_option("--samples", diagnose.samples, "policies for the floor");
  diagnose_cmd->add_option("--pairs", diagnose.pairs,
                           "sampled (policy, weight) pairs for completeness");
  diagnose_cmd->add_option("--wscale", diagnose.wscale, "sampled weight scale");
  diagnose_cmd->add_option("--seed", diagnose.seed, "generator seed");
  diagnose_cmd->add_option("-o,--out", diagnose.prefix, "output file prefix");
  diagnose_cmd->add_option("--outdir", diagnose.outdir, "output directory");

  LearnArgs learn;
  CLI::App* learn_cmd =
      app.add_subcommand("learn", "two-timescale payoff-based learning run");
  learn_cmd->add_option("game", learn.game_file, "game file")->required();
  learn_cmd->add_option("--config", learn.config_file, "key=value config file");
  learn_cmd->add_option("--features", learn.features_file,
                        "feature file (default tabular)");
  learn_cmd->add_option("--T", learn.T, "outer loops");
  learn_cmd->add_option("--K", learn.K, "inner steps per loop");
  learn_cmd->add_option("--alpha", learn.alpha, "fast stepsize");
  learn_cmd->add_option("--beta", learn.beta, "slow stepsize");
  learn_cmd->add_option("--tau", learn.tau, "softmax temperature");
  learn_cmd->add_option("--M", learn.radius, "fast-weight projection radius");
  learn_cmd->add_option("--seed", learn.seed, "run seed");
  learn_cmd->add_flag("--instrumented", learn.instrumented,
                      "compute oracle diagnostics during the run");
  learn_cmd->add_option("--gap-every", learn.gap_every,
                        "evaluate the Nash gap every N outer loops (0 = off)");
  learn_cmd->add_option("--diag-every", learn.diag_every,
                        "extra diagnostic cadence in inner steps");
  learn_cmd->add_option("--initial-state", learn.initial_state, "start state");
  learn_cmd->add_flag("--record", learn.record, "write per-player observation logs");
  learn_cmd->add_option("--rho", learn.rho, "initial state weighting for the gap");
  learn_cmd->add_option("-o,--out", learn.prefix, "output file prefix");
  learn_cmd->add_option("--outdir", learn.outdir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen_cmd->parsed()) run_gen(gen_cmd, gen);
    if (vi_cmd->parsed()) run_vi(vi_cmd, vi);
    if (gap_cmd->parsed()) run_gap(gap_cmd, gap);
    if (drift_cmd->parsed()) run_drift(drift_cmd, drift);
    if (diagnose_cmd->parsed()) run_diagnose(diagnose_cmd, diagnose);
    if (learn_cmd->parsed()) run_learn(learn_cmd, learn);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
