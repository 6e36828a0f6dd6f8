#include "zsg/learner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "zsg/envelope.hpp"
#include "zsg/oracles.hpp"

namespace zsg {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_player(int player) {
  if (player != 1 && player != 2)
    throw std::invalid_argument("player index must be 1 or 2");
}

} // namespace

void validate_run_config(const StochasticGame& game, const RunConfig& config) {
  if (!(config.tau > 0.0))
    throw std::invalid_argument("run config: tau must be positive");
  if (!(config.alpha > 0.0))
    throw std::invalid_argument("run config: alpha must be positive");
  if (!(config.beta > 0.0) || config.beta > 1.0)
    throw std::invalid_argument("run config: beta must be in (0, 1]");
  if (!(config.radius > 0.0))
    throw std::invalid_argument("run config: projection radius must be positive");
  if (config.outer_loops < 1)
    throw std::invalid_argument("run config: outer_loops must be at least 1");
  if (config.inner_steps < 1)
    throw std::invalid_argument("run config: inner_steps must be at least 1");
  if (config.initial_state < 0 || config.initial_state >= game.num_states)
    throw std::invalid_argument("run config: initial_state out of range");
  if (config.diag_every < 0)
    throw std::invalid_argument("run config: diag_every must be nonnegative");
  if (config.gap_every < 1)
    throw std::invalid_argument("run config: gap_every must be at least 1");
  if (config.rho.size() != 0) {
    if (config.rho.size() != game.num_states)
      throw std::invalid_argument("run config: rho has wrong length");
    if (config.rho.minCoeff() < 0.0 || std::abs(config.rho.sum() - 1.0) > 1e-9)
      throw std::invalid_argument("run config: rho is not a distribution");
  }
}

std::vector<std::string> config_warnings(const StochasticGame& game,
                                         const RunConfig& config,
                                         double excitation_floor) {
  std::vector<std::string> out;
  const double scale = 1.0 / (1.0 - game.discount);
  if (config.tau > scale)
    out.push_back("temperature " + std::to_string(config.tau) +
                  " exceeds the value scale 1/(1-discount) = " + std::to_string(scale) +
                  "; policies will stay near uniform");
  if (config.beta >= config.alpha)
    out.push_back("beta >= alpha: the policy timescale is not slower than the value "
                  "timescale");
  if (excitation_floor > 0.0) {
    double needed = scale / std::sqrt(excitation_floor);
    if (config.radius < needed)
      out.push_back("projection radius " + std::to_string(config.radius) +
                    " is below 1/(sqrt(excitation) (1-discount)) = " +
                    std::to_string(needed) + "; the fast-weight target may be clipped");
    if (config.beta / config.alpha > excitation_floor)
      out.push_back("timescale ratio beta/alpha = " +
                    std::to_string(config.beta / config.alpha) +
                    " exceeds the excitation floor " + std::to_string(excitation_floor));
  }
  return out;
}

Vec truncate(const Vec& q, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("truncate: radius must be positive");
  return q.cwiseMax(-radius).cwiseMin(radius);
}

Vec project_ball(const Vec& w, double radius) {
  if (!(radius > 0.0))
    throw std::invalid_argument("project_ball: radius must be positive");
  double norm = w.norm();
  if (norm <= radius) return w;
  return w * (radius / norm);
}

double td_delta(const FeatureMap& features, int player, int num_actions,
                double discount, double trunc_radius, double tau, const Vec& w,
                const Vec& wbar, const Vec& thetabar, const Observation& obs) {
  check_player(player);
  auto next_rows = features.state_rows(player, obs.s_next, num_actions);
  Vec q_next = truncate(next_rows * wbar, trunc_radius);
  Vec pi_next = softmax(next_rows * thetabar, tau);
  double own = features.phi(player).row(obs.s * num_actions + obs.a_own).dot(w);
  return obs.reward_own + discount * pi_next.dot(q_next) - own;
}

void fast_step(Vec& w, const FeatureMap& features, int player, int num_actions,
               double alpha, double radius, const Observation& obs, double delta) {
  check_player(player);
  w += alpha * delta *
       features.phi(player).row(obs.s * num_actions + obs.a_own).transpose();
  w = project_ball(w, radius);
}

void slow_step(Vec& theta, const Vec& w, double beta) {
  theta = (1.0 - beta) * theta + beta * w;
}

double player_step(PlayerState& ps, const FeatureMap& features, int player,
                   int num_actions, double discount, double trunc_radius,
                   const RunConfig& config, const Observation& obs) {
  slow_step(ps.theta, ps.w, config.beta);
  double delta = td_delta(features, player, num_actions, discount, trunc_radius,
                          config.tau, ps.w, ps.wbar, ps.thetabar, obs);
  fast_step(ps.w, features, player, num_actions, config.alpha, config.radius, obs,
            delta);
  return delta;
}

PlayerState replay_player(const FeatureMap& features, int player, int num_actions,
                          double discount, const RunConfig& config,
                          const std::vector<Observation>& stream) {
  check_player(player);
  const double trunc_radius = 1.0 / (1.0 - discount);
  PlayerState ps;
  ps.w = Vec::Zero(features.dim(player));
  ps.theta = ps.w;
  ps.wbar = ps.w;
  ps.thetabar = ps.w;
  for (size_t i = 0; i < stream.size(); ++i) {
    if (long(i) % config.inner_steps == 0) {
      ps.wbar = ps.w;
      ps.thetabar = ps.theta;
    }
    player_step(ps, features, player, num_actions, discount, trunc_radius, config,
                stream[i]);
  }
  if (long(stream.size()) % config.inner_steps == 0) {
    ps.wbar = ps.w;
    ps.thetabar = ps.theta;
  }
  return ps;
}

namespace {

// Value estimate implied by one player's synced targets: the policy comes
// from thetabar, the action values from the truncated linear form in wbar.
Vec target_view(const StochasticGame& game, const FeatureMap& features, int player,
                const Vec& wbar, const Vec& thetabar, double tau) {
  const int na = player == 1 ? game.num_actions1 : game.num_actions2;
  const double radius = 1.0 / (1.0 - game.discount);
  Vec v(game.num_states);
  for (int s = 0; s < game.num_states; ++s) {
    auto rows = features.state_rows(player, s, na);
    Vec q = truncate(rows * wbar, radius);
    Vec pi = softmax(rows * thetabar, tau);
    v[s] = pi.dot(q);
  }
  return v;
}

struct OracleContext {
  Vec v_star1, v_star2;
  EnvelopeConfig env{};
};

TrackerValues compute_trackers(const StochasticGame& game, const FeatureMap& features,
                               const PlayerState& p1, const PlayerState& p2,
                               const RunConfig& config, const OracleContext& ctx) {
  // The reference point for the fast weights marginalizes the frozen value
  // view through the policies of the CURRENT slow iterates, so the target
  // moves within a loop even though the view itself is pinned at the sync.
  JointPolicy pi_now = policy_from_params(game, features, p1.theta, p2.theta,
                                          config.tau);
  Vec vbar1 = target_view(game, features, 1, p1.wbar, p1.thetabar, config.tau);
  Vec vbar2 = target_view(game, features, 2, p2.wbar, p2.thetabar, config.tau);
  Vec stationary = stationary_distribution(induced_chain(game, pi_now));
  Vec wstar1 = target_weights(game, features, pi_now, stationary, vbar1, 1);
  Vec wstar2 = target_weights(game, features, pi_now, stationary, vbar2, 2);
  return lyapunov_trackers(game, features, vbar1, vbar2, ctx.v_star1, ctx.v_star2,
                           p1.theta, p2.theta, p1.w, p2.w, wstar1, wstar2, ctx.env);
}

} // namespace

RunResult run_learner(const StochasticGame& game, const FeatureMap& features,
                      const RunConfig& config, Rng& rng) {
  validate_run_config(game, config);
  const double trunc_radius = 1.0 / (1.0 - game.discount);
  const bool want_records = config.instrumented || config.track_gap;

  RunResult r;
  r.player1.w = Vec::Zero(features.dim(1));
  r.player1.theta = r.player1.w;
  r.player1.wbar = r.player1.w;
  r.player1.thetabar = r.player1.w;
  r.player2.w = Vec::Zero(features.dim(2));
  r.player2.theta = r.player2.w;
  r.player2.wbar = r.player2.w;
  r.player2.thetabar = r.player2.w;
  r.final_nash_gap = kNan;

  OracleContext ctx;
  if (config.instrumented) {
    ctx.v_star1 = minimax_value_iteration(game, 1, 1e-10).v;
    ctx.v_star2 = minimax_value_iteration(game, 2, 1e-10).v;
    ctx.env = EnvelopeConfig::with_default_mu(config.tau);
  }

  auto record_sync_view = [&]() {
    Vec vbar1 = target_view(game, features, 1, r.player1.wbar, r.player1.thetabar,
                            config.tau);
    Vec vbar2 = target_view(game, features, 2, r.player2.wbar, r.player2.thetabar,
                            config.tau);
    r.l_v_series.push_back((vbar1 - ctx.v_star1).lpNorm<Eigen::Infinity>() +
                           (vbar2 - ctx.v_star2).lpNorm<Eigen::Infinity>());
    r.l_sum_series.push_back((vbar1 + vbar2).lpNorm<Eigen::Infinity>());
  };

  int s = config.initial_state;
  for (long t = 0; t < config.outer_loops; ++t) {
    r.player1.wbar = r.player1.w;
    r.player1.thetabar = r.player1.theta;
    r.player2.wbar = r.player2.w;
    r.player2.thetabar = r.player2.theta;
    if (config.instrumented) record_sync_view();

    double sq1 = 0.0, sq2 = 0.0;
    long since = 0;
    for (long k = 1; k <= config.inner_steps; ++k) {
      Vec pi1 = softmax(features.state_rows(1, s, game.num_actions1) * r.player1.theta,
                        config.tau);
      Vec pi2 = softmax(features.state_rows(2, s, game.num_actions2) * r.player2.theta,
                        config.tau);
      int a1 = sample_index(pi1, rng);
      int a2 = sample_index(pi2, rng);
      TransitionSample ts = sample_transition(game, s, a1, a2, rng);

      Observation obs1{s, a1, ts.reward1, ts.next_state};
      Observation obs2{s, a2, -ts.reward1, ts.next_state};
      if (config.record_observations) {
        r.stream1.push_back(obs1);
        r.stream2.push_back(obs2);
      }

      double d1 = player_step(r.player1, features, 1, game.num_actions1, game.discount,
                              trunc_radius, config, obs1);
      double d2 = player_step(r.player2, features, 2, game.num_actions2, game.discount,
                              trunc_radius, config, obs2);
      sq1 += d1 * d1;
      sq2 += d2 * d2;
      ++since;
      s = ts.next_state;

      bool cadence = config.diag_every > 0 && k % config.diag_every == 0;
      if (want_records && (k == config.inner_steps || cadence)) {
        DiagnosticRecord rec;
        rec.t = t;
        rec.k = k;
        rec.l_v = rec.l_sum = rec.l_theta = rec.l_w = rec.nash_gap = kNan;
        if (config.instrumented) {
          TrackerValues tv = compute_trackers(game, features, r.player1, r.player2,
                                              config, ctx);
          rec.l_v = tv.l_v;
          rec.l_sum = tv.l_sum;
          rec.l_theta = tv.l_theta;
          rec.l_w = tv.l_w;
        }
        if (config.track_gap && k == config.inner_steps && t % config.gap_every == 0) {
          JointPolicy pi = policy_from_params(game, features, r.player1.theta,
                                              r.player2.theta, config.tau);
          rec.nash_gap = nash_gap(game, pi, config.rho).gap;
        }
        rec.td_rms_1 = since > 0 ? std::sqrt(sq1 / double(since)) : 0.0;
        rec.td_rms_2 = since > 0 ? std::sqrt(sq2 / double(since)) : 0.0;
        sq1 = sq2 = 0.0;
        since = 0;
        r.diagnostics.push_back(rec);
      }
    }
  }

  r.player1.wbar = r.player1.w;
  r.player1.thetabar = r.player1.theta;
  r.player2.wbar = r.player2.w;
  r.player2.thetabar = r.player2.theta;
  if (config.instrumented) record_sync_view();

  r.final_state = s;
  r.final_policy = policy_from_params(game, features, r.player1.theta, r.player2.theta,
                                      config.tau);
  if (want_records)
    r.final_nash_gap = nash_gap(game, r.final_policy, config.rho).gap;
  return r;
}

} // namespace zsg
