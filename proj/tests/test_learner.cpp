#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "zsg/game.hpp"
#include "zsg/learner.hpp"

using namespace zsg;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.tau = 0.1;
  c.alpha = 0.05;
  c.beta = 0.01;
  c.radius = 20.0;
  c.outer_loops = 2;
  c.inner_steps = 50;
  return c;
}

} // namespace

TEST_CASE("run config validation rejects out-of-range values") {
  StochasticGame g = testing::three_state_game();
  RunConfig c = small_config();
  CHECK_NOTHROW(validate_run_config(g, c));

  RunConfig bad = c;
  bad.tau = 0.0;
  CHECK_THROWS_AS(validate_run_config(g, bad), std::invalid_argument);
  bad = c;
  bad.alpha = -0.1;
  CHECK_THROWS_AS(validate_run_config(g, bad), std::invalid_argument);
  bad = c;
  bad.beta = 1.5;
  CHECK_THROWS_AS(validate_run_config(g, bad), std::invalid_argument);
  bad = c;
  bad.radius = 0.0;
  CHECK_THROWS_AS(validate_run_config(g, bad), std::invalid_argument);
  bad = c;
  bad.outer_loops = 0;
  CHECK_THROWS_AS(validate_run_config(g, bad), std::invalid_argument);
  bad = c;
  bad.initial_state = 3;
  CHECK_THROWS_AS(validate_run_config(g, bad), std::invalid_argument);
  bad = c;
  bad.gap_every = 0;
  CHECK_THROWS_AS(validate_run_config(g, bad), std::invalid_argument);
  bad = c;
  bad.rho = Vec(3);
  bad.rho << 0.5, 0.5, 0.5;
  CHECK_THROWS_AS(validate_run_config(g, bad), std::invalid_argument);
}

TEST_CASE("config warnings flag suspicious but legal settings") {
  StochasticGame g = testing::three_state_game();  // discount 0.8
  RunConfig c = small_config();
  CHECK(config_warnings(g, c).empty());

  RunConfig hot = c;
  hot.tau = 6.0;  // above 1 / (1 - discount) = 5
  CHECK_FALSE(config_warnings(g, hot).empty());

  RunConfig inverted = c;
  inverted.beta = 0.5;  // slower timescale running faster than alpha = 0.05
  CHECK_FALSE(config_warnings(g, inverted).empty());

  // With an excitation floor supplied, a tight radius draws a warning too.
  RunConfig tight = c;
  tight.radius = 1.0;
  CHECK_FALSE(config_warnings(g, tight, 0.01).empty());
}

TEST_CASE("truncation and ball projection") {
  Vec q(3);
  q << 4.0, -7.0, 0.5;
  Vec t = truncate(q, 5.0);
  CHECK(t[0] == 4.0);
  CHECK(t[1] == -5.0);
  CHECK(t[2] == 0.5);

  Vec w(2);
  w << 3.0, 4.0;  // norm 5
  CHECK(project_ball(w, 6.0) == w);
  Vec p = project_ball(w, 2.5);
  CHECK(p.norm() == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(p[0] / p[1] == doctest::Approx(0.75).epsilon(1e-13));

  CHECK_THROWS_AS(truncate(q, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(project_ball(w, -1.0), std::invalid_argument);
}

TEST_CASE("td error matches the frozen hand computation") {
  StochasticGame g = testing::three_state_game();
  FeatureMap f = FeatureMap::tabular(3, 2, 2);
  Vec thetabar(6), wbar(6), w(6);
  thetabar << 0.3, -0.2, 0.5, 0.1, -0.4, 0.2;
  wbar << 4.0, -6.0, 1.5, 0.5, 2.0, -0.7;
  w << 0.2, 0.1, -0.3, 0.4, 0.0, 0.6;
  Observation obs;
  obs.s = 1;
  obs.a_own = 0;
  obs.reward_own = g.reward1[1](0, 1);
  obs.s_next = 2;
  double delta = td_delta(f, 1, 2, g.discount, 5.0, 0.25, w, wbar, thetabar, obs);
  CHECK(delta == doctest::Approx(0.11965302442687226).epsilon(1e-13));
}

TEST_CASE("fast and slow steps apply their update rules exactly") {
  FeatureMap f = FeatureMap::tabular(2, 2, 2);
  Vec w(4);
  w << 0.1, -0.2, 0.3, 0.05;
  Observation obs;
  obs.s = 1;
  obs.a_own = 0;
  Vec expected = w;
  expected[2] += 0.5 * 0.8;  // phi is the (s=1, a=0) indicator
  fast_step(w, f, 1, 2, 0.5, 100.0, obs, 0.8);
  CHECK((w - expected).lpNorm<Eigen::Infinity>() <= 1e-15);

  // A big error pushes the iterate outside the ball; the projection pulls
  // it back to the boundary.
  fast_step(w, f, 1, 2, 1.0, 0.5, obs, 100.0);
  CHECK(w.norm() == doctest::Approx(0.5).epsilon(1e-12));

  Vec theta(2), wv(2);
  theta << 1.0, -1.0;
  wv << 0.0, 1.0;
  slow_step(theta, wv, 0.25);
  CHECK(theta[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(theta[1] == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("player step moves the slow weights before the fast ones") {
  StochasticGame g = testing::three_state_game();
  FeatureMap f = FeatureMap::tabular(3, 2, 2);
  RunConfig c = small_config();
  c.beta = 1.0;  // slow step becomes theta <- w, making the order observable
  PlayerState ps;
  ps.w = Vec::Zero(6);
  ps.theta = Vec::Zero(6);
  ps.wbar = Vec::Zero(6);
  ps.thetabar = Vec::Zero(6);
  ps.w << 0.4, -0.1, 0.2, 0.0, 0.3, -0.5;
  Vec w_before = ps.w;
  Observation obs;
  obs.s = 0;
  obs.a_own = 1;
  obs.reward_own = 0.7;
  obs.s_next = 2;
  player_step(ps, f, 1, 2, g.discount, 5.0, c, obs);
  CHECK(ps.theta == w_before);   // theta took the pre-update fast weights
  CHECK(ps.w != w_before);       // and the fast weights moved afterwards
}

TEST_CASE("learner runs are deterministic given the seed") {
  StochasticGame g = testing::three_state_game();
  FeatureMap f = FeatureMap::tabular(3, 2, 2);
  RunConfig c = small_config();
  c.track_gap = true;
  Rng r1(77), r2(77);
  RunResult a = run_learner(g, f, c, r1);
  RunResult b = run_learner(g, f, c, r2);
  CHECK(a.player1.w == b.player1.w);
  CHECK(a.player1.theta == b.player1.theta);
  CHECK(a.player2.w == b.player2.w);
  CHECK(a.final_state == b.final_state);
  REQUIRE(a.diagnostics.size() == b.diagnostics.size());
  for (size_t i = 0; i < a.diagnostics.size(); ++i) {
    CHECK(a.diagnostics[i].td_rms_1 == b.diagnostics[i].td_rms_1);
    CHECK(a.diagnostics[i].nash_gap == b.diagnostics[i].nash_gap);
  }
  Rng r3(78);
  RunResult d = run_learner(g, f, c, r3);
  CHECK(a.player1.w != d.player1.w);
}

TEST_CASE("weights respect the projection ball and diagnostics the cadence") {
  StochasticGame g = testing::three_state_game();
  FeatureMap f = FeatureMap::tabular(3, 2, 2);
  RunConfig c = small_config();
  c.radius = 0.8;  // small enough that the projection actually engages
  c.instrumented = true;
  c.diag_every = 25;
  Rng rng(5);
  RunResult r = run_learner(g, f, c, rng);
  CHECK(r.player1.w.norm() <= c.radius + 1e-12);
  CHECK(r.player2.w.norm() <= c.radius + 1e-12);
  // theta is a running average of projected iterates, so it obeys the same
  // bound.
  CHECK(r.player1.theta.norm() <= c.radius + 1e-12);
  CHECK(r.player2.theta.norm() <= c.radius + 1e-12);

  // K = 50 with an extra record every 25 inner steps: two records per loop.
  CHECK(r.diagnostics.size() == 4);
  CHECK(r.diagnostics[0].k == 25);
  CHECK(r.diagnostics[1].k == 50);
  CHECK(r.diagnostics[1].t == 0);
  CHECK(r.diagnostics[3].t == 1);

  // Instrumented series carry one entry per sync plus the final one.
  REQUIRE(r.l_v_series.size() == size_t(c.outer_loops) + 1);
  REQUIRE(r.l_sum_series.size() == size_t(c.outer_loops) + 1);
  for (double v : r.l_v_series) {
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
  }
  CHECK(std::isfinite(r.final_nash_gap));
  CHECK(r.final_nash_gap >= -1e-10);
}

TEST_CASE("recorded streams replay to bit-identical weights") {
  StochasticGame g = testing::three_state_game();
  FeatureMap f = FeatureMap::tabular(3, 2, 2);
  RunConfig c = small_config();
  c.record_observations = true;
  Rng rng(13);
  RunResult r = run_learner(g, f, c, rng);
  REQUIRE(r.stream1.size() == size_t(c.outer_loops * c.inner_steps));
  REQUIRE(r.stream2.size() == r.stream1.size());

  // Each player's whole update sequence is a function of its own stream:
  // state, own action, own reward, next state. Replaying it offline must
  // land on exactly the same weights, target copies included.
  PlayerState p1 = replay_player(f, 1, 2, g.discount, c, r.stream1);
  PlayerState p2 = replay_player(f, 2, 2, g.discount, c, r.stream2);
  CHECK(p1.w == r.player1.w);
  CHECK(p1.theta == r.player1.theta);
  CHECK(p1.wbar == r.player1.wbar);
  CHECK(p1.thetabar == r.player1.thetabar);
  CHECK(p2.w == r.player2.w);
  CHECK(p2.theta == r.player2.theta);

  // The streams expose only payoff-based information. In a zero-sum game
  // the two players' rewards at the same step are negatives of each other.
  for (size_t i = 0; i < r.stream1.size(); ++i) {
    CHECK(r.stream1[i].s == r.stream2[i].s);
    CHECK(r.stream1[i].s_next == r.stream2[i].s_next);
    CHECK(r.stream1[i].reward_own == -r.stream2[i].reward_own);
  }
}

TEST_CASE("gap cadence controls which loops evaluate the gap") {
  StochasticGame g = testing::matching_pennies_game();
  FeatureMap f = FeatureMap::tabular(1, 2, 2);
  RunConfig c = small_config();
  c.outer_loops = 4;
  c.inner_steps = 30;
  c.track_gap = true;
  c.gap_every = 2;
  Rng rng(3);
  RunResult r = run_learner(g, f, c, rng);
  REQUIRE(r.diagnostics.size() == 4);
  CHECK(std::isfinite(r.diagnostics[0].nash_gap));   // t = 0
  CHECK(std::isnan(r.diagnostics[1].nash_gap));      // t = 1 skipped
  CHECK(std::isfinite(r.diagnostics[2].nash_gap));   // t = 2
  CHECK(std::isnan(r.diagnostics[3].nash_gap));
  // Trackers stay NaN when the run is not instrumented.
  CHECK(std::isnan(r.diagnostics[0].l_v));
  CHECK(std::isfinite(r.final_nash_gap));
}

TEST_CASE("final policy is the softmax of the final slow weights") {
  StochasticGame g = testing::three_state_game();
  FeatureMap f = FeatureMap::tabular(3, 2, 2);
  RunConfig c = small_config();
  Rng rng(31);
  RunResult r = run_learner(g, f, c, rng);
  JointPolicy expected =
      policy_from_params(g, f, r.player1.theta, r.player2.theta, c.tau);
  CHECK((r.final_policy.pi1 - expected.pi1).lpNorm<Eigen::Infinity>() <= 1e-15);
  CHECK((r.final_policy.pi2 - expected.pi2).lpNorm<Eigen::Infinity>() <= 1e-15);
  for (int s = 0; s < 3; ++s) {
    CHECK(r.final_policy.pi1.row(s).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.final_policy.pi1.row(s).minCoeff() > 0.0);
  }
}

TEST_CASE("a frozen fast timescale keeps both weight vectors at zero") {
  StochasticGame g = testing::matching_pennies_game();
  FeatureMap f = FeatureMap::tabular(1, 2, 2);
  RunConfig c = small_config();
  c.alpha = 1e-300;  // effectively zero but still a legal stepsize
  Rng rng(8);
  RunResult r = run_learner(g, f, c, rng);
  CHECK(r.player1.w.lpNorm<Eigen::Infinity>() <= 1e-280);
  CHECK(r.player1.theta.lpNorm<Eigen::Infinity>() <= 1e-280);
}
