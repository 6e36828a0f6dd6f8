#pragma once

#include <vector>

#include "zsg/game.hpp"
#include "zsg/types.hpp"

namespace zsg {

// Constant-stepsize run configuration for the two-timescale learner. alpha
// drives the fast value weights, beta the slow policy weights; one outer
// loop syncs the target copies every inner_steps iterations.
struct RunConfig {
  double tau = 0.1;          // softmax temperature
  double alpha = 0.05;       // fast stepsize
  double beta = 0.002;       // slow stepsize
  double radius = 0.0;       // projection radius for the fast weights (M > 0)
  long outer_loops = 10;     // T
  long inner_steps = 1000;   // K
  int initial_state = 0;

  bool instrumented = false;      // compute tracker diagnostics
  long diag_every = 0;            // extra tracker cadence inside a loop (0 = loop ends only)
  bool track_gap = false;         // evaluate the Nash gap during the run
  long gap_every = 1;             // outer-loop cadence of those evaluations
  bool record_observations = false;
  Vec rho;                        // initial weighting for the gap (empty = uniform)
};

// Throws std::invalid_argument on out-of-range values (configuration error).
void validate_run_config(const StochasticGame& game, const RunConfig& config);

// Soft sanity checks that do not stop a run: returns human-readable
// warnings, e.g. temperature above 1/(1-discount), or, when an excitation
// floor is supplied, a projection radius below 1/(sqrt(lambda) (1-discount))
// or a timescale ratio beta/alpha above lambda.
std::vector<std::string> config_warnings(const StochasticGame& game,
                                         const RunConfig& config,
                                         double excitation_floor = -1.0);

// Componentwise clamp to [-radius, radius].
Vec truncate(const Vec& q, double radius);

// Euclidean projection onto the ball of the given radius.
Vec project_ball(const Vec& w, double radius);

// What one player is allowed to see about one inner-loop step: the state,
// its own action, its own reward, and the next state. Every fast-timescale
// update is a function of this record and the player's own weights alone.
struct Observation {
  int s = 0;
  int a_own = 0;
  double reward_own = 0.0;
  int s_next = 0;
};

// Temporal-difference error with target weights:
//   delta = r + discount * softmax(Phi_{s'} thetabar / tau)' clamp(Phi_{s'} wbar, +-r)
//             - phi(s, a_own)' w.
double td_delta(const FeatureMap& features, int player, int num_actions,
                double discount, double trunc_radius, double tau, const Vec& w,
                const Vec& wbar, const Vec& thetabar, const Observation& obs);

// Fast-timescale update: w <- project(w + alpha * phi(s, a_own) * delta).
void fast_step(Vec& w, const FeatureMap& features, int player, int num_actions,
               double alpha, double radius, const Observation& obs, double delta);

// Slow-timescale update: theta <- (1 - beta) theta + beta w.
void slow_step(Vec& theta, const Vec& w, double beta);

// One player's weights, target copies included.
struct PlayerState {
  Vec w, theta, wbar, thetabar;
};

// Applies one full inner-loop step for one player from its own observation:
// slow step first, then the TD update of the fast weights. Returns the TD
// error that was applied.
double player_step(PlayerState& ps, const FeatureMap& features, int player,
                   int num_actions, double discount, double trunc_radius,
                   const RunConfig& config, const Observation& obs);

// Re-runs a player's entire update sequence from a recorded observation
// stream (outer syncs applied every config.inner_steps records). Produces
// bit-identical weights to the live run that logged the stream.
PlayerState replay_player(const FeatureMap& features, int player, int num_actions,
                          double discount, const RunConfig& config,
                          const std::vector<Observation>& stream);

// One diagnostic row. k counts inner steps within the outer loop t. Tracker
// fields are NaN when not computed at that point.
struct DiagnosticRecord {
  long t = 0;
  long k = 0;
  double l_v = 0.0;
  double l_sum = 0.0;
  double l_theta = 0.0;
  double l_w = 0.0;
  double nash_gap = 0.0;
  double td_rms_1 = 0.0;
  double td_rms_2 = 0.0;
};

struct RunResult {
  PlayerState player1, player2;
  int final_state = 0;
  JointPolicy final_policy;              // from the final slow weights
  std::vector<DiagnosticRecord> diagnostics;
  double final_nash_gap = 0.0;           // NaN unless track_gap or instrumented

  // Instrumented-only series, indexed by outer loop t = 0..T. The value
  // estimates v_t are the bootstrap view implied by the targets synced at
  // the start of loop t; entry T is the view after the final sync.
  std::vector<double> l_v_series;
  std::vector<double> l_sum_series;

  // Observation logs (record_observations), one stream per player.
  std::vector<Observation> stream1, stream2;
};

// Runs T outer loops of K single-trajectory inner steps. Action draws use
// inverse CDF in a fixed order (player 1, player 2, then the transition), so
// a given seed reproduces a run exactly.
RunResult run_learner(const StochasticGame& game, const FeatureMap& features,
                      const RunConfig& config, Rng& rng);

} // namespace zsg
