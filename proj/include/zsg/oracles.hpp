#pragma once

#include <vector>

#include "zsg/envelope.hpp"
#include "zsg/game.hpp"
#include "zsg/matrix_game.hpp"
#include "zsg/types.hpp"

namespace zsg {

// One-step lookahead payoff matrices for `player` at every state:
//   [T^i(v)](s, a_own, a_opp) = r_i(s, a) + discount * E[v(S') | s, a].
// Player 1's matrices are A1 x A2, player 2's are A2 x A1 with negated
// rewards.
std::vector<Mat> backup_tensor(const StochasticGame& game, const Vec& v, int player);

// Minimax Bellman operator: per state the value of the one-step matrix game,
// together with the certified optimal mixed strategies.
struct BellmanResult {
  Vec values;
  std::vector<Vec> own_strategies;
  std::vector<Vec> opp_strategies;
  double max_duality_gap = 0.0;
};
BellmanResult minimax_bellman(const StochasticGame& game, const Vec& v, int player,
                              double gap_tolerance = 1e-9);

// Minimax value iteration from zero. Stops when the sup-norm step is at most
// tol * (1 - discount) / discount, which certifies ||v - v*||_inf <= tol.
// Records the full iterate sequence so contraction can be audited.
struct ValueIterationResult {
  Vec v;
  long iterations = 0;
  std::vector<Vec> iterates;        // v_0 = 0 .. v_n
  std::vector<double> step_norms;   // ||v_{t+1} - v_t||_inf per iteration
};
ValueIterationResult minimax_value_iteration(const StochasticGame& game, int player,
                                             double tol = 1e-8, long cap = 100000,
                                             double gap_tolerance = 1e-9);

// Optimal value of `player` against a frozen opponent policy: value iteration
// on the opponent-marginalized MDP, stopped by the same certified rule.
Vec best_response_value(const StochasticGame& game, const JointPolicy& policy,
                        int player, double tol = 1e-10, long cap = 1000000);

// Discounted value of a fixed joint policy for `player`, by direct solve of
// the linear policy-evaluation system.
Vec policy_value(const StochasticGame& game, const JointPolicy& policy, int player);

// Exploitability of a joint policy weighted by an initial distribution:
//   sum_i rho' (best_response_i - v_i(policy)).
// rho empty means uniform.
struct NashGapResult {
  double gap = 0.0;
  Vec br1, br2;   // best-response values per player
  Vec v1, v2;     // policy values per player
};
NashGapResult nash_gap(const StochasticGame& game, const JointPolicy& policy,
                       const Vec& rho = Vec(), double tol = 1e-10);

// Opponent-marginalized backup of an externally supplied state value:
//   [H(v, pi_opp)](s, a_own) =
//     sum_opp pi_opp(a_opp | s) [ r_i(s, a) + discount * E[v(S') | s, a] ].
// No averaging over the player's own policy happens here.
Vec marginal_backup(const StochasticGame& game, const Vec& v,
                    const JointPolicy& policy, int player);

// Backup that bootstraps through the player's own policy instead of an
// external v: with q over (s, a_own) rows,
//   [Hbar_pi(q)](s, a_own) =
//     sum_opp pi_opp(a_opp | s) [ r_i + discount * E[ pi_own(S')' q(S') ] ].
// Distinct from marginal_backup: the own-policy average sits inside the
// expectation.
Vec policy_bootstrap_backup(const StochasticGame& game, const Vec& q,
                            const JointPolicy& policy, int player);

// Stationary-weighted projection of H(v, pi_opp) onto the feature span:
//   wbar = (Phi' D Phi)^{-1} Phi' D H,  D = diag(stationary(s) pi_own(a|s)).
// Throws std::runtime_error when the Gram matrix is numerically singular.
Vec target_weights(const StochasticGame& game, const FeatureMap& features,
                   const JointPolicy& policy, const Vec& stationary, const Vec& v,
                   int player);

// Worst-case representation error of the bootstrapped backup at one (policy,
// w_tilde) pair: q_tilde = clamp(Phi w_tilde, +-radius), then the Chebyshev
// residual min_w ||Phi w - Hbar_pi(q_tilde)||_inf. A nonpositive radius means
// the learner's own truncation level 1/(1-discount).
double completeness_residual(const StochasticGame& game, const FeatureMap& features,
                             const JointPolicy& policy, const Vec& w_tilde, int player,
                             double radius = -1.0);

// Scalar progress trackers used by instrumented learner runs.
//   l_v     = sum_i ||v_i - v*_i||_inf
//   l_sum   = ||v_1 + v_2||_inf
//   l_theta = max_s V_{v,s}(phi-linear logits at s), the envelope value of
//             the one-step matrix pair (T^1(v_1)(s), T^2(v_2)(s))
//   l_w     = sum_i ||w_i - wbar_i||_2^2
struct TrackerValues {
  double l_v = 0.0;
  double l_sum = 0.0;
  double l_theta = 0.0;
  double l_w = 0.0;
};
TrackerValues lyapunov_trackers(const StochasticGame& game, const FeatureMap& features,
                                const Vec& v1, const Vec& v2, const Vec& v_star1,
                                const Vec& v_star2, const Vec& theta1, const Vec& theta2,
                                const Vec& w1, const Vec& w2, const Vec& wbar1,
                                const Vec& wbar2, const EnvelopeConfig& config);

} // namespace zsg
