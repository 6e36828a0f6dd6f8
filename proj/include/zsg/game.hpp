#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zsg/types.hpp"

namespace zsg {

// Two-player zero-sum stochastic game on finite state and action sets.
// Rewards are stored for player 1 only; player 2 receives the negation.
// transition[s] has one row per joint action (a1 * num_actions2 + a2) and
// one column per successor state; rows are probability distributions.
struct StochasticGame {
  int num_states = 0;
  int num_actions1 = 0;
  int num_actions2 = 0;
  double discount = 0.0;              // in [0, 1)
  std::vector<Mat> reward1;           // per state, A1 x A2, entries in [-1, 1]
  std::vector<Mat> transition;        // per state, (A1*A2) x S, row-stochastic

  int joint_actions() const { return num_actions1 * num_actions2; }
  int row_index(int a1, int a2) const { return a1 * num_actions2 + a2; }
};

// Linear value-function features, one block per player. phi1 has one row per
// (state, action) pair of player 1 in lexicographic order, d1 columns; rows
// have Euclidean norm at most 1 and the matrix has full column rank.
struct FeatureMap {
  Mat phi1;
  Mat phi2;

  int dim(int player) const { return player == 1 ? int(phi1.cols()) : int(phi2.cols()); }
  const Mat& phi(int player) const { return player == 1 ? phi1 : phi2; }

  // Rows of player i's block belonging to one state (A_i consecutive rows).
  Eigen::Block<const Mat> state_rows(int player, int s, int num_actions) const {
    const Mat& m = player == 1 ? phi1 : phi2;
    return m.block(s * num_actions, 0, num_actions, m.cols());
  }

  static FeatureMap tabular(int num_states, int num_actions1, int num_actions2);
};

// Product policy: one distribution over own actions per state and player.
struct JointPolicy {
  Mat pi1;  // S x A1, rows on the simplex
  Mat pi2;  // S x A2

  static JointPolicy uniform(int num_states, int num_actions1, int num_actions2);
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> problems;
};

// Structural checks: dimensions consistent, rows stochastic within 1e-12,
// probabilities nonnegative, |reward| <= 1, discount in [0, 1).
ValidationReport validate_game(const StochasticGame& game);

// Throws std::invalid_argument listing every problem when validation fails.
void require_valid(const StochasticGame& game);

// Checks a feature map against a game: row counts, row norms <= 1 (within
// 1e-12), full column rank.
ValidationReport validate_features(const StochasticGame& game, const FeatureMap& features);
void require_valid(const StochasticGame& game, const FeatureMap& features);

// Temperature-scaled softmax, numerically shift-invariant. tau > 0.
Vec softmax(const Vec& logits, double tau);

// Policies induced by feature-linear parameters: pi_i(s) = softmax of the
// state's feature rows times theta_i at temperature tau.
JointPolicy policy_from_params(const StochasticGame& game, const FeatureMap& features,
                               const Vec& theta1, const Vec& theta2, double tau);

// Draws a successor state for (s, a1, a2) by inverse CDF on the transition
// row, and returns player 1's reward along with it.
struct TransitionSample {
  double reward1 = 0.0;
  int next_state = 0;
};
TransitionSample sample_transition(const StochasticGame& game, int s, int a1, int a2,
                                   Rng& rng);

// Draws an action index from a distribution by inverse CDF.
int sample_index(const Vec& distribution, Rng& rng);

// State chain obtained by averaging transitions over a joint policy.
Mat induced_chain(const StochasticGame& game, const JointPolicy& policy);

// Stationary distribution of a row-stochastic matrix by power iteration on
// the transpose; iterates until successive L1 change is at most tol. Throws
// std::runtime_error if the cap is exceeded.
Vec stationary_distribution(const Mat& chain, double tol = 1e-10,
                            long max_iterations = 1000000);

// Smallest k with max_s TV(chain^k(s, .), stationary) <= delta. The bound is
// monotone: larger delta never gives a larger k.
long mixing_time(const Mat& chain, double delta, long cap = 1000000);

// lambda_min of Phi_i' D Phi_i where D weights row (s, a_i) by
// stationary(s) * pi_i(a_i | s).
double feature_excitation(const StochasticGame& game, const FeatureMap& features,
                          const JointPolicy& policy, const Vec& stationary, int player);

// Summary statistics of the chain induced by one joint policy, plus a
// conservative feature-excitation floor taken over the uniform policy and a
// batch of randomly sampled parameter policies with ||theta|| <= radius.
struct ChainDiagnostics {
  Vec stationary;
  long mixing_steps = 0;        // at the delta used for the probe
  double excitation1 = 0.0;     // lambda_min for player 1 under the probe policy
  double excitation2 = 0.0;
  double excitation_floor = 0.0;  // min over probe + sampled policies, both players
};
ChainDiagnostics chain_diagnostics(const StochasticGame& game, const FeatureMap& features,
                                   const JointPolicy& probe_policy, double delta,
                                   double tau, double param_radius, int num_samples,
                                   Rng& rng);

// Garnet-style random game: every joint action reaches `branching` distinct
// successor states with stick-breaking probabilities; rewards are uniform on
// [-1, 1].
StochasticGame random_game(Rng& rng, int num_states, int num_actions1, int num_actions2,
                           int branching, double discount);

} // namespace zsg
