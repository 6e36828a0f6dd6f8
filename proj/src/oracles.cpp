#include "zsg/oracles.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "zsg/lp.hpp"

namespace zsg {

namespace {

void check_player(int player) {
  if (player != 1 && player != 2)
    throw std::invalid_argument("player index must be 1 or 2");
}

int own_actions(const StochasticGame& game, int player) {
  return player == 1 ? game.num_actions1 : game.num_actions2;
}

int opp_actions(const StochasticGame& game, int player) {
  return player == 1 ? game.num_actions2 : game.num_actions1;
}

const Mat& own_policy(const JointPolicy& policy, int player) {
  return player == 1 ? policy.pi1 : policy.pi2;
}

const Mat& opp_policy(const JointPolicy& policy, int player) {
  return player == 1 ? policy.pi2 : policy.pi1;
}

double reward_own(const StochasticGame& game, int s, int player, int a_own, int a_opp) {
  return player == 1 ? game.reward1[s](a_own, a_opp) : -game.reward1[s](a_opp, a_own);
}

int joint_row(const StochasticGame& game, int player, int a_own, int a_opp) {
  return player == 1 ? game.row_index(a_own, a_opp) : game.row_index(a_opp, a_own);
}

// Stop threshold for discounted value iteration: a sup-norm step of
// tol * (1 - g) / g certifies ||v - v*||_inf <= tol. At discount zero one
// extra sweep reproduces the previous iterate exactly, so the threshold can
// be zero there.
double vi_threshold(double discount, double tol) {
  return discount > 0.0 ? tol * (1.0 - discount) / discount : 0.0;
}

} // namespace

std::vector<Mat> backup_tensor(const StochasticGame& game, const Vec& v, int player) {
  check_player(player);
  if (v.size() != game.num_states)
    throw std::invalid_argument("backup_tensor: value vector has wrong length");
  const int ao = own_actions(game, player);
  const int ap = opp_actions(game, player);

  std::vector<Mat> out(game.num_states);
  for (int s = 0; s < game.num_states; ++s) {
    Vec expected = game.transition[s] * v;
    Mat m(ao, ap);
    for (int a = 0; a < ao; ++a)
      for (int b = 0; b < ap; ++b)
        m(a, b) = reward_own(game, s, player, a, b) +
                  game.discount * expected[joint_row(game, player, a, b)];
    out[s] = std::move(m);
  }
  return out;
}

BellmanResult minimax_bellman(const StochasticGame& game, const Vec& v, int player,
                              double gap_tolerance) {
  std::vector<Mat> tensor = backup_tensor(game, v, player);
  BellmanResult r;
  r.values.resize(game.num_states);
  r.own_strategies.resize(game.num_states);
  r.opp_strategies.resize(game.num_states);
  for (int s = 0; s < game.num_states; ++s) {
    MatrixGameSolution sol = solve_matrix_game(tensor[s], gap_tolerance);
    r.values[s] = sol.value;
    r.own_strategies[s] = sol.row_strategy;
    r.opp_strategies[s] = sol.col_strategy;
    r.max_duality_gap = std::max(r.max_duality_gap, sol.duality_gap);
  }
  return r;
}

ValueIterationResult minimax_value_iteration(const StochasticGame& game, int player,
                                             double tol, long cap,
                                             double gap_tolerance) {
  check_player(player);
  ValueIterationResult r;
  r.v = Vec::Zero(game.num_states);
  r.iterates.push_back(r.v);
  const double threshold = vi_threshold(game.discount, tol);
  for (long t = 0; t < cap; ++t) {
    Vec next = minimax_bellman(game, r.v, player, gap_tolerance).values;
    double step = (next - r.v).lpNorm<Eigen::Infinity>();
    r.v = next;
    r.iterations = t + 1;
    r.iterates.push_back(r.v);
    r.step_norms.push_back(step);
    if (step <= threshold) return r;
  }
  throw std::runtime_error("minimax_value_iteration: iteration cap reached");
}

Vec best_response_value(const StochasticGame& game, const JointPolicy& policy,
                        int player, double tol, long cap) {
  check_player(player);
  const int ao = own_actions(game, player);
  const int ap = opp_actions(game, player);
  const Mat& opp = opp_policy(policy, player);

  // Freeze the opponent and marginalize it out once, leaving a plain MDP
  // with ao actions per state.
  Mat rbar(game.num_states, ao);
  std::vector<Mat> pbar(game.num_states);
  for (int s = 0; s < game.num_states; ++s) {
    Mat p = Mat::Zero(ao, game.num_states);
    for (int a = 0; a < ao; ++a) {
      double rr = 0.0;
      for (int b = 0; b < ap; ++b) {
        double w = opp(s, b);
        rr += w * reward_own(game, s, player, a, b);
        p.row(a) += w * game.transition[s].row(joint_row(game, player, a, b));
      }
      rbar(s, a) = rr;
    }
    pbar[s] = std::move(p);
  }

  Vec v = Vec::Zero(game.num_states);
  const double threshold = vi_threshold(game.discount, tol);
  for (long t = 0; t < cap; ++t) {
    Vec next(game.num_states);
    for (int s = 0; s < game.num_states; ++s)
      next[s] = (rbar.row(s).transpose() + game.discount * (pbar[s] * v)).maxCoeff();
    double step = (next - v).lpNorm<Eigen::Infinity>();
    v = next;
    if (step <= threshold) return v;
  }
  throw std::runtime_error("best_response_value: iteration cap reached");
}

Vec policy_value(const StochasticGame& game, const JointPolicy& policy, int player) {
  check_player(player);
  Mat chain = induced_chain(game, policy);
  Vec reward(game.num_states);
  for (int s = 0; s < game.num_states; ++s) {
    double rr = 0.0;
    for (int a1 = 0; a1 < game.num_actions1; ++a1)
      for (int a2 = 0; a2 < game.num_actions2; ++a2)
        rr += policy.pi1(s, a1) * policy.pi2(s, a2) * game.reward1[s](a1, a2);
    reward[s] = player == 1 ? rr : -rr;
  }
  // The dense solve is exact and cheap at the state counts this library
  // targets; very large chains fall back to iterative evaluation instead of
  // materializing the factorization.
  if (game.num_states <= 2000) {
    Mat system = Mat::Identity(game.num_states, game.num_states) -
                 game.discount * chain;
    return system.partialPivLu().solve(reward);
  }
  Vec v = Vec::Zero(game.num_states);
  const double threshold = vi_threshold(game.discount, 1e-12);
  for (long t = 0; t < 10000000; ++t) {
    Vec next = reward + game.discount * (chain * v);
    double step = (next - v).lpNorm<Eigen::Infinity>();
    v = next;
    if (step <= threshold) return v;
  }
  throw std::runtime_error("policy_value: iterative evaluation did not converge");
}

NashGapResult nash_gap(const StochasticGame& game, const JointPolicy& policy,
                       const Vec& rho, double tol) {
  Vec weights = rho;
  if (weights.size() == 0)
    weights = Vec::Constant(game.num_states, 1.0 / game.num_states);
  if (weights.size() != game.num_states)
    throw std::invalid_argument("nash_gap: rho has wrong length");

  NashGapResult r;
  r.br1 = best_response_value(game, policy, 1, tol);
  r.br2 = best_response_value(game, policy, 2, tol);
  r.v1 = policy_value(game, policy, 1);
  r.v2 = policy_value(game, policy, 2);
  r.gap = weights.dot(r.br1 - r.v1) + weights.dot(r.br2 - r.v2);
  return r;
}

Vec marginal_backup(const StochasticGame& game, const Vec& v,
                    const JointPolicy& policy, int player) {
  check_player(player);
  if (v.size() != game.num_states)
    throw std::invalid_argument("marginal_backup: value vector has wrong length");
  const int ao = own_actions(game, player);
  const int ap = opp_actions(game, player);
  const Mat& opp = opp_policy(policy, player);

  Vec h(game.num_states * ao);
  for (int s = 0; s < game.num_states; ++s) {
    Vec expected = game.transition[s] * v;
    for (int a = 0; a < ao; ++a) {
      double acc = 0.0;
      for (int b = 0; b < ap; ++b)
        acc += opp(s, b) * (reward_own(game, s, player, a, b) +
                            game.discount * expected[joint_row(game, player, a, b)]);
      h[s * ao + a] = acc;
    }
  }
  return h;
}

Vec policy_bootstrap_backup(const StochasticGame& game, const Vec& q,
                            const JointPolicy& policy, int player) {
  check_player(player);
  const int ao = own_actions(game, player);
  if (q.size() != game.num_states * ao)
    throw std::invalid_argument("policy_bootstrap_backup: q has wrong length");

  // Collapsing q through the player's own policy first makes the bootstrap
  // sit inside the next-state expectation, which is what distinguishes this
  // operator from marginal_backup with a hand-made v.
  const Mat& own = own_policy(policy, player);
  Vec vq(game.num_states);
  for (int s = 0; s < game.num_states; ++s)
    vq[s] = own.row(s).dot(q.segment(s * ao, ao).transpose());
  return marginal_backup(game, vq, policy, player);
}

Vec target_weights(const StochasticGame& game, const FeatureMap& features,
                   const JointPolicy& policy, const Vec& stationary, const Vec& v,
                   int player) {
  check_player(player);
  if (stationary.size() != game.num_states)
    throw std::invalid_argument("target_weights: stationary has wrong length");
  const int ao = own_actions(game, player);
  const Mat& phi = features.phi(player);
  const Mat& own = own_policy(policy, player);

  Vec h = marginal_backup(game, v, policy, player);
  Vec d(game.num_states * ao);
  for (int s = 0; s < game.num_states; ++s)
    for (int a = 0; a < ao; ++a) d[s * ao + a] = stationary[s] * own(s, a);

  // Weighted least squares through a rank-revealing QR of sqrt(D) Phi; a
  // rank drop means the visitation weights kill the feature excitation.
  Mat scaled = d.array().sqrt().matrix().asDiagonal() * phi;
  Eigen::ColPivHouseholderQR<Mat> qr(scaled);
  qr.setThreshold(1e-10);
  if (qr.rank() < phi.cols())
    throw std::runtime_error("target_weights: weighted Gram matrix is singular");
  Vec rhs = d.array().sqrt().matrix().asDiagonal() * h;
  return qr.solve(rhs);
}

double completeness_residual(const StochasticGame& game, const FeatureMap& features,
                             const JointPolicy& policy, const Vec& w_tilde, int player,
                             double radius) {
  check_player(player);
  const Mat& phi = features.phi(player);
  if (w_tilde.size() != phi.cols())
    throw std::invalid_argument("completeness_residual: w_tilde has wrong length");
  if (radius <= 0.0) radius = 1.0 / (1.0 - game.discount);
  Vec q = (phi * w_tilde).cwiseMax(-radius).cwiseMin(radius);
  Vec h = policy_bootstrap_backup(game, q, policy, player);
  return chebyshev_fit(phi, h).residual;
}

TrackerValues lyapunov_trackers(const StochasticGame& game, const FeatureMap& features,
                                const Vec& v1, const Vec& v2, const Vec& v_star1,
                                const Vec& v_star2, const Vec& theta1, const Vec& theta2,
                                const Vec& w1, const Vec& w2, const Vec& wbar1,
                                const Vec& wbar2, const EnvelopeConfig& config) {
  TrackerValues t;
  t.l_v = (v1 - v_star1).lpNorm<Eigen::Infinity>() +
          (v2 - v_star2).lpNorm<Eigen::Infinity>();
  t.l_sum = (v1 + v2).lpNorm<Eigen::Infinity>();
  t.l_w = (w1 - wbar1).squaredNorm() + (w2 - wbar2).squaredNorm();

  std::vector<Mat> t1 = backup_tensor(game, v1, 1);
  std::vector<Mat> t2 = backup_tensor(game, v2, 2);
  for (int s = 0; s < game.num_states; ++s) {
    MatrixGamePair pair{t1[s], t2[s]};
    Vec x1 = features.state_rows(1, s, game.num_actions1) * theta1;
    Vec x2 = features.state_rows(2, s, game.num_actions2) * theta2;
    t.l_theta = std::max(t.l_theta, lyapunov_value(x1, x2, pair, config).value);
  }
  return t;
}

} // namespace zsg
