#include "zsg/dynamics.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "zsg/game.hpp"

namespace zsg {

void sbr_policy_step(Vec& pi1, Vec& pi2, const MatrixGamePair& pair, double tau,
                     double beta) {
  Vec target1 = softmax(pair.x1 * pi2, tau);
  Vec target2 = softmax(pair.x2 * pi1, tau);
  pi1 += beta * (target1 - pi1);
  pi2 += beta * (target2 - pi2);
}

void param_step(Vec& x1, Vec& x2, const MatrixGamePair& pair, double tau, double beta,
                const Vec& e1, const Vec& e2) {
  Vec d1 = pair.x1 * softmax(x2, tau) - x1 + e1;
  Vec d2 = pair.x2 * softmax(x1, tau) - x2 + e2;
  x1 += beta * d1;
  x2 += beta * d2;
}

double regularized_nash_gap(const Vec& pi1, const Vec& pi2, const MatrixGamePair& pair,
                            double tau) {
  Vec payoff1 = pair.x1 * pi2;
  Vec payoff2 = pair.x2 * pi1;
  double gap1 = smoothed_max(payoff1, tau) - (pi1.dot(payoff1) + tau * entropy(pi1));
  double gap2 = smoothed_max(payoff2, tau) - (pi2.dot(payoff2) + tau * entropy(pi2));
  return gap1 + gap2;
}

ParamTrajectory simulate_param_dynamics(const MatrixGamePair& pair, const Vec& x1_0,
                                        const Vec& x2_0, double tau, double beta,
                                        long steps, double noise_scale, Rng& rng) {
  if (steps < 0) throw std::invalid_argument("simulate_param_dynamics: negative steps");
  std::normal_distribution<double> noise(0.0, noise_scale);

  ParamTrajectory traj;
  traj.x1.reserve(steps + 1);
  traj.x2.reserve(steps + 1);
  traj.e1.reserve(steps);
  traj.e2.reserve(steps);
  traj.x1.push_back(x1_0);
  traj.x2.push_back(x2_0);

  Vec x1 = x1_0, x2 = x2_0;
  for (long k = 0; k < steps; ++k) {
    Vec e1 = Vec::Zero(x1.size());
    Vec e2 = Vec::Zero(x2.size());
    if (noise_scale > 0.0) {
      for (int i = 0; i < e1.size(); ++i) e1[i] = noise(rng);
      for (int i = 0; i < e2.size(); ++i) e2[i] = noise(rng);
    }
    param_step(x1, x2, pair, tau, beta, e1, e2);
    traj.x1.push_back(x1);
    traj.x2.push_back(x2);
    traj.e1.push_back(std::move(e1));
    traj.e2.push_back(std::move(e2));
  }
  return traj;
}

DriftAudit drift_check(const ParamTrajectory& trajectory, const MatrixGamePair& pair,
                       const EnvelopeConfig& config, double beta, double tolerance) {
  const size_t n = trajectory.e1.size();
  if (trajectory.x1.size() != n + 1 || trajectory.x2.size() != n + 1 ||
      trajectory.e2.size() != n || n == 0)
    throw std::invalid_argument("drift_check: inconsistent trajectory lengths");

  DriftAudit audit;

  // The additive remainder scales with the largest realized update
  // direction, so that is collected over the whole trajectory first.
  for (size_t k = 0; k < n; ++k) {
    Vec d1 = pair.x1 * softmax(trajectory.x2[k], config.tau) - trajectory.x1[k] +
             trajectory.e1[k];
    Vec d2 = pair.x2 * softmax(trajectory.x1[k], config.tau) - trajectory.x2[k] +
             trajectory.e2[k];
    audit.l_b = std::max({audit.l_b, d1.norm(), d2.norm()});
  }

  std::vector<double> v(n + 1);
  for (size_t k = 0; k <= n; ++k)
    v[k] = lyapunov_value(trajectory.x1[k], trajectory.x2[k], pair, config).value;

  const double defect = pair.zero_sum_defect();
  const double remainder = 138.0 * audit.l_b * beta * beta / config.tau;
  audit.rows.reserve(n);
  audit.min_slack = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < n; ++k) {
    DriftRow row;
    row.k = long(k);
    row.v_k = v[k];
    row.v_next = v[k + 1];
    row.noise_x1_norm = trajectory.e1[k].norm();
    row.noise_x2_norm = trajectory.e2[k].norm();
    row.bound = (1.0 - beta / 2.0) * v[k] +
                (520.0 * beta / config.tau) *
                    (trajectory.e1[k].squaredNorm() + trajectory.e2[k].squaredNorm()) +
                4.0 * beta * defect + remainder;
    row.slack = row.bound - v[k + 1];
    audit.min_slack = std::min(audit.min_slack, row.slack);
    audit.rows.push_back(row);
  }
  audit.certified = audit.min_slack >= -tolerance;
  return audit;
}

FixedPointResult solve_smoothed_fixed_point(const MatrixGamePair& pair, double tau,
                                            double beta, double tol, long cap) {
  FixedPointResult r;
  r.x1 = Vec::Zero(pair.x1.rows());
  r.x2 = Vec::Zero(pair.x2.rows());
  for (long k = 0; k < cap; ++k) {
    Vec d1 = pair.x1 * softmax(r.x2, tau) - r.x1;
    Vec d2 = pair.x2 * softmax(r.x1, tau) - r.x2;
    r.residual = std::max(d1.lpNorm<Eigen::Infinity>(), d2.lpNorm<Eigen::Infinity>());
    r.steps = k;
    if (r.residual <= tol) {
      r.converged = true;
      return r;
    }
    r.x1 += beta * d1;
    r.x2 += beta * d2;
  }
  return r;
}

} // namespace zsg
