#pragma once

#include <vector>

#include "zsg/envelope.hpp"
#include "zsg/matrix_game.hpp"
#include "zsg/types.hpp"

namespace zsg {

// One simultaneous smoothed best-response step in policy space:
//   pi_i <- pi_i + beta (softmax(X_i pi_{-i} / tau) - pi_i),
// both players updated from the same pre-step policies.
void sbr_policy_step(Vec& pi1, Vec& pi2, const MatrixGamePair& pair, double tau,
                     double beta);

// One simultaneous step of the parameter-space dynamics with additive noise:
//   x_i <- x_i + beta (X_i softmax(x_{-i} / tau) - x_i + e_i).
void param_step(Vec& x1, Vec& x2, const MatrixGamePair& pair, double tau, double beta,
                const Vec& e1, const Vec& e2);

// Entropy-regularized Nash gap of a product policy in a one-shot game:
//   sum_i [ max_u { u'X_i pi_{-i} + tau entropy(u) }
//           - (pi_i'X_i pi_{-i} + tau entropy(pi_i)) ].
// Nonnegative; zero exactly at the smoothed equilibrium.
double regularized_nash_gap(const Vec& pi1, const Vec& pi2, const MatrixGamePair& pair,
                            double tau);

// Recorded parameter-space trajectory: states x^i_0 .. x^i_n and the noise
// injected at each of the n steps.
struct ParamTrajectory {
  std::vector<Vec> x1, x2;   // length n + 1
  std::vector<Vec> e1, e2;   // length n
};

// Rolls the parameter dynamics forward `steps` times. noise_scale = 0 gives
// the deterministic flow; otherwise each noise coordinate is an independent
// draw from N(0, noise_scale^2).
ParamTrajectory simulate_param_dynamics(const MatrixGamePair& pair, const Vec& x1_0,
                                        const Vec& x2_0, double tau, double beta,
                                        long steps, double noise_scale, Rng& rng);

// Per-step certificate that the envelope decays along a recorded trajectory:
//
//   V(x_{k+1}) <= (1 - beta/2) V(x_k)
//                 + (520 beta / tau) (||e1_k||^2 + ||e2_k||^2)
//                 + 4 beta * zero_sum_defect
//                 + 138 L_b beta^2 / tau
//
// where L_b is the largest update-direction norm recorded anywhere on the
// trajectory. slack = bound - V(x_{k+1}); the certificate holds when every
// slack is >= -tolerance. Assumes mu = tau / 64 in the config.
struct DriftRow {
  long k = 0;
  double v_k = 0.0;
  double v_next = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  double noise_x1_norm = 0.0;
  double noise_x2_norm = 0.0;
};
struct DriftAudit {
  std::vector<DriftRow> rows;
  double l_b = 0.0;
  double min_slack = 0.0;
  bool certified = false;
};
DriftAudit drift_check(const ParamTrajectory& trajectory, const MatrixGamePair& pair,
                       const EnvelopeConfig& config, double beta, double tolerance);

// Damped fixed-point solve of x_i = X_i softmax(x_{-i} / tau) by running the
// noise-free dynamics until the update-direction norm drops below tol.
struct FixedPointResult {
  Vec x1, x2;
  double residual = 0.0;   // final max update-direction infinity norm
  long steps = 0;
  bool converged = false;
};
FixedPointResult solve_smoothed_fixed_point(const MatrixGamePair& pair, double tau,
                                            double beta = 0.1, double tol = 1e-11,
                                            long cap = 2000000);

} // namespace zsg
