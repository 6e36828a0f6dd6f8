#pragma once

#include "zsg/matrix_game.hpp"
#include "zsg/types.hpp"

namespace zsg {

// Parameters of the two-player envelope function used as a Lyapunov function
// for smoothed best-response dynamics. mu is the quadratic coupling weight;
// tau / 64 is the default that the drift certificate assumes.
struct EnvelopeConfig {
  double tau = 1.0;
  double mu = 1.0 / 64.0;
  double inner_tol = 1e-9;   // KKT residual target for the inner prox solves
  long inner_cap = 100000;   // iteration cap for the inner solver

  static EnvelopeConfig with_default_mu(double tau) {
    return EnvelopeConfig{tau, tau / 64.0, 1e-9, 100000};
  }
};

// Entropy of a simplex point, with the 0 log 0 = 0 convention.
double entropy(const Vec& u);

// tau * log sum exp(y / tau), evaluated shift-invariantly. This is the exact
// maximum of u'y + tau * entropy(u) over the simplex.
double smoothed_max(const Vec& y, double tau);

// Argmin over the simplex of
//
//   f(u) = -u'y - tau * entropy(u) + ||x - B u||^2 / (2 mu),
//
// the strongly convex inner problem of the envelope. The entropy term keeps
// the solution strictly interior, so optimality is gradient equalization
// over the support; kkt_residual is || grad f(u) - (u' grad f(u)) 1 ||_inf.
//
// The solver runs exponentiated-gradient (entropic mirror descent) steps in
// the log domain with fixed stepsize 1 / (tau + ||B||_2^2 / mu), switching to
// a damped Newton solve of the interior stationarity system once the iterate
// is close enough; mirror descent alone is the fallback when Newton cannot
// be trusted (tiny components). Throws std::runtime_error if the residual
// target is still unmet at the iteration cap.
struct ProxSolution {
  Vec u;
  Vec log_u;             // exact logs of u, kept for stable entropy terms
  double objective = 0.0;
  double kkt_residual = 0.0;
  long iterations = 0;
};
ProxSolution entropic_prox(const Vec& y, const Mat& b_matrix, const Vec& x,
                           const EnvelopeConfig& config);

// Two-player envelope value at parameter pair (x1, x2):
//
//   V = sum_i [ smoothed_max(x_i, tau)
//               + min_u { -u'x_i - tau entropy(u) + ||x_{-i} - X_{-i} u||^2 / (2 mu) } ]
//
// Each summand is nonnegative, and V = 0 exactly at points where
// x_i = X_i softmax(x_{-i} / tau) for both players. The inner minimizers are
// reported (p for player 1's block, q for player 2's).
struct LyapunovValue {
  double value = 0.0;
  double value1 = 0.0;   // player 1 summand
  double value2 = 0.0;
  ProxSolution p;        // minimizer in player 1's summand (dimension A1)
  ProxSolution q;        // minimizer in player 2's summand (dimension A2)
};
LyapunovValue lyapunov_value(const Vec& x1, const Vec& x2, const MatrixGamePair& pair,
                             const EnvelopeConfig& config);

// Envelope gradients in closed form from the inner solutions:
//   d V / d x1 = softmax(x1/tau) - p + (x1 - X1 q) / mu
//   d V / d x2 = softmax(x2/tau) - q + (x2 - X2 p) / mu
// smoothness is the global gradient Lipschitz constant
//   L_V = 2/mu + 2/tau + 1/sqrt(mu tau).
struct LyapunovGradient {
  Vec grad_x1;
  Vec grad_x2;
  double smoothness = 0.0;
  LyapunovValue at;      // the evaluation the gradients were assembled from
};
LyapunovGradient lyapunov_gradient(const Vec& x1, const Vec& x2,
                                   const MatrixGamePair& pair,
                                   const EnvelopeConfig& config);

double lyapunov_smoothness(const EnvelopeConfig& config);

} // namespace zsg
