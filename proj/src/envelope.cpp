#include "zsg/envelope.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "zsg/game.hpp"

namespace zsg {

double entropy(const Vec& u) {
  double h = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    if (u[i] > 0.0) h -= u[i] * std::log(u[i]);
  }
  return h;
}

double smoothed_max(const Vec& y, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("smoothed_max: tau must be positive");
  double m = y.maxCoeff();
  return m + tau * std::log(((y.array() - m) / tau).exp().sum());
}

namespace {

// Iterates are kept in the log domain so that simplex coordinates which the
// optimum pushes toward zero never round to exact zeros (the entropic term
// keeps the true minimizer interior, however small). When mu is tiny the
// quadratic term can legitimately demand log-coordinates in the thousands of
// negatives, far below what a double can represent, so the floor genuinely
// binds; coordinates pinned there carry no mass at machine precision and are
// judged by the one-sided optimality test in kkt_residual_of below.
constexpr double kLogFloor = -700.0;

void normalize_log_simplex(Vec& log_u) {
  double m = log_u.maxCoeff();
  double lse = m + std::log((log_u.array() - m).exp().sum());
  log_u.array() -= lse;
  if (log_u.minCoeff() < kLogFloor) {
    log_u = log_u.cwiseMax(kLogFloor);
    double m2 = log_u.maxCoeff();
    log_u.array() -= m2 + std::log((log_u.array() - m2).exp().sum());
  }
}

struct ProxWork {
  const Vec& y;
  const Mat& b;
  const Vec& x;
  double tau;
  double mu;
  Mat btb;
  Vec btx;

  double objective(const Vec& u, const Vec& log_u) const {
    double neg_entropy = 0.0;
    for (int i = 0; i < u.size(); ++i) neg_entropy += u[i] * log_u[i];
    Vec resid = x - b * u;
    return -u.dot(y) + tau * neg_entropy + resid.squaredNorm() / (2.0 * mu);
  }

  Vec gradient(const Vec& u, const Vec& log_u) const {
    return tau * (log_u.array() + 1.0).matrix() - y + (btb * u - btx) / mu;
  }
};

// Optimality measure for the simplex problem. Coordinates away from the log
// floor must equalize their gradient with the multiplier; a coordinate pinned
// at the floor is only required not to want more mass (gradient at or above
// the multiplier), since the floor blocks further decrease but never growth.
double kkt_residual_of(const Vec& g, const Vec& u, const Vec& log_u) {
  double lambda = u.dot(g);
  double r = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    if (log_u[i] > kLogFloor + 1e-9) {
      r = std::max(r, std::abs(g[i] - lambda));
    } else {
      r = std::max(r, lambda - g[i]);
    }
  }
  return r;
}

// One Newton step on the stationarity system in log coordinates, v = log u:
// g(exp v) = lambda 1 together with sum exp v = 1. Working in v keeps every
// iterate strictly positive without a fraction-to-boundary rule, which would
// otherwise shrink the step to nothing whenever a coordinate heads for a very
// small optimum. The Jacobian tau I + (B'B/mu) diag(u) is similar to an SPD
// matrix shifted by tau, hence always invertible, and coordinates resting on
// the log floor decouple from the live block on their own. Acceptance is a
// backtracking decrease of the KKT residual; the objective never enters,
// because near the minimizer a full step improves it by far less than one ulp.
bool newton_step(const ProxWork& w, Vec& u, Vec& log_u, const Vec& g, double res) {
  const int n = int(u.size());
  Mat a = w.btb / w.mu;
  for (int j = 0; j < n; ++j) a.col(j) *= u[j];
  for (int i = 0; i < n; ++i) a(i, i) += w.tau;

  Eigen::PartialPivLU<Mat> lu(a);
  double lambda = u.dot(g);
  Vec rv = g.array() - lambda;
  Vec av = lu.solve(rv);
  Vec bv = lu.solve(Vec::Ones(n));
  double denom = u.dot(bv);
  if (!(denom > 0.0)) return false;
  double dlambda = u.dot(av) / denom;
  Vec dv = -av + dlambda * bv;
  if (!dv.allFinite()) return false;

  double t = 1.0;
  for (int back = 0; back < 30; ++back) {
    Vec trial_log = (log_u + t * dv).cwiseMax(kLogFloor);
    normalize_log_simplex(trial_log);
    if ((trial_log - log_u).cwiseAbs().maxCoeff() == 0.0) return false;
    Vec trial = trial_log.array().exp();
    double trial_res = kkt_residual_of(w.gradient(trial, trial_log), trial, trial_log);
    if (trial_res <= (1.0 - 0.2 * t) * res) {
      u = trial;
      log_u = trial_log;
      return true;
    }
    t *= 0.5;
  }
  return false;
}

} // namespace

ProxSolution entropic_prox(const Vec& y, const Mat& b_matrix, const Vec& x,
                           const EnvelopeConfig& config) {
  if (config.tau <= 0.0 || config.mu <= 0.0)
    throw std::invalid_argument("entropic_prox: tau and mu must be positive");
  if (b_matrix.cols() != y.size() || b_matrix.rows() != x.size())
    throw std::invalid_argument("entropic_prox: dimension mismatch");

  // Without the quadratic coupling the minimizer is the softmax in closed
  // form; returning the library softmax itself keeps downstream identities
  // sharp to the last bit. The log-domain copy is normalized separately so it
  // stays finite even where the softmax underflows.
  if (b_matrix.isZero(0.0)) {
    ProxSolution s;
    s.u = softmax(y, config.tau);
    s.log_u = y / config.tau;
    normalize_log_simplex(s.log_u);
    s.objective = -smoothed_max(y, config.tau) + x.squaredNorm() / (2.0 * config.mu);
    s.kkt_residual = 0.0;
    s.iterations = 0;
    return s;
  }

  ProxWork w{y, b_matrix, x, config.tau, config.mu,
             b_matrix.transpose() * b_matrix, b_matrix.transpose() * x};
  Eigen::SelfAdjointEigenSolver<Mat> es(w.btb);
  double bnorm2 = std::max(0.0, es.eigenvalues().maxCoeff());
  double step = 1.0 / (config.tau + bnorm2 / config.mu);

  Vec log_u = y / config.tau;
  normalize_log_simplex(log_u);
  Vec u = log_u.array().exp();

  // Mirror descent alone needs O(1/step) iterations when mu is small; a few
  // warmup sweeps steer the iterate into the Newton basin and the damped
  // Newton phase finishes in a handful of steps. Mirror descent remains the
  // fallback whenever a Newton step is rejected.
  long md_budget = 10;
  ProxSolution s;
  for (long iter = 0; iter < config.inner_cap; ++iter) {
    u = log_u.array().exp();
    Vec g = w.gradient(u, log_u);
    double res = kkt_residual_of(g, u, log_u);
    if (res <= config.inner_tol) {
      s.u = u;
      s.log_u = log_u;
      s.objective = w.objective(u, log_u);
      s.kkt_residual = res;
      s.iterations = iter;
      return s;
    }
    if (md_budget <= 0 && newton_step(w, u, log_u, g, res)) continue;
    if (md_budget <= 0) md_budget = 20;
    log_u -= step * g;
    normalize_log_simplex(log_u);
    --md_budget;
  }
  throw std::runtime_error("entropic_prox: iteration cap reached before the KKT "
                           "residual met the tolerance");
}

LyapunovValue lyapunov_value(const Vec& x1, const Vec& x2, const MatrixGamePair& pair,
                             const EnvelopeConfig& config) {
  if (x1.size() != pair.x1.rows() || x2.size() != pair.x2.rows() ||
      pair.x1.cols() != pair.x2.rows() || pair.x2.cols() != pair.x1.rows())
    throw std::invalid_argument("lyapunov_value: dimension mismatch");

  LyapunovValue v;
  v.p = entropic_prox(x1, pair.x2, x2, config);
  v.q = entropic_prox(x2, pair.x1, x1, config);
  v.value1 = smoothed_max(x1, config.tau) + v.p.objective;
  v.value2 = smoothed_max(x2, config.tau) + v.q.objective;
  v.value = v.value1 + v.value2;
  return v;
}

double lyapunov_smoothness(const EnvelopeConfig& config) {
  return 2.0 / config.mu + 2.0 / config.tau +
         1.0 / std::sqrt(config.mu * config.tau);
}

LyapunovGradient lyapunov_gradient(const Vec& x1, const Vec& x2,
                                   const MatrixGamePair& pair,
                                   const EnvelopeConfig& config) {
  LyapunovGradient g;
  g.at = lyapunov_value(x1, x2, pair, config);
  g.grad_x1 = softmax(x1, config.tau) - g.at.p.u + (x1 - pair.x1 * g.at.q.u) / config.mu;
  g.grad_x2 = softmax(x2, config.tau) - g.at.q.u + (x2 - pair.x2 * g.at.p.u) / config.mu;
  g.smoothness = lyapunov_smoothness(config);
  return g;
}

} // namespace zsg
