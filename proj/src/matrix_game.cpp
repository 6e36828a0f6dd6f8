#include "zsg/matrix_game.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "zsg/lp.hpp"

namespace zsg {

double MatrixGamePair::zero_sum_defect() const {
  double worst = 0.0;
  for (int i = 0; i < x1.rows(); ++i)
    for (int j = 0; j < x1.cols(); ++j)
      worst = std::max(worst, std::abs(x1(i, j) + x2(j, i)));
  return worst;
}

MatrixGamePair MatrixGamePair::zero_sum(const Mat& payoff1) {
  MatrixGamePair pair;
  pair.x1 = payoff1;
  pair.x2 = -payoff1.transpose();
  return pair;
}

MatrixGamePair random_zero_sum_pair(Rng& rng, int actions1, int actions2, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat x1(actions1, actions2);
  for (int i = 0; i < actions1; ++i)
    for (int j = 0; j < actions2; ++j) x1(i, j) = u(rng);
  return MatrixGamePair::zero_sum(x1);
}

namespace {

// Solves max_mu min_nu mu' x nu for a payoff matrix made strictly positive
// by the caller. Returns false if either linear program fails.
bool solve_shifted(const Mat& xp, Vec& row_strategy, Vec& col_strategy) {
  const int a1 = int(xp.rows());
  const int a2 = int(xp.cols());

  // Column player: max 1'eta  s.t.  xp eta <= 1, eta >= 0.
  LpProblem col_lp;
  col_lp.a = xp;
  col_lp.b = Vec::Ones(a1);
  col_lp.c = Vec::Constant(a2, -1.0);
  col_lp.sense.assign(a1, ConstraintSense::LessEqual);
  LpSolution col_sol = solve_lp(col_lp);
  if (col_sol.status != LpStatus::Optimal) return false;
  double col_mass = col_sol.x.sum();
  if (!(col_mass > 0.0)) return false;

  // Row player: min 1'xi  s.t.  xp' xi >= 1, xi >= 0.
  LpProblem row_lp;
  row_lp.a = xp.transpose();
  row_lp.b = Vec::Ones(a2);
  row_lp.c = Vec::Ones(a1);
  row_lp.sense.assign(a2, ConstraintSense::GreaterEqual);
  LpSolution row_sol = solve_lp(row_lp);
  if (row_sol.status != LpStatus::Optimal) return false;
  double row_mass = row_sol.x.sum();
  if (!(row_mass > 0.0)) return false;

  col_strategy = col_sol.x / col_mass;
  row_strategy = row_sol.x / row_mass;
  return true;
}

} // namespace

MatrixGameSolution solve_matrix_game(const Mat& payoff, double gap_tolerance) {
  if (payoff.rows() < 1 || payoff.cols() < 1)
    throw std::invalid_argument("solve_matrix_game: empty payoff matrix");

  // Shift so every entry is >= 1; the game value then is positive and the
  // normalized LP pair above applies. The certificate below is evaluated on
  // the original matrix, so the shift only has to be finite.
  double shift = 1.0 - payoff.minCoeff();
  if (shift < 0.0) shift = 0.0;

  MatrixGameSolution sol;
  for (int attempt = 0; attempt < 2; ++attempt) {
    Mat xp = payoff.array() + shift;
    Vec mu, nu;
    if (!solve_shifted(xp, mu, nu)) {
      shift += 0.5;
      continue;
    }

    // Security levels of the two candidate strategies on the original game
    // bracket the value; their gap certifies both strategies at once.
    Vec row_payoffs = payoff.transpose() * mu; // what each column yields vs mu
    Vec col_payoffs = payoff * nu;             // what each row yields vs nu
    double lo = row_payoffs.minCoeff();        // mu guarantees at least lo
    double hi = col_payoffs.maxCoeff();        // nu concedes at most hi
    sol.row_strategy = mu;
    sol.col_strategy = nu;
    sol.value = 0.5 * (lo + hi);
    sol.duality_gap = hi - lo;
    if (sol.duality_gap <= gap_tolerance) return sol;
    shift += 0.5; // rare degenerate pivot sequence; retry once re-shifted
  }
  if (sol.row_strategy.size() == 0)
    throw std::runtime_error("solve_matrix_game: linear program failed");
  if (sol.duality_gap > gap_tolerance)
    throw std::runtime_error("solve_matrix_game: certificate gap above tolerance");
  return sol;
}

} // namespace zsg
