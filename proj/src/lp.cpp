#include "zsg/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace zsg {

namespace {

constexpr double kReducedCostTol = 1e-10;
constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;

// Dense tableau simplex over [A | I_slack/art | rhs] with explicit basis
// bookkeeping. Dantzig pricing for speed, switching to Bland's rule after a
// fixed number of pivots so degenerate problems cannot cycle.
class Tableau {
 public:
  Tableau(Mat t, std::vector<int> basis, int num_structural)
      : t_(std::move(t)), basis_(std::move(basis)), num_structural_(num_structural) {}

  // Runs the simplex on the objective currently loaded in the last row.
  // allowed(j) says whether column j may enter the basis.
  template <class Allowed>
  LpStatus iterate(long max_iterations, const Allowed& allowed) {
    const int m = int(t_.rows()) - 1;
    const int n = int(t_.cols()) - 1;
    for (long iter = 0; iter < max_iterations; ++iter) {
      bool bland = iter > 200;
      int enter = -1;
      double best = -kReducedCostTol;
      for (int j = 0; j < n; ++j) {
        if (!allowed(j)) continue;
        double rc = t_(m, j);
        if (rc < best) {
          enter = j;
          if (bland) break;
          best = rc;
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        double a = t_(i, enter);
        if (a <= kPivotTol) continue;
        double ratio = t_(i, n) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && leave >= 0 && basis_[i] < basis_[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
    return LpStatus::IterationLimit;
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i < t_.rows(); ++i) {
      if (i == row) continue;
      double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  // Loads reduced costs for objective c (over structural columns only) given
  // the current basis.
  void load_objective(const Vec& c) {
    const int m = int(t_.rows()) - 1;
    t_.row(m).setZero();
    for (int j = 0; j < num_structural_; ++j) t_(m, j) = c[j];
    for (int i = 0; i < m; ++i) {
      int b = basis_[i];
      double cb = b < num_structural_ ? c[b] : 0.0;
      if (cb != 0.0) t_.row(m) -= cb * t_.row(i);
    }
  }

  double rhs(int i) const { return t_(i, t_.cols() - 1); }
  double objective_row_rhs() const { return t_(t_.rows() - 1, t_.cols() - 1); }
  const std::vector<int>& basis() const { return basis_; }
  Mat& data() { return t_; }
  int num_structural() const { return num_structural_; }

 private:
  Mat t_;
  std::vector<int> basis_;
  int num_structural_;
};

} // namespace

LpSolution solve_lp(const LpProblem& problem, long max_iterations) {
  const int m = int(problem.a.rows());
  const int n = int(problem.a.cols());
  if (int(problem.b.size()) != m || int(problem.c.size()) != n ||
      int(problem.sense.size()) != m)
    throw std::invalid_argument("solve_lp: inconsistent problem dimensions");

  // Normalize to nonnegative right-hand sides.
  Mat a = problem.a;
  Vec b = problem.b;
  std::vector<ConstraintSense> sense = problem.sense;
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      a.row(i) *= -1.0;
      b[i] = -b[i];
      if (sense[i] == ConstraintSense::LessEqual)
        sense[i] = ConstraintSense::GreaterEqual;
      else if (sense[i] == ConstraintSense::GreaterEqual)
        sense[i] = ConstraintSense::LessEqual;
    }
  }

  // Column layout: structural | slacks and surpluses | artificials | rhs.
  int num_slack = 0, num_art = 0;
  for (auto s : sense) {
    if (s == ConstraintSense::LessEqual) ++num_slack;
    if (s == ConstraintSense::GreaterEqual) ++num_slack, ++num_art;
    if (s == ConstraintSense::Equal) ++num_art;
  }
  const int total = n + num_slack + num_art;
  Mat t = Mat::Zero(m + 1, total + 1);
  t.block(0, 0, m, n) = a;
  t.col(total).head(m) = b;

  std::vector<int> basis(m, -1);
  int slack_at = n, art_at = n + num_slack;
  const int art_begin = art_at;
  for (int i = 0; i < m; ++i) {
    switch (sense[i]) {
      case ConstraintSense::LessEqual:
        t(i, slack_at) = 1.0;
        basis[i] = slack_at++;
        break;
      case ConstraintSense::GreaterEqual:
        t(i, slack_at) = -1.0;
        ++slack_at;
        t(i, art_at) = 1.0;
        basis[i] = art_at++;
        break;
      case ConstraintSense::Equal:
        t(i, art_at) = 1.0;
        basis[i] = art_at++;
        break;
    }
  }

  Tableau tab(std::move(t), std::move(basis), n);
  LpSolution out;

  if (num_art > 0) {
    // Phase 1: minimize the sum of artificials.
    Mat& data = tab.data();
    data.row(m).setZero();
    for (int j = art_begin; j < total; ++j) data(m, j) = 1.0;
    for (int i = 0; i < m; ++i) {
      if (tab.basis()[i] >= art_begin) data.row(m) -= data.row(i);
    }
    LpStatus st = tab.iterate(max_iterations, [](int) { return true; });
    if (st == LpStatus::IterationLimit) {
      out.status = st;
      return out;
    }
    if (-tab.objective_row_rhs() > kFeasTol) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Pivot any artificial still in the basis out on a structural column.
    for (int i = 0; i < m; ++i) {
      if (tab.basis()[i] < art_begin) continue;
      int col = -1;
      for (int j = 0; j < art_begin; ++j) {
        if (std::abs(tab.data()(i, j)) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col >= 0) tab.pivot(i, col);
      // else: the row is redundant; the artificial stays basic at zero.
    }
  }

  // Phase 2 on the real objective; artificial columns may not re-enter.
  tab.load_objective(problem.c);
  LpStatus st = tab.iterate(max_iterations,
                            [art_begin](int j) { return j < art_begin; });
  out.status = st;
  if (st != LpStatus::Optimal) return out;

  out.x = Vec::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (tab.basis()[i] < n) out.x[tab.basis()[i]] = tab.rhs(i);
  }
  out.objective = problem.c.dot(out.x);
  return out;
}

ChebyshevFit chebyshev_fit(const Mat& design, const Vec& target) {
  const int rows = int(design.rows());
  const int d = int(design.cols());
  if (int(target.size()) != rows)
    throw std::invalid_argument("chebyshev_fit: dimension mismatch");

  // Variables (w+, w-, t), all nonnegative; minimize t subject to
  //   design (w+ - w-) - t 1 <= target
  //  -design (w+ - w-) - t 1 <= -target
  LpProblem lp;
  lp.a = Mat::Zero(2 * rows, 2 * d + 1);
  lp.a.block(0, 0, rows, d) = design;
  lp.a.block(0, d, rows, d) = -design;
  lp.a.block(rows, 0, rows, d) = -design;
  lp.a.block(rows, d, rows, d) = design;
  lp.a.col(2 * d).setConstant(-1.0);
  lp.b.resize(2 * rows);
  lp.b.head(rows) = target;
  lp.b.tail(rows) = -target;
  lp.c = Vec::Zero(2 * d + 1);
  lp.c[2 * d] = 1.0;
  lp.sense.assign(2 * rows, ConstraintSense::LessEqual);

  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("chebyshev_fit: linear program did not solve");
  ChebyshevFit fit;
  fit.w = sol.x.head(d) - sol.x.segment(d, d);
  fit.residual = sol.x[2 * d];
  return fit;
}

} // namespace zsg
