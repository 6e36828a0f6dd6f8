#pragma once

#include "zsg/types.hpp"

namespace zsg {

// Dense two-phase primal simplex for small linear programs in the form
//
//   minimize c'x  subject to  A x (<= | = | >=) b,  x >= 0 componentwise.
//
// Everything here is sized for game-theoretic subproblems (tens of rows), so
// a dense tableau with Bland's rule as an anti-cycling fallback is plenty.
enum class ConstraintSense { LessEqual, Equal, GreaterEqual };

struct LpProblem {
  Mat a;
  Vec b;
  Vec c;
  std::vector<ConstraintSense> sense;  // one per row of a
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  Vec x;
  double objective = 0.0;
};

LpSolution solve_lp(const LpProblem& problem, long max_iterations = 100000);

// Chebyshev fit: minimize ||design * w - target||_inf over free w, solved as
// a linear program in (w+, w-, t). Returns the optimal w and the residual.
struct ChebyshevFit {
  Vec w;
  double residual = 0.0;
};
ChebyshevFit chebyshev_fit(const Mat& design, const Vec& target);

} // namespace zsg
