#pragma once

#include "zsg/types.hpp"

namespace zsg {

// A pair of one-shot payoff matrices, one per player, each shaped
// own-actions x opponent-actions: X1 is A1 x A2 and X2 is A2 x A1. The pair
// is zero-sum when X2 = -X1'; the defect measures how far it is from that.
struct MatrixGamePair {
  Mat x1;
  Mat x2;

  double zero_sum_defect() const;

  static MatrixGamePair zero_sum(const Mat& payoff1);  // X2 = -X1'
};

// Uniformly random zero-sum pair with payoffs in [-scale, scale].
MatrixGamePair random_zero_sum_pair(Rng& rng, int actions1, int actions2,
                                    double scale = 1.0);

// Value and optimal mixed strategies of the zero-sum matrix game where the
// row player maximizes mu' X nu. Solved through two small linear programs on
// a positively shifted matrix; the returned strategies certify the value:
//   min_j (mu' X)_j  <=  value  <=  max_i (X nu)_i
// and duality_gap is the width of that bracket.
struct MatrixGameSolution {
  double value = 0.0;
  Vec row_strategy;
  Vec col_strategy;
  double duality_gap = 0.0;
};
MatrixGameSolution solve_matrix_game(const Mat& payoff, double gap_tolerance = 1e-9);

} // namespace zsg
