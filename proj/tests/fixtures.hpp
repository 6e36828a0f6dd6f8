#pragma once

// Small hand-built games shared by the test binaries. Every number here is
// part of a frozen expectation elsewhere, so editing one means re-deriving
// the values that depend on it.

#include "zsg/game.hpp"

namespace zsg::testing {

// Three states, 2x2 actions, discount 0.8. Rewards and transitions chosen so
// no state has a pure saddle point and the chain is irreducible under any
// policy.
inline StochasticGame three_state_game() {
  StochasticGame g;
  g.num_states = 3;
  g.num_actions1 = 2;
  g.num_actions2 = 2;
  g.discount = 0.8;
  g.reward1.resize(3, Mat(2, 2));
  g.reward1[0] << 0.5, -0.3, -0.1, 0.7;
  g.reward1[1] << -0.6, 0.2, 0.4, -0.8;
  g.reward1[2] << 0.9, -0.5, 0.0, 0.3;
  g.transition.resize(3, Mat(4, 3));
  g.transition[0] << 0.6, 0.3, 0.1,
      0.2, 0.5, 0.3,
      0.1, 0.2, 0.7,
      0.4, 0.4, 0.2;
  g.transition[1] << 0.3, 0.3, 0.4,
      0.5, 0.25, 0.25,
      0.05, 0.9, 0.05,
      0.7, 0.1, 0.2;
  g.transition[2] << 0.25, 0.5, 0.25,
      0.1, 0.8, 0.1,
      0.35, 0.3, 0.35,
      0.2, 0.2, 0.6;
  return g;
}

// Two states, 2x2 actions, discount 0.5. Used with a deliberately rank-one
// feature map so the representation error is visible.
inline StochasticGame two_state_game() {
  StochasticGame g;
  g.num_states = 2;
  g.num_actions1 = 2;
  g.num_actions2 = 2;
  g.discount = 0.5;
  g.reward1.resize(2, Mat(2, 2));
  g.reward1[0] << 0.4, -0.2, 0.1, 0.6;
  g.reward1[1] << -0.5, 0.3, 0.2, -0.1;
  g.transition.resize(2, Mat(4, 2));
  g.transition[0] << 0.7, 0.3,
      0.4, 0.6,
      0.2, 0.8,
      0.5, 0.5;
  g.transition[1] << 0.6, 0.4,
      0.1, 0.9,
      0.3, 0.7,
      0.8, 0.2;
  return g;
}

// Matching pennies as a single-state stochastic game with discount 0: the
// learner sees it as a repeated one-shot game.
inline StochasticGame matching_pennies_game() {
  StochasticGame g;
  g.num_states = 1;
  g.num_actions1 = 2;
  g.num_actions2 = 2;
  g.discount = 0.0;
  g.reward1.resize(1, Mat(2, 2));
  g.reward1[0] << 1.0, -1.0, -1.0, 1.0;
  g.transition.resize(1, Mat(4, 1));
  g.transition[0] << 1.0, 1.0, 1.0, 1.0;
  return g;
}

} // namespace zsg::testing
