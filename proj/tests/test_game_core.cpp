#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "zsg/game.hpp"
#include "zsg/game_io.hpp"

using namespace zsg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

} // namespace

TEST_CASE("validation accepts the hand-built games") {
  CHECK(validate_game(testing::three_state_game()).ok);
  CHECK(validate_game(testing::two_state_game()).ok);
  CHECK(validate_game(testing::matching_pennies_game()).ok);
}

TEST_CASE("validation rejects structural defects") {
  StochasticGame g = testing::three_state_game();
  g.transition[1](2, 0) += 0.1;  // row no longer sums to one
  ValidationReport r = validate_game(g);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.problems.empty());

  g = testing::three_state_game();
  g.reward1[0](0, 1) = 1.5;  // reward outside [-1, 1]
  CHECK_FALSE(validate_game(g).ok);

  g = testing::three_state_game();
  g.discount = 1.0;
  CHECK_FALSE(validate_game(g).ok);

  g = testing::three_state_game();
  g.transition[2](1, 1) = -0.2;
  g.transition[2](1, 0) += 0.2;  // still sums to one, but negative entry
  CHECK_FALSE(validate_game(g).ok);

  CHECK_THROWS_AS(require_valid(g), std::invalid_argument);
}

TEST_CASE("feature validation checks shape, row norms, and rank") {
  StochasticGame g = testing::two_state_game();
  FeatureMap f = FeatureMap::tabular(2, 2, 2);
  CHECK(validate_features(g, f).ok);

  FeatureMap wrong_rows = f;
  wrong_rows.phi1 = Mat::Identity(3, 3);
  CHECK_FALSE(validate_features(g, wrong_rows).ok);

  FeatureMap big_row = f;
  big_row.phi1(0, 0) = 2.0;  // row norm above one
  CHECK_FALSE(validate_features(g, big_row).ok);

  FeatureMap rank_deficient = f;
  rank_deficient.phi2 = Mat::Zero(4, 2);
  rank_deficient.phi2.col(0) << 0.5, 0.25, -0.5, 0.1;
  rank_deficient.phi2.col(1) = 2.0 * rank_deficient.phi2.col(0) * 0.4;
  CHECK_FALSE(validate_features(g, rank_deficient).ok);
}

TEST_CASE("softmax matches the logistic closed form and is shift invariant") {
  Vec y(2);
  y << 1.0, 0.0;
  Vec p = softmax(y, 1.0);
  CHECK(p[0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-15));
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-15));

  Vec p_half = softmax(y, 0.5);
  CHECK(p_half[0] == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-15));

  // Shifting every logit by the same exactly representable constant must not
  // move the output at all.
  Vec y2(3);
  y2 << 0.5, -0.25, 0.125;
  Vec shifted = y2.array() + 2.0;
  Vec a = softmax(y2, 0.3);
  Vec b = softmax(shifted, 0.3);
  for (int i = 0; i < 3; ++i) CHECK(a[i] == b[i]);

  // Tiny temperature concentrates on the argmax without overflowing.
  Vec sharp = softmax(y, 0.01);
  CHECK(sharp[0] == doctest::Approx(1.0));

  // Huge logits must not overflow either.
  Vec big(2);
  big << 5000.0, -5000.0;
  Vec pb = softmax(big, 1.0);
  CHECK(pb[0] == doctest::Approx(1.0));
  CHECK(std::isfinite(pb[1]));

  CHECK_THROWS_AS(softmax(y, 0.0), std::invalid_argument);
}

TEST_CASE("policy_from_params applies softmax to the feature logits") {
  StochasticGame g = testing::three_state_game();
  FeatureMap f = FeatureMap::tabular(3, 2, 2);
  Vec t1(6), t2(6);
  t1 << 0.3, -0.2, 0.5, 0.1, -0.4, 0.2;
  t2 << -0.1, 0.6, 0.2, -0.3, 0.0, 0.4;
  JointPolicy pi = policy_from_params(g, f, t1, t2, 0.25);
  for (int s = 0; s < 3; ++s) {
    Vec logits1(2), logits2(2);
    logits1 << t1[2 * s], t1[2 * s + 1];
    logits2 << t2[2 * s], t2[2 * s + 1];
    Vec e1 = softmax(logits1, 0.25);
    Vec e2 = softmax(logits2, 0.25);
    for (int a = 0; a < 2; ++a) {
      CHECK(pi.pi1(s, a) == doctest::Approx(e1[a]).epsilon(1e-15));
      CHECK(pi.pi2(s, a) == doctest::Approx(e2[a]).epsilon(1e-15));
    }
  }
}

TEST_CASE("induced chain of the uniform policy averages the transition rows") {
  StochasticGame g = testing::three_state_game();
  JointPolicy u = JointPolicy::uniform(3, 2, 2);
  Mat chain = induced_chain(g, u);
  CHECK(chain(0, 0) == doctest::Approx(0.325).epsilon(1e-15));
  CHECK(chain(0, 1) == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(chain(0, 2) == doctest::Approx(0.325).epsilon(1e-15));
  for (int s = 0; s < 3; ++s)
    CHECK(chain.row(s).sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("stationary distribution of a fixed 3-state chain") {
  Mat p(3, 3);
  p << 0.5, 0.25, 0.25,
      0.2, 0.6, 0.2,
      0.1, 0.3, 0.6;
  Vec pi = stationary_distribution(p, 1e-14);
  // Exact answer (4/17, 7/17, 6/17), derived independently. The solve runs
  // to a tolerance tighter than the comparison below.
  CHECK(pi[0] == doctest::Approx(0.23529411764705879).epsilon(1e-11));
  CHECK(pi[1] == doctest::Approx(0.41176470588235287).epsilon(1e-11));
  CHECK(pi[2] == doctest::Approx(0.35294117647058831).epsilon(1e-11));
  CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-14));

  // Fixed-point property: pi' P = pi'.
  Vec back = p.transpose() * pi;
  CHECK((back - pi).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("mixing time of a 2-state chain at three thresholds") {
  Mat p(2, 2);
  p << 0.9, 0.1,
      0.2, 0.8;
  CHECK(mixing_time(p, 0.1) == 6);
  CHECK(mixing_time(p, 0.01) == 12);
  CHECK(mixing_time(p, 0.001) == 19);
  // Monotone in the threshold.
  CHECK(mixing_time(p, 0.5) <= mixing_time(p, 0.001));
}

TEST_CASE("feature excitation on a frozen instance and the tabular identity") {
  StochasticGame g;
  g.num_states = 3;
  g.num_actions1 = 2;
  g.num_actions2 = 2;
  g.discount = 0.9;
  g.reward1.resize(3, Mat::Zero(2, 2));
  g.transition.resize(3, Mat::Constant(4, 3, 1.0 / 3.0));

  JointPolicy pi;
  pi.pi1 = Mat(3, 2);
  pi.pi1 << 0.5, 0.5,
      0.25, 0.75,
      0.6, 0.4;
  pi.pi2 = pi.pi1;
  Vec mu(3);
  mu << 0.3, 0.45, 0.25;

  FeatureMap f;
  f.phi1 = Mat(6, 3);
  f.phi1 << 0.31, -0.22, 0.54,
      -0.17, 0.48, 0.09,
      0.62, 0.11, -0.35,
      -0.41, -0.29, 0.16,
      0.25, 0.57, 0.33,
      -0.08, 0.44, -0.51;
  f.phi2 = Mat::Identity(6, 6);

  // lambda_min of Phi1' D Phi1 with D = diag(mu(s) pi1(a|s)), derived
  // independently from the same literals.
  CHECK(feature_excitation(g, f, pi, mu, 1) ==
        doctest::Approx(0.083994293673075315).epsilon(1e-12));
  // Identity features reduce to min_s,a mu(s) pi2(a|s) = 0.25 * 0.4.
  CHECK(feature_excitation(g, f, pi, mu, 2) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("chain diagnostics report a positive excitation floor") {
  StochasticGame g = testing::three_state_game();
  FeatureMap f = FeatureMap::tabular(3, 2, 2);
  JointPolicy u = JointPolicy::uniform(3, 2, 2);
  Rng rng(5);
  ChainDiagnostics d = chain_diagnostics(g, f, u, 0.1, 0.5, 2.0, 6, rng);
  CHECK(d.stationary.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.mixing_steps >= 1);
  CHECK(d.excitation1 > 0.0);
  CHECK(d.excitation2 > 0.0);
  CHECK(d.excitation_floor > 0.0);
  CHECK(d.excitation_floor <= d.excitation1 + 1e-15);
  CHECK(d.excitation_floor <= d.excitation2 + 1e-15);
}

TEST_CASE("sampling is inverse-CDF and reproducible") {
  Vec dist(3);
  dist << 0.2, 0.5, 0.3;
  Rng a(123), b(123);
  for (int i = 0; i < 50; ++i) CHECK(sample_index(dist, a) == sample_index(dist, b));

  Rng rng(7);
  long counts[3] = {0, 0, 0};
  const int n = 200000;
  for (int i = 0; i < n; ++i) counts[sample_index(dist, rng)]++;
  CHECK(double(counts[0]) / n == doctest::Approx(0.2).epsilon(0.05));
  CHECK(double(counts[1]) / n == doctest::Approx(0.5).epsilon(0.05));
  CHECK(double(counts[2]) / n == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("transition sampling follows the row distribution and reward table") {
  StochasticGame g = testing::two_state_game();
  Rng rng(11);
  long hits[2] = {0, 0};
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    TransitionSample t = sample_transition(g, 0, 1, 0, rng);
    CHECK(t.reward1 == 0.1);  // reward1[0](1, 0)
    hits[t.next_state]++;
  }
  CHECK(double(hits[0]) / n == doctest::Approx(0.2).epsilon(0.05));
  CHECK(double(hits[1]) / n == doctest::Approx(0.8).epsilon(0.05));
}

TEST_CASE("random games are valid, respect branching, and reproduce by seed") {
  for (unsigned long long seed = 0; seed < 8; ++seed) {
    Rng rng(seed);
    StochasticGame g = random_game(rng, 5, 3, 2, 2, 0.9);
    CHECK(validate_game(g).ok);
    CHECK(g.num_states == 5);
    CHECK(g.num_actions1 == 3);
    CHECK(g.num_actions2 == 2);
    for (int s = 0; s < 5; ++s)
      for (int row = 0; row < 6; ++row) {
        int nonzero = 0;
        for (int sp = 0; sp < 5; ++sp)
          if (g.transition[s](row, sp) > 0.0) nonzero++;
        CHECK(nonzero == 2);
      }
  }

  Rng r1(42), r2(42);
  StochasticGame a = random_game(r1, 4, 2, 3, 3, 0.85);
  StochasticGame b = random_game(r2, 4, 2, 3, 3, 0.85);
  for (int s = 0; s < 4; ++s) {
    CHECK(a.reward1[s] == b.reward1[s]);
    CHECK(a.transition[s] == b.transition[s]);
  }
}

TEST_CASE("game files round-trip byte for byte") {
  StochasticGame g = testing::three_state_game();
  save_game(g, "io_game_a.txt");
  StochasticGame g2 = load_game("io_game_a.txt");
  save_game(g2, "io_game_b.txt");
  CHECK(slurp("io_game_a.txt") == slurp("io_game_b.txt"));
  CHECK(g2.num_states == g.num_states);
  CHECK(g2.discount == g.discount);
  for (int s = 0; s < 3; ++s) {
    CHECK(g2.reward1[s] == g.reward1[s]);
    CHECK(g2.transition[s] == g.transition[s]);
  }
}

TEST_CASE("policy and feature files round-trip byte for byte") {
  JointPolicy pi = JointPolicy::uniform(3, 2, 2);
  pi.pi1(1, 0) = 0.3;
  pi.pi1(1, 1) = 0.7;
  save_policy(pi, "io_policy_a.txt");
  JointPolicy pi2 = load_policy("io_policy_a.txt");
  save_policy(pi2, "io_policy_b.txt");
  CHECK(slurp("io_policy_a.txt") == slurp("io_policy_b.txt"));
  CHECK(pi2.pi1 == pi.pi1);
  CHECK(pi2.pi2 == pi.pi2);

  FeatureMap f = FeatureMap::tabular(3, 2, 2);
  f.phi1(0, 0) = 0.5;
  save_features(f, "io_features_a.txt");
  FeatureMap f2 = load_features("io_features_a.txt");
  save_features(f2, "io_features_b.txt");
  CHECK(slurp("io_features_a.txt") == slurp("io_features_b.txt"));
  CHECK(f2.phi1 == f.phi1);
  CHECK(f2.phi2 == f.phi2);
}

TEST_CASE("loading malformed files reports a configuration error") {
  {
    std::ofstream out("io_bad.txt");
    out << "zsg-game v1\nstates x\n";
  }
  CHECK_THROWS_AS(load_game("io_bad.txt"), std::invalid_argument);
  CHECK_THROWS_AS(load_game("io_missing_file.txt"), std::invalid_argument);
}
