#include "zsg/game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace zsg {

namespace {
constexpr double kRowSumTol = 1e-12;
constexpr double kRewardTol = 1e-12;
constexpr double kRowNormTol = 1e-12;
} // namespace

FeatureMap FeatureMap::tabular(int num_states, int num_actions1, int num_actions2) {
  FeatureMap f;
  f.phi1 = Mat::Identity(num_states * num_actions1, num_states * num_actions1);
  f.phi2 = Mat::Identity(num_states * num_actions2, num_states * num_actions2);
  return f;
}

JointPolicy JointPolicy::uniform(int num_states, int num_actions1, int num_actions2) {
  JointPolicy p;
  p.pi1 = Mat::Constant(num_states, num_actions1, 1.0 / num_actions1);
  p.pi2 = Mat::Constant(num_states, num_actions2, 1.0 / num_actions2);
  return p;
}

ValidationReport validate_game(const StochasticGame& game) {
  ValidationReport rep;
  auto fail = [&rep](const std::string& msg) {
    rep.ok = false;
    rep.problems.push_back(msg);
  };
  if (game.num_states < 1) fail("num_states must be at least 1");
  if (game.num_actions1 < 1 || game.num_actions2 < 1)
    fail("each player needs at least one action");
  if (!(game.discount >= 0.0 && game.discount < 1.0))
    fail("discount must lie in [0, 1)");
  if (!rep.ok) return rep;

  if (int(game.reward1.size()) != game.num_states)
    fail("reward1 must have one matrix per state");
  if (int(game.transition.size()) != game.num_states)
    fail("transition must have one matrix per state");
  if (!rep.ok) return rep;

  for (int s = 0; s < game.num_states; ++s) {
    const Mat& r = game.reward1[s];
    if (r.rows() != game.num_actions1 || r.cols() != game.num_actions2) {
      fail("reward1[" + std::to_string(s) + "] has wrong shape");
      continue;
    }
    if (r.cwiseAbs().maxCoeff() > 1.0 + kRewardTol)
      fail("reward1[" + std::to_string(s) + "] exceeds magnitude 1");
    const Mat& p = game.transition[s];
    if (p.rows() != game.joint_actions() || p.cols() != game.num_states) {
      fail("transition[" + std::to_string(s) + "] has wrong shape");
      continue;
    }
    for (int row = 0; row < p.rows(); ++row) {
      if (p.row(row).minCoeff() < -kRowSumTol) {
        fail("transition[" + std::to_string(s) + "] row " + std::to_string(row) +
             " has a negative probability");
      }
      double sum = p.row(row).sum();
      if (std::abs(sum - 1.0) > kRowSumTol) {
        fail("transition[" + std::to_string(s) + "] row " + std::to_string(row) +
             " sums to " + std::to_string(sum));
      }
    }
  }
  return rep;
}

namespace {
std::string join_problems(const std::vector<std::string>& problems) {
  std::string all;
  for (const auto& p : problems) {
    if (!all.empty()) all += "; ";
    all += p;
  }
  return all;
}
} // namespace

void require_valid(const StochasticGame& game) {
  ValidationReport rep = validate_game(game);
  if (!rep.ok) throw std::invalid_argument("invalid game: " + join_problems(rep.problems));
}

ValidationReport validate_features(const StochasticGame& game, const FeatureMap& features) {
  ValidationReport rep;
  auto fail = [&rep](const std::string& msg) {
    rep.ok = false;
    rep.problems.push_back(msg);
  };
  auto check = [&](const Mat& phi, int rows_wanted, const char* name) {
    if (phi.rows() != rows_wanted) {
      fail(std::string(name) + " must have one row per (state, action) pair");
      return;
    }
    if (phi.cols() < 1 || phi.cols() > phi.rows()) {
      fail(std::string(name) + " has an invalid column count");
      return;
    }
    for (int r = 0; r < phi.rows(); ++r) {
      if (phi.row(r).norm() > 1.0 + kRowNormTol) {
        fail(std::string(name) + " row " + std::to_string(r) + " has norm above 1");
        return;
      }
    }
    Eigen::ColPivHouseholderQR<Mat> qr(phi);
    if (qr.rank() < phi.cols())
      fail(std::string(name) + " does not have full column rank");
  };
  check(features.phi1, game.num_states * game.num_actions1, "phi1");
  check(features.phi2, game.num_states * game.num_actions2, "phi2");
  return rep;
}

void require_valid(const StochasticGame& game, const FeatureMap& features) {
  ValidationReport rep = validate_features(game, features);
  if (!rep.ok)
    throw std::invalid_argument("invalid features: " + join_problems(rep.problems));
}

Vec softmax(const Vec& logits, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("softmax temperature must be positive");
  Vec z = (logits.array() - logits.maxCoeff()) / tau;
  Vec e = z.array().exp();
  return e / e.sum();
}

JointPolicy policy_from_params(const StochasticGame& game, const FeatureMap& features,
                               const Vec& theta1, const Vec& theta2, double tau) {
  JointPolicy pol;
  pol.pi1.resize(game.num_states, game.num_actions1);
  pol.pi2.resize(game.num_states, game.num_actions2);
  for (int s = 0; s < game.num_states; ++s) {
    pol.pi1.row(s) =
        softmax(features.state_rows(1, s, game.num_actions1) * theta1, tau).transpose();
    pol.pi2.row(s) =
        softmax(features.state_rows(2, s, game.num_actions2) * theta2, tau).transpose();
  }
  return pol;
}

int sample_index(const Vec& distribution, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  double acc = 0.0;
  int last = int(distribution.size()) - 1;
  for (int i = 0; i <= last; ++i) {
    acc += distribution[i];
    if (u < acc) return i;
  }
  return last;  // guards against accumulated rounding at u ~ 1
}

TransitionSample sample_transition(const StochasticGame& game, int s, int a1, int a2,
                                   Rng& rng) {
  TransitionSample out;
  out.reward1 = game.reward1[s](a1, a2);
  out.next_state = sample_index(game.transition[s].row(game.row_index(a1, a2)), rng);
  return out;
}

Mat induced_chain(const StochasticGame& game, const JointPolicy& policy) {
  Mat chain = Mat::Zero(game.num_states, game.num_states);
  for (int s = 0; s < game.num_states; ++s) {
    for (int a1 = 0; a1 < game.num_actions1; ++a1) {
      for (int a2 = 0; a2 < game.num_actions2; ++a2) {
        chain.row(s) += policy.pi1(s, a1) * policy.pi2(s, a2) *
                        game.transition[s].row(game.row_index(a1, a2));
      }
    }
  }
  return chain;
}

Vec stationary_distribution(const Mat& chain, double tol, long max_iterations) {
  const int n = int(chain.rows());
  Vec mu = Vec::Constant(n, 1.0 / n);
  for (long it = 0; it < max_iterations; ++it) {
    Vec next = chain.transpose() * mu;
    next /= next.sum();  // guard against drift from rounding
    double change = (next - mu).cwiseAbs().sum();
    mu = next;
    if (change <= tol) return mu;
  }
  throw std::runtime_error(
      "stationary_distribution: power iteration did not converge; "
      "the policy-induced chain may not mix");
}

long mixing_time(const Mat& chain, double delta, long cap) {
  Vec mu = stationary_distribution(chain);
  Mat pk = chain;
  for (long k = 1; k <= cap; ++k) {
    double worst = 0.0;
    for (int s = 0; s < pk.rows(); ++s) {
      double tv = 0.5 * (pk.row(s).transpose() - mu).cwiseAbs().sum();
      worst = std::max(worst, tv);
    }
    if (worst <= delta) return k;
    pk = pk * chain;
  }
  throw std::runtime_error("mixing_time: cap exceeded before reaching delta");
}

double feature_excitation(const StochasticGame& game, const FeatureMap& features,
                          const JointPolicy& policy, const Vec& stationary, int player) {
  const Mat& phi = features.phi(player);
  const Mat& pi = player == 1 ? policy.pi1 : policy.pi2;
  const int num_actions = player == 1 ? game.num_actions1 : game.num_actions2;
  Mat gram = Mat::Zero(phi.cols(), phi.cols());
  for (int s = 0; s < game.num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      double weight = stationary[s] * pi(s, a);
      gram.noalias() += weight * phi.row(s * num_actions + a).transpose() *
                        phi.row(s * num_actions + a);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  return eig.eigenvalues().minCoeff();
}

ChainDiagnostics chain_diagnostics(const StochasticGame& game, const FeatureMap& features,
                                   const JointPolicy& probe_policy, double delta,
                                   double tau, double param_radius, int num_samples,
                                   Rng& rng) {
  ChainDiagnostics diag;
  Mat chain = induced_chain(game, probe_policy);
  diag.stationary = stationary_distribution(chain);
  diag.mixing_steps = mixing_time(chain, delta);
  diag.excitation1 =
      feature_excitation(game, features, probe_policy, diag.stationary, 1);
  diag.excitation2 =
      feature_excitation(game, features, probe_policy, diag.stationary, 2);
  diag.excitation_floor = std::min(diag.excitation1, diag.excitation2);

  // Random parameter policies probe how badly a softmax policy within the
  // radius can starve a feature direction. Gaussian directions scaled to a
  // uniform radius keep the draw count independent of the feature dimension.
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int n = 0; n < num_samples; ++n) {
    auto draw = [&](int dim) {
      Vec t(dim);
      for (int i = 0; i < dim; ++i) t[i] = gauss(rng);
      double norm = t.norm();
      if (norm > 0) t *= (param_radius * unif(rng)) / norm;
      return t;
    };
    Vec t1 = draw(features.dim(1));
    Vec t2 = draw(features.dim(2));
    JointPolicy pol = policy_from_params(game, features, t1, t2, tau);
    Vec st = stationary_distribution(induced_chain(game, pol));
    diag.excitation_floor =
        std::min({diag.excitation_floor,
                  feature_excitation(game, features, pol, st, 1),
                  feature_excitation(game, features, pol, st, 2)});
  }
  return diag;
}

StochasticGame random_game(Rng& rng, int num_states, int num_actions1, int num_actions2,
                           int branching, double discount) {
  if (num_states < 1 || num_actions1 < 1 || num_actions2 < 1)
    throw std::invalid_argument("random_game: dimensions must be positive");
  if (branching < 1 || branching > num_states)
    throw std::invalid_argument("random_game: branching must be in [1, num_states]");
  if (!(discount >= 0.0 && discount < 1.0))
    throw std::invalid_argument("random_game: discount must lie in [0, 1)");

  StochasticGame game;
  game.num_states = num_states;
  game.num_actions1 = num_actions1;
  game.num_actions2 = num_actions2;
  game.discount = discount;
  game.reward1.resize(num_states);
  game.transition.resize(num_states);

  std::uniform_real_distribution<double> reward_dist(-1.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> pool(num_states);

  for (int s = 0; s < num_states; ++s) {
    game.reward1[s].resize(num_actions1, num_actions2);
    game.transition[s] = Mat::Zero(num_actions1 * num_actions2, num_states);
    for (int a1 = 0; a1 < num_actions1; ++a1) {
      for (int a2 = 0; a2 < num_actions2; ++a2) {
        game.reward1[s](a1, a2) = reward_dist(rng);

        // Partial Fisher-Yates draw of `branching` distinct successors.
        std::iota(pool.begin(), pool.end(), 0);
        for (int j = 0; j < branching; ++j) {
          std::uniform_int_distribution<int> pick(j, num_states - 1);
          std::swap(pool[j], pool[pick(rng)]);
        }

        // Stick-breaking probabilities: gaps between sorted uniforms.
        std::vector<double> cuts(branching + 1);
        cuts.front() = 0.0;
        cuts.back() = 1.0;
        for (int j = 1; j < branching; ++j) cuts[j] = unif(rng);
        std::sort(cuts.begin(), cuts.end());
        for (int j = 0; j < branching; ++j) {
          game.transition[s](game.row_index(a1, a2), pool[j]) = cuts[j + 1] - cuts[j];
        }
      }
    }
  }
  return game;
}

} // namespace zsg
