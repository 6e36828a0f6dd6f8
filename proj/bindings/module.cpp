// Python surface for the library. Thin wrappers over the public headers:
// game construction and IO, the exact solvers, the envelope machinery, the
// parameter dynamics audit, and the learner loop. Entry points that consume
// randomness take an integer seed rather than an engine object.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zsg/dynamics.hpp"
#include "zsg/envelope.hpp"
#include "zsg/game.hpp"
#include "zsg/game_io.hpp"
#include "zsg/learner.hpp"
#include "zsg/matrix_game.hpp"
#include "zsg/oracles.hpp"

namespace py = pybind11;
using namespace zsg;

PYBIND11_MODULE(zsgpy, m) {
  m.doc() = "two-player zero-sum stochastic game learning and audit toolkit";

  // ----- games, features, policies -----

  py::class_<StochasticGame>(m, "StochasticGame")
      .def(py::init<>())
      .def_readwrite("num_states", &StochasticGame::num_states)
      .def_readwrite("num_actions1", &StochasticGame::num_actions1)
      .def_readwrite("num_actions2", &StochasticGame::num_actions2)
      .def_readwrite("discount", &StochasticGame::discount)
      .def_readwrite("reward1", &StochasticGame::reward1)
      .def_readwrite("transition", &StochasticGame::transition)
      .def("joint_actions", &StochasticGame::joint_actions)
      .def("row_index", &StochasticGame::row_index, py::arg("a1"), py::arg("a2"));

  py::class_<FeatureMap>(m, "FeatureMap")
      .def(py::init<>())
      .def_readwrite("phi1", &FeatureMap::phi1)
      .def_readwrite("phi2", &FeatureMap::phi2)
      .def("dim", &FeatureMap::dim, py::arg("player"))
      .def_static("tabular", &FeatureMap::tabular, py::arg("num_states"),
                  py::arg("num_actions1"), py::arg("num_actions2"));

  py::class_<JointPolicy>(m, "JointPolicy")
      .def(py::init<>())
      .def_readwrite("pi1", &JointPolicy::pi1)
      .def_readwrite("pi2", &JointPolicy::pi2)
      .def_static("uniform", &JointPolicy::uniform, py::arg("num_states"),
                  py::arg("num_actions1"), py::arg("num_actions2"));

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("ok", &ValidationReport::ok)
      .def_readonly("problems", &ValidationReport::problems);

  m.def("validate_game", &validate_game, py::arg("game"));
  m.def("validate_features", &validate_features, py::arg("game"),
        py::arg("features"));
  m.def(
      "random_game",
      [](unsigned long long seed, int num_states, int num_actions1,
         int num_actions2, int branching, double discount) {
        Rng rng(seed);
        return random_game(rng, num_states, num_actions1, num_actions2,
                           branching, discount);
      },
      py::arg("seed"), py::arg("num_states"), py::arg("num_actions1"),
      py::arg("num_actions2"), py::arg("branching"), py::arg("discount"));

  m.def("softmax", &softmax, py::arg("logits"), py::arg("tau"));
  m.def("policy_from_params", &policy_from_params, py::arg("game"),
        py::arg("features"), py::arg("theta1"), py::arg("theta2"),
        py::arg("tau"));
  m.def("induced_chain", &induced_chain, py::arg("game"), py::arg("policy"));
  m.def("stationary_distribution", &stationary_distribution, py::arg("chain"),
        py::arg("tol") = 1e-10, py::arg("cap") = long(1e6));
  m.def("mixing_time", &mixing_time, py::arg("chain"), py::arg("delta"),
        py::arg("cap") = long(1e6));
  m.def("feature_excitation", &feature_excitation, py::arg("game"),
        py::arg("features"), py::arg("policy"), py::arg("stationary"),
        py::arg("player"));

  m.def("save_game", &save_game, py::arg("path"), py::arg("game"));
  m.def("load_game", &load_game, py::arg("path"));
  m.def("save_policy", &save_policy, py::arg("path"), py::arg("policy"));
  m.def("load_policy", &load_policy, py::arg("path"));
  m.def("save_features", &save_features, py::arg("path"), py::arg("features"));
  m.def("load_features", &load_features, py::arg("path"));

  // ----- matrix games -----

  py::class_<MatrixGamePair>(m, "MatrixGamePair")
      .def(py::init<>())
      .def_readwrite("x1", &MatrixGamePair::x1)
      .def_readwrite("x2", &MatrixGamePair::x2)
      .def("zero_sum_defect", &MatrixGamePair::zero_sum_defect)
      .def_static("zero_sum", &MatrixGamePair::zero_sum, py::arg("payoff1"));

  m.def(
      "random_zero_sum_pair",
      [](unsigned long long seed, int actions1, int actions2, double scale) {
        Rng rng(seed);
        return random_zero_sum_pair(rng, actions1, actions2, scale);
      },
      py::arg("seed"), py::arg("actions1"), py::arg("actions2"),
      py::arg("scale") = 1.0);

  py::class_<MatrixGameSolution>(m, "MatrixGameSolution")
      .def_readonly("value", &MatrixGameSolution::value)
      .def_readonly("row_strategy", &MatrixGameSolution::row_strategy)
      .def_readonly("col_strategy", &MatrixGameSolution::col_strategy)
      .def_readonly("duality_gap", &MatrixGameSolution::duality_gap);

  m.def("solve_matrix_game", &solve_matrix_game, py::arg("payoff"),
        py::arg("gap_tolerance") = 1e-9);

  // ----- envelope -----

  py::class_<EnvelopeConfig>(m, "EnvelopeConfig")
      .def(py::init<>())
      .def_readwrite("tau", &EnvelopeConfig::tau)
      .def_readwrite("mu", &EnvelopeConfig::mu)
      .def_readwrite("inner_tol", &EnvelopeConfig::inner_tol)
      .def_readwrite("inner_cap", &EnvelopeConfig::inner_cap)
      .def_static("with_default_mu", &EnvelopeConfig::with_default_mu,
                  py::arg("tau"));

  m.def("entropy", &entropy, py::arg("u"));
  m.def("smoothed_max", &smoothed_max, py::arg("y"), py::arg("tau"));

  py::class_<ProxSolution>(m, "ProxSolution")
      .def_readonly("u", &ProxSolution::u)
      .def_readonly("log_u", &ProxSolution::log_u)
      .def_readonly("objective", &ProxSolution::objective)
      .def_readonly("kkt_residual", &ProxSolution::kkt_residual)
      .def_readonly("iterations", &ProxSolution::iterations);

  m.def("entropic_prox", &entropic_prox, py::arg("y"), py::arg("b_matrix"),
        py::arg("x"), py::arg("config"));

  py::class_<LyapunovValue>(m, "LyapunovValue")
      .def_readonly("value", &LyapunovValue::value)
      .def_readonly("value1", &LyapunovValue::value1)
      .def_readonly("value2", &LyapunovValue::value2)
      .def_readonly("p", &LyapunovValue::p)
      .def_readonly("q", &LyapunovValue::q);

  m.def("lyapunov_value", &lyapunov_value, py::arg("x1"), py::arg("x2"),
        py::arg("pair"), py::arg("config"));

  py::class_<LyapunovGradient>(m, "LyapunovGradient")
      .def_readonly("grad_x1", &LyapunovGradient::grad_x1)
      .def_readonly("grad_x2", &LyapunovGradient::grad_x2)
      .def_readonly("smoothness", &LyapunovGradient::smoothness)
      .def_readonly("at", &LyapunovGradient::at);

  m.def("lyapunov_gradient", &lyapunov_gradient, py::arg("x1"), py::arg("x2"),
        py::arg("pair"), py::arg("config"));
  m.def("lyapunov_smoothness", &lyapunov_smoothness, py::arg("config"));

  // ----- parameter dynamics -----

  m.def(
      "sbr_policy_step",
      [](Vec pi1, Vec pi2, const MatrixGamePair& pair, double tau, double beta) {
        sbr_policy_step(pi1, pi2, pair, tau, beta);
        return py::make_tuple(pi1, pi2);
      },
      py::arg("pi1"), py::arg("pi2"), py::arg("pair"), py::arg("tau"),
      py::arg("beta"));
  m.def(
      "param_step",
      [](Vec x1, Vec x2, const MatrixGamePair& pair, double tau, double beta,
         const Vec& e1, const Vec& e2) {
        param_step(x1, x2, pair, tau, beta, e1, e2);
        return py::make_tuple(x1, x2);
      },
      py::arg("x1"), py::arg("x2"), py::arg("pair"), py::arg("tau"),
      py::arg("beta"), py::arg("e1"), py::arg("e2"));
  m.def("regularized_nash_gap", &regularized_nash_gap, py::arg("pi1"),
        py::arg("pi2"), py::arg("pair"), py::arg("tau"));

  py::class_<ParamTrajectory>(m, "ParamTrajectory")
      .def_readonly("x1", &ParamTrajectory::x1)
      .def_readonly("x2", &ParamTrajectory::x2)
      .def_readonly("e1", &ParamTrajectory::e1)
      .def_readonly("e2", &ParamTrajectory::e2);

  m.def(
      "simulate_param_dynamics",
      [](const MatrixGamePair& pair, const Vec& x1_0, const Vec& x2_0,
         double tau, double beta, long steps, double noise_scale,
         unsigned long long seed) {
        Rng rng(seed);
        return simulate_param_dynamics(pair, x1_0, x2_0, tau, beta, steps,
                                       noise_scale, rng);
      },
      py::arg("pair"), py::arg("x1_0"), py::arg("x2_0"), py::arg("tau"),
      py::arg("beta"), py::arg("steps"), py::arg("noise_scale") = 0.0,
      py::arg("seed") = 0);

  py::class_<DriftRow>(m, "DriftRow")
      .def_readonly("k", &DriftRow::k)
      .def_readonly("v_k", &DriftRow::v_k)
      .def_readonly("v_next", &DriftRow::v_next)
      .def_readonly("bound", &DriftRow::bound)
      .def_readonly("slack", &DriftRow::slack)
      .def_readonly("noise_x1_norm", &DriftRow::noise_x1_norm)
      .def_readonly("noise_x2_norm", &DriftRow::noise_x2_norm);

  py::class_<DriftAudit>(m, "DriftAudit")
      .def_readonly("rows", &DriftAudit::rows)
      .def_readonly("l_b", &DriftAudit::l_b)
      .def_readonly("min_slack", &DriftAudit::min_slack)
      .def_readonly("certified", &DriftAudit::certified);

  m.def("drift_check", &drift_check, py::arg("trajectory"), py::arg("pair"),
        py::arg("config"), py::arg("beta"), py::arg("tolerance"));

  py::class_<FixedPointResult>(m, "FixedPointResult")
      .def_readonly("x1", &FixedPointResult::x1)
      .def_readonly("x2", &FixedPointResult::x2)
      .def_readonly("residual", &FixedPointResult::residual)
      .def_readonly("steps", &FixedPointResult::steps)
      .def_readonly("converged", &FixedPointResult::converged);

  m.def("solve_smoothed_fixed_point", &solve_smoothed_fixed_point,
        py::arg("pair"), py::arg("tau"), py::arg("beta") = 0.1,
        py::arg("tol") = 1e-11, py::arg("cap") = 2000000L);

  // ----- exact oracles -----

  py::class_<ValueIterationResult>(m, "ValueIterationResult")
      .def_readonly("v", &ValueIterationResult::v)
      .def_readonly("iterations", &ValueIterationResult::iterations)
      .def_readonly("iterates", &ValueIterationResult::iterates)
      .def_readonly("step_norms", &ValueIterationResult::step_norms);

  m.def("minimax_value_iteration", &minimax_value_iteration, py::arg("game"),
        py::arg("player"), py::arg("tol") = 1e-8, py::arg("cap") = 100000L,
        py::arg("gap_tolerance") = 1e-9);

  m.def("backup_tensor", &backup_tensor, py::arg("game"), py::arg("v"),
        py::arg("player"));
  m.def("best_response_value", &best_response_value, py::arg("game"),
        py::arg("policy"), py::arg("player"), py::arg("tol") = 1e-10,
        py::arg("cap") = long(1e6));
  m.def("policy_value", &policy_value, py::arg("game"), py::arg("policy"),
        py::arg("player"));

  py::class_<NashGapResult>(m, "NashGapResult")
      .def_readonly("gap", &NashGapResult::gap)
      .def_readonly("br1", &NashGapResult::br1)
      .def_readonly("br2", &NashGapResult::br2)
      .def_readonly("v1", &NashGapResult::v1)
      .def_readonly("v2", &NashGapResult::v2);

  m.def("nash_gap", &nash_gap, py::arg("game"), py::arg("policy"),
        py::arg("rho") = Vec(), py::arg("tol") = 1e-10);

  m.def("marginal_backup", &marginal_backup, py::arg("game"), py::arg("v"),
        py::arg("policy"), py::arg("player"));
  m.def("target_weights", &target_weights, py::arg("game"), py::arg("features"),
        py::arg("policy"), py::arg("stationary"), py::arg("v"),
        py::arg("player"));
  m.def("completeness_residual", &completeness_residual, py::arg("game"),
        py::arg("features"), py::arg("policy"), py::arg("w_tilde"),
        py::arg("player"), py::arg("radius") = -1.0);

  // ----- learner -----

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("tau", &RunConfig::tau)
      .def_readwrite("alpha", &RunConfig::alpha)
      .def_readwrite("beta", &RunConfig::beta)
      .def_readwrite("radius", &RunConfig::radius)
      .def_readwrite("outer_loops", &RunConfig::outer_loops)
      .def_readwrite("inner_steps", &RunConfig::inner_steps)
      .def_readwrite("initial_state", &RunConfig::initial_state)
      .def_readwrite("instrumented", &RunConfig::instrumented)
      .def_readwrite("diag_every", &RunConfig::diag_every)
      .def_readwrite("track_gap", &RunConfig::track_gap)
      .def_readwrite("gap_every", &RunConfig::gap_every)
      .def_readwrite("record_observations", &RunConfig::record_observations)
      .def_readwrite("rho", &RunConfig::rho);

  py::class_<Observation>(m, "Observation")
      .def_readonly("s", &Observation::s)
      .def_readonly("a_own", &Observation::a_own)
      .def_readonly("reward_own", &Observation::reward_own)
      .def_readonly("s_next", &Observation::s_next);

  py::class_<PlayerState>(m, "PlayerState")
      .def_readonly("w", &PlayerState::w)
      .def_readonly("theta", &PlayerState::theta)
      .def_readonly("wbar", &PlayerState::wbar)
      .def_readonly("thetabar", &PlayerState::thetabar);

  py::class_<DiagnosticRecord>(m, "DiagnosticRecord")
      .def_readonly("t", &DiagnosticRecord::t)
      .def_readonly("k", &DiagnosticRecord::k)
      .def_readonly("l_v", &DiagnosticRecord::l_v)
      .def_readonly("l_sum", &DiagnosticRecord::l_sum)
      .def_readonly("l_theta", &DiagnosticRecord::l_theta)
      .def_readonly("l_w", &DiagnosticRecord::l_w)
      .def_readonly("nash_gap", &DiagnosticRecord::nash_gap)
      .def_readonly("td_rms_1", &DiagnosticRecord::td_rms_1)
      .def_readonly("td_rms_2", &DiagnosticRecord::td_rms_2);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("player1", &RunResult::player1)
      .def_readonly("player2", &RunResult::player2)
      .def_readonly("final_state", &RunResult::final_state)
      .def_readonly("final_policy", &RunResult::final_policy)
      .def_readonly("diagnostics", &RunResult::diagnostics)
      .def_readonly("final_nash_gap", &RunResult::final_nash_gap)
      .def_readonly("l_v_series", &RunResult::l_v_series)
      .def_readonly("l_sum_series", &RunResult::l_sum_series)
      .def_readonly("stream1", &RunResult::stream1)
      .def_readonly("stream2", &RunResult::stream2);

  m.def(
      "run_learner",
      [](const StochasticGame& game, const FeatureMap& features,
         const RunConfig& config, unsigned long long seed) {
        Rng rng(seed);
        return run_learner(game, features, config, rng);
      },
      py::arg("game"), py::arg("features"), py::arg("config"), py::arg("seed"));

  m.def("replay_player", &replay_player, py::arg("features"), py::arg("player"),
        py::arg("num_actions"), py::arg("discount"), py::arg("config"),
        py::arg("stream"));
}
