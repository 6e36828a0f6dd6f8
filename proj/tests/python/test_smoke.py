"""Smoke tests for the zsgpy module and the command line binary."""

import os
import subprocess

import numpy as np
import pytest

import zsgpy


def test_matrix_game_symmetric_value():
    payoff = np.array([[1.0, -1.0], [-1.0, 1.0]])
    sol = zsgpy.solve_matrix_game(payoff)
    assert abs(sol.value) <= 1e-9
    assert sol.duality_gap <= 1e-9
    assert np.allclose(sol.row_strategy, [0.5, 0.5], atol=1e-9)


def test_value_iteration_antisymmetry():
    game = zsgpy.random_game(3, 3, 2, 2, 2, 0.9)
    run1 = zsgpy.minimax_value_iteration(game, 1, tol=1e-10)
    run2 = zsgpy.minimax_value_iteration(game, 2, tol=1e-10)
    assert np.max(np.abs(np.asarray(run1.v) + np.asarray(run2.v))) <= 1e-8
    gap = zsgpy.nash_gap(game, zsgpy.JointPolicy.uniform(3, 2, 2))
    assert gap.gap >= -1e-12


def test_envelope_value_and_gradient():
    pair = zsgpy.random_zero_sum_pair(5, 3, 3)
    cfg = zsgpy.EnvelopeConfig.with_default_mu(0.5)
    x1 = np.array([0.3, -0.2, 0.1])
    x2 = np.array([-0.1, 0.4, 0.0])
    lv = zsgpy.lyapunov_value(x1, x2, pair, cfg)
    assert lv.value >= -1e-10
    grad = zsgpy.lyapunov_gradient(x1, x2, pair, cfg)
    assert np.asarray(grad.grad_x1).shape == (3,)
    assert grad.smoothness > 0.0


def test_drift_certificate_noise_free():
    pair = zsgpy.random_zero_sum_pair(9, 2, 3)
    traj = zsgpy.simulate_param_dynamics(
        pair, np.array([0.4, -0.3]), np.array([0.2, 0.1, -0.5]),
        tau=0.5, beta=0.01, steps=200)
    audit = zsgpy.drift_check(traj, pair, zsgpy.EnvelopeConfig.with_default_mu(0.5),
                              0.01, 1e-8)
    assert audit.certified
    assert audit.min_slack >= -1e-8


def test_learner_round_trip():
    game = zsgpy.random_game(1, 2, 2, 2, 2, 0.8)
    features = zsgpy.FeatureMap.tabular(2, 2, 2)
    cfg = zsgpy.RunConfig()
    cfg.outer_loops = 2
    cfg.inner_steps = 50
    cfg.radius = 10.0
    result = zsgpy.run_learner(game, features, cfg, 0)
    pi1 = np.asarray(result.final_policy.pi1)
    assert pi1.shape == (2, 2)
    assert np.allclose(pi1.sum(axis=1), 1.0)
    assert np.isfinite(zsgpy.nash_gap(game, result.final_policy).gap)


def test_tabular_completeness_is_exact():
    game = zsgpy.random_game(2, 2, 2, 2, 2, 0.7)
    features = zsgpy.FeatureMap.tabular(2, 2, 2)
    policy = zsgpy.JointPolicy.uniform(2, 2, 2)
    w = np.array([0.4, -0.9, 1.3, 0.2])
    assert zsgpy.completeness_residual(game, features, policy, w, 1) <= 1e-12


@pytest.mark.skipif("ZSG_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_gen_and_vi(tmp_path):
    cli = os.environ["ZSG_CLI"]
    game_path = tmp_path / "smoke.game"
    out = subprocess.run(
        [cli, "gen", "--states", "3", "--seed", "5", "-o", str(game_path)],
        capture_output=True, text=True, check=True)
    assert str(game_path) in out.stdout
    subprocess.run(
        [cli, "vi", str(game_path), "-o", str(tmp_path / "vi")],
        capture_output=True, text=True, check=True)
    header = (tmp_path / "vi_values.csv").read_text().splitlines()[0]
    assert header == "s,v1,v2,v_sum"
