"""Tests for the MFNE fixed point and the MFSO reduced-MDP ascent."""

import numpy as np
import pytest

from meanfield.core import ConstantReward, propagate_flow
from meanfield.envs import make_env
from meanfield.models.options import FixedPointOptions, MfsoOptions
from meanfield.solvers import (
    GroundTruthObjective,
    SocietalObjective,
    flow_mse,
    optimize_reduced_mdp,
    reduced_mdp_value_and_grad,
    solve_mfne_fixed_point,
    solve_mfso,
)
from meanfield.utils.errors import ArgumentError, TrainingDivergenceError


class NanObjective(SocietalObjective):
    def values(self, flow, policy):
        return np.full(flow.shape[0], np.nan)

    def gradients(self, flow, policy):
        return np.zeros_like(flow), np.zeros_like(policy)


def _finite_difference(spec, objective, scores, eps=1e-6):
    grad = np.zeros_like(scores)
    for index in np.ndindex(scores.shape):
        bump = np.zeros_like(scores)
        bump[index] = eps
        plus, _ = reduced_mdp_value_and_grad(spec, objective, scores + bump)
        minus, _ = reduced_mdp_value_and_grad(spec, objective, scores - bump)
        grad[index] = (plus - minus) / (2 * eps)
    return grad


def test_flow_mse():
    """Test the normalized flow change."""
    old = np.full((4, 2), 0.5)
    new = old.copy()
    new[0] = [1.0, 0.0]
    assert flow_mse(new, old) == 0.0

    new[2] = [0.8, 0.2]
    assert flow_mse(new, old) == pytest.approx((0.09 + 0.09) / (2 * 2))


@pytest.mark.parametrize("name", ["lr", "virus"])
def test_fixed_point_is_consistent(name):
    """Test that the damped fixed point converges to a consistent, unexploitable pair."""
    spec = make_env(name, horizon=5)
    result = solve_mfne_fixed_point(spec, FixedPointOptions(damping=0.5))

    np.testing.assert_allclose(result.flow.probs, propagate_flow(spec, result.policy).probs)
    assert result.solver == "mfne"
    assert result.converged
    assert result.exploitability <= 1e-6


def test_damped_fixed_point_converges_on_long_virus_game():
    """Test the virus game at T = 50, where undamped best responses oscillate."""
    spec = make_env("virus", horizon=50)

    undamped = solve_mfne_fixed_point(spec, FixedPointOptions(max_iters=300))
    damped = solve_mfne_fixed_point(spec, FixedPointOptions(damping=0.5))

    assert not undamped.converged
    assert damped.converged
    assert damped.exploitability <= 1e-6


def test_fixed_point_left_right_converges_immediately(lr_spec):
    """Test that the evenly split left-right population is already an equilibrium."""
    result = solve_mfne_fixed_point(lr_spec)

    assert result.converged
    assert result.exploitability <= 1e-6
    np.testing.assert_allclose(result.flow.probs[1:], np.tile([0.0, 0.5, 0.5], (5, 1)))


def test_soft_fixed_point_with_damping(virus_spec):
    """Test the Boltzmann variant with damping."""
    opts = FixedPointOptions(beta_soft=5.0, damping=0.5, max_iters=200)
    result = solve_mfne_fixed_point(virus_spec, opts)

    np.testing.assert_allclose(result.flow.probs, propagate_flow(virus_spec, result.policy).probs)
    assert result.iterations <= 200


def test_fixed_point_requires_reward(lr_spec):
    """Test that solving needs a ground-truth reward."""
    with pytest.raises(ArgumentError):
        solve_mfne_fixed_point(lr_spec.without_reward())


@pytest.mark.parametrize("name", ["lr", "virus"])
def test_reduced_mdp_gradient_matches_finite_differences(name):
    """Test the reverse-accumulated gradient, including kernel mean-field derivatives."""
    spec = make_env(name, horizon=4)
    objective = GroundTruthObjective(spec.reward)
    scores = np.random.default_rng(0).normal(size=(5, spec.num_states, spec.num_actions))

    _, grad = reduced_mdp_value_and_grad(spec, objective, scores)
    numeric = _finite_difference(spec, objective, scores)

    np.testing.assert_allclose(grad, numeric, rtol=1e-4, atol=1e-7)


def test_reduced_mdp_gradient_with_mean_field_reward(random_spec):
    """Test the gradient when the reward depends on the mean field."""
    spec = random_spec(seed=21)
    objective = GroundTruthObjective(spec.reward)
    scores = np.random.default_rng(1).normal(size=(spec.horizon + 1, 3, 2))

    _, grad = reduced_mdp_value_and_grad(spec, objective, scores)

    np.testing.assert_allclose(
        grad, _finite_difference(spec, objective, scores), rtol=1e-4, atol=1e-7
    )


def test_constant_reward_is_already_optimal(lr_spec):
    """Test that a constant societal reward leaves the uniform policy unchanged."""
    spec = lr_spec.with_reward(ConstantReward(3, 2, 2.0))
    solution = optimize_reduced_mdp(spec, GroundTruthObjective(spec.reward))

    assert solution.converged
    assert solution.steps == 0
    assert solution.value == pytest.approx(2.0 * sum(0.99**t for t in range(5)))
    np.testing.assert_allclose(solution.policy.probs, 0.5)


def test_mfso_left_right_optimum():
    """Test the social optimum of the left-right game at T = 3."""
    spec = make_env("lr", horizon=3)
    result = solve_mfso(spec)

    assert result.solver == "mfso"
    assert result.expected_return == pytest.approx(-0.5 * (1 + 0.99 + 0.99**2), abs=1e-6)
    np.testing.assert_allclose(result.flow.probs, propagate_flow(spec, result.policy).probs)


@pytest.mark.parametrize("name", ["invest", "malware", "virus", "rps", "lr"])
def test_mfso_dominates_mfne(name):
    """Test that the social optimum reached from uniform policies beats the Nash equilibrium."""
    spec = make_env(name, horizon=5)

    mfne = solve_mfne_fixed_point(spec, FixedPointOptions(damping=0.5))
    mfso = solve_mfso(spec)

    assert mfso.expected_return >= mfne.expected_return - 1e-6


@pytest.mark.parametrize("name", ["invest", "rps", "virus"])
def test_mfso_ascent_never_decreases(name):
    """Test that every accepted ascent step keeps or raises the societal return."""
    spec = make_env(name, horizon=5)
    solution = optimize_reduced_mdp(
        spec, GroundTruthObjective(spec.reward), MfsoOptions(max_steps=100)
    )

    assert len(solution.history) == solution.steps + 1
    assert np.all(np.diff(solution.history) >= 0.0)
    assert solution.value == solution.history[-1]


def test_mfso_warm_start(virus_spec):
    """Test that a warm start from a solution does not lose value."""
    first = solve_mfso(virus_spec, MfsoOptions(max_steps=50))
    second = solve_mfso(virus_spec, MfsoOptions(max_steps=50), init_policy=first.policy)

    assert second.expected_return >= first.expected_return - 1e-6


def test_reduced_mdp_divergence(lr_spec):
    """Test that a non-finite objective is reported with its step."""
    with pytest.raises(TrainingDivergenceError) as excinfo:
        optimize_reduced_mdp(lr_spec, NanObjective())

    assert excinfo.value.location == (0,)
