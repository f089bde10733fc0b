"""Tests for MKV propagation and return calculus."""

import numpy as np
import pytest

from meanfield.core import (
    TabularKernel,
    expected_return,
    kernel_matrix,
    mkv_step,
    monte_carlo_return,
    propagate_flow,
    simulate_population,
    societal_reward,
)
from meanfield.envs import make_env
from meanfield.models.game import MeanField, PerStepPolicy, TimeVaryingPolicy
from meanfield.models.options import FixedPointOptions
from meanfield.solvers import solve_mfne_fixed_point
from meanfield.models.oracles import TransitionKernel
from meanfield.utils.errors import ArgumentError, ContractViolationError, KernelIntegrityError


class LeakyKernel(TransitionKernel):
    """Kernel whose rows sum to 0.9."""

    def __init__(self) -> None:
        super().__init__(2, 1)

    def matrix(self, mu):
        return np.full((2, 1, 2), 0.45)


def test_mkv_step_moves_everyone_left(lr_spec):
    """Test the MKV step on the left-right game."""
    pi = PerStepPolicy(probs=[[1.0, 0.0]] * 3)
    nxt = mkv_step(lr_spec.initial_mean_field, pi, lr_spec.transition)

    np.testing.assert_allclose(nxt.probs, [0.0, 1.0, 0.0])


def test_mkv_step_preserves_mass(random_spec):
    """Test that the MKV step maps distributions to distributions."""
    spec = random_spec(seed=3)
    gen = np.random.default_rng(0)
    for _ in range(20):
        mu = MeanField(probs=gen.dirichlet(np.ones(3)))
        pi = PerStepPolicy(probs=gen.dirichlet(np.ones(2), size=3))
        nxt = mkv_step(mu, pi, spec.transition)
        assert abs(nxt.probs.sum() - 1.0) < 1e-12
        assert np.all(nxt.probs >= 0.0)


def test_mkv_step_rejects_bad_inputs(lr_spec):
    """Test dimension and kernel integrity checks."""
    with pytest.raises(ContractViolationError):
        mkv_step(MeanField.uniform(2), PerStepPolicy.uniform(2, 2), lr_spec.transition)

    with pytest.raises(KernelIntegrityError):
        mkv_step(MeanField.uniform(2), PerStepPolicy.uniform(2, 1), LeakyKernel())

    with pytest.raises(KernelIntegrityError):
        kernel_matrix(TabularKernel(np.full((2, 2, 3), 0.5)), np.array([0.5, 0.5]))


def test_propagate_flow(lr_spec, always_left):
    """Test flow propagation from mu0."""
    flow = propagate_flow(lr_spec, always_left)

    assert flow.horizon == lr_spec.horizon
    np.testing.assert_allclose(flow.probs[0], [0.0, 0.5, 0.5])
    for t in range(1, lr_spec.horizon + 1):
        np.testing.assert_allclose(flow.probs[t], [0.0, 1.0, 0.0])

    with pytest.raises(ContractViolationError):
        propagate_flow(lr_spec, TimeVaryingPolicy.uniform(2, 3, 2))


def test_societal_reward_rock_paper_scissors(rps_spec):
    """Test the societal reward with everyone playing rock against a uniform population."""
    pi = PerStepPolicy(probs=[[1.0, 0.0, 0.0]] * 3)
    value = societal_reward(MeanField.uniform(3), pi, rps_spec.reward)

    assert value == pytest.approx(2.0 / 3.0)


def test_societal_reward_left_right(lr_spec):
    """Test the societal reward of a crowded left-right population."""
    mu = MeanField(probs=[0.0, 1.0, 0.0])
    value = societal_reward(mu, PerStepPolicy.uniform(3, 2), lr_spec.reward)

    assert value == pytest.approx(-1.0)


def test_expected_return_equals_societal_sum(random_spec, random_policy):
    """Test that the agent return on a consistent flow is the discounted societal reward."""
    for seed in range(25):
        spec = random_spec(seed=seed)
        policy = random_policy(spec, seed=seed)
        flow = propagate_flow(spec, policy)

        societal = sum(
            spec.discount**t * societal_reward(flow[t], policy[t], spec.reward)
            for t in range(spec.horizon)
        )
        assert expected_return(spec, flow, policy, spec.reward) == pytest.approx(
            societal, abs=1e-9
        )


def test_expected_return_rejects_mismatched_flow(lr_spec, always_left):
    """Test return dimension checks."""
    flow = propagate_flow(lr_spec, always_left)
    short = TimeVaryingPolicy.uniform(2, 3, 2)

    with pytest.raises(ContractViolationError):
        expected_return(lr_spec, flow, short, lr_spec.reward)


def test_monte_carlo_return_matches_exact(random_spec, random_policy):
    """Test the Monte-Carlo return estimate against the exact return."""
    spec = random_spec(seed=7)
    policy = random_policy(spec, seed=7)
    flow = propagate_flow(spec, policy)

    mean, stderr = monte_carlo_return(spec, flow, policy, rollouts=20000, seed=1)
    exact = expected_return(spec, flow, policy, spec.reward)

    assert stderr > 0.0
    assert abs(mean - exact) <= 4.0 * stderr

    with pytest.raises(ArgumentError):
        monte_carlo_return(spec, flow, policy, rollouts=1, seed=1)


def test_simulate_population_deterministic_kernel(lr_spec, always_left):
    """Test a finite population under deterministic moves."""
    empirical = simulate_population(lr_spec, always_left, num_agents=50, seed=0)

    for t in range(1, lr_spec.horizon + 1):
        np.testing.assert_allclose(empirical.probs[t], [0.0, 1.0, 0.0])


@pytest.mark.slow
def test_simulate_population_matches_flow(random_spec, random_policy):
    """Test that a large population tracks the MKV flow."""
    spec = random_spec(seed=11, horizon=10)
    policy = random_policy(spec, seed=11)
    flow = propagate_flow(spec, policy)

    empirical = simulate_population(spec, policy, num_agents=10000, seed=5)
    total_variation = 0.5 * np.abs(empirical.probs - flow.probs).sum(axis=1)

    assert np.all(total_variation <= 0.02)


def test_per_call_oracle_forms(virus_spec):
    """Test single-transition probabilities, draws and rewards."""
    mu = MeanField(probs=[0.6, 0.4])
    kernel = virus_spec.transition

    np.testing.assert_allclose(kernel.probs(0, 1, mu), [1.0, 0.0])
    assert kernel.sample(0, 1, mu, np.random.default_rng(0)) == 0
    assert virus_spec.reward(1, 1, mu) == pytest.approx(-1.5)

    draws = [kernel.sample(1, 0, mu, np.random.default_rng(seed)) for seed in range(2000)]
    assert abs(np.mean(draws) - 0.7) < 0.05


def test_mkv_step_virus_hand_example(virus_spec):
    """Test one virus step with everyone going out, exactly and by sampling agents."""
    mu = MeanField(probs=[0.5, 0.5])
    go_out = PerStepPolicy(probs=[[1.0, 0.0], [1.0, 0.0]])

    step = mkv_step(mu, go_out, virus_spec.transition)
    np.testing.assert_allclose(step.probs, [0.4475, 0.5525])

    agents = 1_000_000
    states = np.repeat([0, 1], agents // 2)
    nxt = virus_spec.transition.sample_batch(
        states, np.zeros(agents, dtype=int), mu, np.random.default_rng(0)
    )
    assert np.mean(nxt) == pytest.approx(0.5525, abs=2e-3)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["invest", "malware", "virus", "rps", "lr"])
def test_finite_population_approaches_mkv_flow(name):
    """Test that the total-variation gap to the MKV flow shrinks with the population size."""
    spec = make_env(name, horizon=10)
    policy = solve_mfne_fixed_point(spec, FixedPointOptions(damping=0.5)).policy
    flow = propagate_flow(spec, policy)

    def worst_gap(num_agents):
        gaps = []
        for seed in range(3):
            empirical = simulate_population(spec, policy, num_agents=num_agents, seed=seed)
            gaps.append((0.5 * np.abs(empirical.probs - flow.probs).sum(axis=1)).max())
        return np.mean(gaps)

    small, large = worst_gap(100), worst_gap(10_000)

    assert large < small
    assert large <= 0.05
