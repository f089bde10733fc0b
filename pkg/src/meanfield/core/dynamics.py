"""Forward MFG calculus: MKV propagation, societal reward and expected returns."""

from __future__ import annotations

from typing import Optional

import numpy as np

from meanfield.models.game import MeanField, MeanFieldFlow, PerStepPolicy, TimeVaryingPolicy
from meanfield.models.oracles import RewardOracle, TransitionKernel, sample_categorical
from meanfield.models.spec import MfgSpec
from meanfield.utils.config import get_settings
from meanfield.utils.errors import ArgumentError, ContractViolationError, KernelIntegrityError
from meanfield.utils.logger import get_logger

logger = get_logger(__name__)


def check_compatible(
    spec: MfgSpec,
    flow: Optional[MeanFieldFlow] = None,
    policy: Optional[TimeVaryingPolicy] = None,
) -> None:
    """
    Check that a flow and/or policy match the dimensions of ``spec``.

    Raises:
        ContractViolationError: On any length or size mismatch
    """
    expected_steps = spec.horizon + 1
    if flow is not None and flow.probs.shape != (expected_steps, spec.num_states):
        raise ContractViolationError(
            f"flow has shape {flow.probs.shape}, expected {(expected_steps, spec.num_states)}"
        )
    if policy is not None and policy.probs.shape != (
        expected_steps,
        spec.num_states,
        spec.num_actions,
    ):
        raise ContractViolationError(
            f"policy has shape {policy.probs.shape}, "
            f"expected {(expected_steps, spec.num_states, spec.num_actions)}"
        )


def kernel_matrix(kernel: TransitionKernel, mu: np.ndarray) -> np.ndarray:
    """Return ``kernel.matrix(mu)`` after checking that every row is a distribution."""
    matrix = np.asarray(kernel.matrix(mu), dtype=np.float64)
    expected = (kernel.num_states, kernel.num_actions, kernel.num_states)
    if matrix.shape != expected:
        raise KernelIntegrityError(f"kernel returned shape {matrix.shape}, expected {expected}")
    tol = get_settings().simplex_tol
    if not np.all(np.isfinite(matrix)) or np.any(matrix < -tol):
        raise KernelIntegrityError("kernel returned negative or non-finite probabilities")
    deviation = np.max(np.abs(matrix.sum(axis=-1) - 1.0))
    if deviation > tol:
        raise KernelIntegrityError(f"kernel rows do not sum to 1 (max deviation {deviation:.3e})")
    return matrix


def _step_probs(mu: np.ndarray, pi: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    nxt = np.einsum("s,sa,sax->x", mu, pi, matrix)
    nxt = np.maximum(nxt, 0.0)
    return nxt / nxt.sum()


def mkv_step(mu: MeanField, pi: PerStepPolicy, kernel: TransitionKernel) -> MeanField:
    """
    Advance the mean field by one step of the McKean-Vlasov equation.

    mu'(s') = sum_s mu(s) sum_a pi(a|s) P(s'|s,a,mu)

    Args:
        mu: Current mean field
        pi: Per-step policy played by the whole population
        kernel: Transition kernel

    Returns:
        Next mean field

    Raises:
        ContractViolationError: If the dimensions disagree
        KernelIntegrityError: If the kernel does not return distributions
    """
    if mu.num_states != kernel.num_states or pi.probs.shape != (
        kernel.num_states,
        kernel.num_actions,
    ):
        raise ContractViolationError(
            f"mean field of size {mu.num_states} and policy of shape {pi.probs.shape} "
            f"do not match a kernel of size {(kernel.num_states, kernel.num_actions)}"
        )
    return MeanField(probs=_step_probs(mu.probs, pi.probs, kernel_matrix(kernel, mu.probs)))


def propagate_probs(spec: MfgSpec, policy: np.ndarray) -> np.ndarray:
    """Array form of :func:`propagate_flow`; ``policy`` is (T+1, |S|, |A|)."""
    flow = np.empty((spec.horizon + 1, spec.num_states))
    flow[0] = spec.initial_mean_field.probs
    for t in range(spec.horizon):
        flow[t + 1] = _step_probs(flow[t], policy[t], kernel_matrix(spec.transition, flow[t]))
    return flow


def propagate_flow(spec: MfgSpec, policy: TimeVaryingPolicy) -> MeanFieldFlow:
    """Return the mean field flow induced when every agent plays ``policy`` from mu0."""
    check_compatible(spec, policy=policy)
    return MeanFieldFlow(probs=propagate_probs(spec, policy.probs))


def societal_reward(mu: MeanField, pi: PerStepPolicy, reward: RewardOracle) -> float:
    """Population-average reward sum_s mu(s) sum_a pi(a|s) r(s,a,mu)."""
    if mu.num_states != reward.num_states or pi.probs.shape != (
        reward.num_states,
        reward.num_actions,
    ):
        raise ContractViolationError("mean field, policy and reward dimensions disagree")
    return float(np.einsum("s,sa,sa->", mu.probs, pi.probs, reward.table(mu.probs)))


def expected_return(
    spec: MfgSpec,
    flow: MeanFieldFlow,
    policy: TimeVaryingPolicy,
    reward: RewardOracle,
) -> float:
    """
    Expected discounted return of a representative agent against a fixed flow.

    The agent starts from mu0 and evolves under ``policy`` with the kernel evaluated at
    the flow, so the return is exact and does not require a consistent flow.

    Args:
        spec: Game definition (dynamics, mu0, discount)
        flow: Population flow the agent plays against
        policy: The agent's policy
        reward: Reward oracle

    Returns:
        sum_{t<T} gamma^t E[r(s_t, a_t, mu_t)]
    """
    check_compatible(spec, flow=flow, policy=policy)
    return visitation_return(spec, flow.probs, policy.probs, reward)


def visitation_return(
    spec: MfgSpec, flow: np.ndarray, policy: np.ndarray, reward: RewardOracle
) -> float:
    """Array form of :func:`expected_return`."""
    visitation = spec.initial_mean_field.probs.copy()
    total = 0.0
    for t in range(spec.horizon):
        mu = flow[t]
        joint = visitation[:, None] * policy[t]
        total += spec.discount**t * float(np.sum(joint * reward.table(mu)))
        visitation = np.einsum("sa,sax->x", joint, kernel_matrix(spec.transition, mu))
    return total


def monte_carlo_return(
    spec: MfgSpec,
    flow: MeanFieldFlow,
    policy: TimeVaryingPolicy,
    rollouts: int,
    seed: int,
    reward: Optional[RewardOracle] = None,
) -> tuple[float, float]:
    """
    Estimate the expected return by sampling independent agent trajectories.

    Returns:
        Sample mean and its standard error
    """
    if rollouts < 2:
        raise ArgumentError("monte carlo estimation needs at least two rollouts")
    check_compatible(spec, flow=flow, policy=policy)
    reward = reward if reward is not None else spec.require_reward()
    rng = np.random.default_rng(seed)

    states = sample_categorical(
        np.broadcast_to(spec.initial_mean_field.probs, (rollouts, spec.num_states)), rng
    )
    returns = np.zeros(rollouts)
    for t in range(spec.horizon):
        mu = flow.probs[t]
        actions = sample_categorical(policy.probs[t][states], rng)
        returns += spec.discount**t * reward.table(mu)[states, actions]
        states = spec.transition.sample_batch(states, actions, mu, rng)

    return float(returns.mean()), float(returns.std(ddof=1) / np.sqrt(rollouts))


def simulate_population(
    spec: MfgSpec, policy: TimeVaryingPolicy, num_agents: int, seed: int
) -> MeanFieldFlow:
    """
    Simulate a finite population whose kernel sees the empirical mean field.

    Returns:
        Empirical state distribution of the ``num_agents`` agents at every step
    """
    if num_agents < 1:
        raise ArgumentError("num_agents must be positive")
    check_compatible(spec, policy=policy)
    rng = np.random.default_rng(seed)

    states = sample_categorical(
        np.broadcast_to(spec.initial_mean_field.probs, (num_agents, spec.num_states)), rng
    )
    empirical = np.empty((spec.horizon + 1, spec.num_states))
    for t in range(spec.horizon + 1):
        empirical[t] = np.bincount(states, minlength=spec.num_states) / num_agents
        if t == spec.horizon:
            break
        actions = sample_categorical(policy.probs[t][states], rng)
        states = spec.transition.sample_batch(states, actions, empirical[t], rng)

    logger.debug(f"Simulated {num_agents} agents over {spec.horizon} steps for '{spec.name}'")
    return MeanFieldFlow(probs=empirical)
