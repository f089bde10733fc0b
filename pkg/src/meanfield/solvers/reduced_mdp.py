"""
Gradient ascent on the reduced MDP.

The reduced MDP has mean fields as states and per-step policies as actions. Its
transition is the deterministic MKV step, so from a fixed mu0 an open-loop sequence of
per-step policies is sufficient. Policies are softmax images of unconstrained scores and
the exact gradient is obtained by reverse accumulation through the MKV recursion.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Optional

import numpy as np
from scipy.special import softmax

from meanfield.core.dynamics import kernel_matrix, propagate_probs
from meanfield.models.game import MeanFieldFlow, TimeVaryingPolicy
from meanfield.models.options import MfsoOptions
from meanfield.models.oracles import RewardOracle
from meanfield.models.results import ReducedMdpSolution
from meanfield.models.spec import MfgSpec
from meanfield.utils.errors import ContractViolationError, TrainingDivergenceError
from meanfield.utils.logger import get_logger

logger = get_logger(__name__)


class SocietalObjective(ABC):
    """Per-step societal reward g(mu_t, pi_t) evaluated for a batch of steps."""

    @abstractmethod
    def values(self, flow: np.ndarray, policy: np.ndarray) -> np.ndarray:
        """Return g for K steps given a (K, |S|) flow and a (K, |S|, |A|) policy."""

    @abstractmethod
    def gradients(self, flow: np.ndarray, policy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return the partial derivatives of g with respect to mu (K, |S|) and pi (K, |S|, |A|)."""


class GroundTruthObjective(SocietalObjective):
    """g(mu, pi) = sum_s mu(s) sum_a pi(a|s) r(s, a, mu) for an individual reward oracle."""

    def __init__(self, reward: RewardOracle) -> None:
        self.reward = reward

    def values(self, flow: np.ndarray, policy: np.ndarray) -> np.ndarray:
        return np.array(
            [np.einsum("s,sa,sa->", mu, pi, self.reward.table(mu)) for mu, pi in zip(flow, policy)]
        )

    def gradients(self, flow: np.ndarray, policy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        grad_mu = np.empty_like(flow)
        grad_pi = np.empty_like(policy)
        for t, (mu, pi) in enumerate(zip(flow, policy)):
            table = self.reward.table(mu)
            jacobian = self.reward.mean_field_jacobian(mu)
            grad_mu[t] = np.sum(pi * table, axis=1) + np.einsum("s,sa,say->y", mu, pi, jacobian)
            grad_pi[t] = mu[:, None] * table
        return grad_mu, grad_pi


def reduced_mdp_value_and_grad(
    spec: MfgSpec, objective: SocietalObjective, scores: np.ndarray
) -> tuple[float, np.ndarray]:
    """
    Objective sum_{t<T} gamma^t g(mu_t, pi_t) of softmax(scores) and its gradient.

    Args:
        spec: Game whose dynamics and mu0 are used
        objective: Societal objective
        scores: Policy scores of shape (T+1, |S|, |A|)

    Returns:
        Objective value and its gradient with respect to ``scores``
    """
    horizon = spec.horizon
    if scores.shape != (horizon + 1, spec.num_states, spec.num_actions):
        raise ContractViolationError(f"scores have shape {scores.shape}")
    policy = softmax(scores, axis=-1)

    flow = np.empty((horizon + 1, spec.num_states))
    flow[0] = spec.initial_mean_field.probs
    kernels = []
    for t in range(horizon):
        matrix = kernel_matrix(spec.transition, flow[t])
        kernels.append(matrix)
        flow[t + 1] = np.einsum("s,sa,sax->x", flow[t], policy[t], matrix)

    discounts = spec.discount ** np.arange(horizon)
    value = float(discounts @ objective.values(flow[:horizon], policy[:horizon]))
    partial_mu, partial_pi = objective.gradients(flow[:horizon], policy[:horizon])

    # costate: total derivative of the objective with respect to mu_{t+1}
    costate = np.zeros(spec.num_states)
    grad_pi = np.zeros_like(policy)
    for t in reversed(range(horizon)):
        mu, pi, matrix = flow[t], policy[t], kernels[t]
        grad_pi[t] = discounts[t] * partial_pi[t] + mu[:, None] * (matrix @ costate)
        step_jacobian = np.einsum("ya,yax->xy", pi, matrix) + np.einsum(
            "s,sa,saxy->xy", mu, pi, spec.transition.mean_field_jacobian(mu)
        )
        costate = discounts[t] * partial_mu[t] + costate @ step_jacobian

    centered = grad_pi - np.sum(policy * grad_pi, axis=-1, keepdims=True)
    return value, policy * centered


def optimize_reduced_mdp(
    spec: MfgSpec,
    objective: SocietalObjective,
    opts: Optional[MfsoOptions] = None,
    init_scores: Optional[np.ndarray] = None,
) -> ReducedMdpSolution:
    """
    Maximize a societal objective over open-loop policy sequences.

    Each step tries the current learning rate and halves it (at most ``max_halvings``
    times) until the objective does not decrease; an accepted step doubles the rate for
    the next one, up to ``2 ** max_halvings`` times the base rate.

    Args:
        spec: Game dynamics
        objective: Societal objective to maximize
        opts: Ascent options
        init_scores: Warm-start scores, zeros (uniform policies) by default

    Returns:
        Final scores, the induced policy and flow, and the objective history

    Raises:
        TrainingDivergenceError: If the objective or its gradient becomes non-finite
    """
    opts = opts or MfsoOptions()
    shape = (spec.horizon + 1, spec.num_states, spec.num_actions)
    scores = np.zeros(shape) if init_scores is None else np.array(init_scores, dtype=np.float64)
    if scores.shape != shape:
        raise ContractViolationError(f"initial scores must have shape {shape}")

    value, grad = reduced_mdp_value_and_grad(spec, objective, scores)
    history = [value]
    max_rate = opts.learning_rate * 2.0**opts.max_halvings
    rate = opts.learning_rate
    converged = False
    step = 0

    for step in range(opts.max_steps):
        if not np.isfinite(value) or not np.all(np.isfinite(grad)):
            raise TrainingDivergenceError("non-finite reduced MDP objective or gradient", (step,))
        if np.linalg.norm(grad) <= opts.grad_tol:
            converged = True
            break

        accepted = False
        for _ in range(opts.max_halvings + 1):
            candidate = scores + rate * grad
            cand_value, cand_grad = reduced_mdp_value_and_grad(spec, objective, candidate)
            if np.isfinite(cand_value) and cand_value >= value:
                accepted = True
                break
            rate /= 2.0
        if not accepted:
            logger.debug(f"Reduced MDP ascent stalled at step {step}, value {value:.6g}")
            converged = True
            break

        scores, value, grad = candidate, cand_value, cand_grad
        history.append(value)
        rate = min(2.0 * rate, max_rate)
    else:
        step = opts.max_steps

    policy = softmax(scores, axis=-1)
    logger.debug(
        f"Reduced MDP ascent finished after {step} steps, value {value:.6g}, converged={converged}"
    )
    return ReducedMdpSolution(
        scores=scores,
        policy=TimeVaryingPolicy(probs=policy),
        flow=MeanFieldFlow(probs=propagate_probs(spec, policy)),
        value=value,
        steps=step,
        converged=converged,
        history=history,
    )
