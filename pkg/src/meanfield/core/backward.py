"""Backward induction: greedy and Boltzmann best responses to a fixed flow."""

from __future__ import annotations

from collections.abc import Callable
from typing import Optional

import numpy as np
from scipy.special import softmax

from meanfield.core.dynamics import check_compatible, kernel_matrix, visitation_return
from meanfield.models.game import ActionValueTable, MeanFieldFlow, TimeVaryingPolicy
from meanfield.models.oracles import RewardOracle
from meanfield.models.spec import MfgSpec
from meanfield.utils.config import get_settings
from meanfield.utils.errors import ArgumentError


def greedy_rows(values: np.ndarray, tie_tol: Optional[float] = None) -> np.ndarray:
    """Uniform distribution over the near-argmax actions of each row of ``values``."""
    tie_tol = get_settings().tie_tol if tie_tol is None else tie_tol
    row_max = values.max(axis=-1, keepdims=True)
    mask = values >= row_max - tie_tol * np.maximum(1.0, np.abs(row_max))
    return mask / mask.sum(axis=-1, keepdims=True)


def boltzmann_rows(values: np.ndarray, beta: float) -> np.ndarray:
    """Softmax of ``beta * values`` along the action axis."""
    return softmax(beta * values, axis=-1)


def _backward(
    spec: MfgSpec,
    flow: np.ndarray,
    reward: RewardOracle,
    policy_of_row: Callable[[np.ndarray], np.ndarray],
) -> tuple[np.ndarray, np.ndarray]:
    horizon = spec.horizon
    q = np.zeros((horizon + 1, spec.num_states, spec.num_actions))
    pi = np.empty_like(q)
    pi[horizon] = policy_of_row(q[horizon])
    for t in reversed(range(horizon)):
        mu = flow[t]
        continuation = np.sum(pi[t + 1] * q[t + 1], axis=-1)
        q[t] = reward.table(mu) + spec.discount * kernel_matrix(spec.transition, mu) @ continuation
        pi[t] = policy_of_row(q[t])
    return q, pi


def q_backward_optimal(
    spec: MfgSpec, flow: MeanFieldFlow, reward: RewardOracle
) -> tuple[ActionValueTable, TimeVaryingPolicy]:
    """
    Best response to ``flow`` by backward induction.

    At every (t, s) the policy is uniform over the actions whose value is within
    ``tie_tol`` (relative to the row maximum) of the best action.

    Returns:
        The action values Q and the greedy policy
    """
    check_compatible(spec, flow=flow)
    q, pi = _backward(spec, flow.probs, reward, greedy_rows)
    return ActionValueTable(values=q), TimeVaryingPolicy(probs=pi)


def boltzmann_backward(
    spec: MfgSpec, flow: MeanFieldFlow, reward: RewardOracle, beta: float
) -> tuple[ActionValueTable, TimeVaryingPolicy]:
    """
    Soft best response: Boltzmann policy with inverse temperature ``beta``.

    The soft values back up the expectation of the next values under the Boltzmann policy.

    Raises:
        ArgumentError: If ``beta`` is not positive
    """
    if not beta > 0:
        raise ArgumentError(f"beta must be positive, got {beta}")
    check_compatible(spec, flow=flow)
    q, pi = _backward(spec, flow.probs, reward, lambda row: boltzmann_rows(row, beta))
    return ActionValueTable(values=q), TimeVaryingPolicy(probs=pi)


def exploitability(
    spec: MfgSpec, flow: MeanFieldFlow, policy: TimeVaryingPolicy, reward: RewardOracle
) -> float:
    """Return gain of the greedy best response over ``policy`` against ``flow``; never negative."""
    check_compatible(spec, flow=flow, policy=policy)
    _, best = _backward(spec, flow.probs, reward, greedy_rows)
    gap = visitation_return(spec, flow.probs, best, reward) - visitation_return(
        spec, flow.probs, policy.probs, reward
    )
    return max(0.0, gap)
