"""Adam ascent on reward parameters."""

from __future__ import annotations

import numpy as np

from meanfield.models.reward import AdamState, RewardParams
from meanfield.utils.errors import ContractViolationError

BETA1 = 0.9
BETA2 = 0.999
EPSILON = 1e-8


def adam_step(
    params: RewardParams, grad: np.ndarray, state: AdamState, lr: float
) -> tuple[RewardParams, AdamState]:
    """
    One Adam update that ascends along ``grad``.

    Args:
        params: Current parameters
        grad: Gradient of the objective being maximized
        state: Moment estimates from previous steps
        lr: Learning rate

    Returns:
        Updated parameters and moments
    """
    grad = np.asarray(grad, dtype=np.float64)
    if grad.shape != params.theta.shape or state.m.shape != params.theta.shape:
        raise ContractViolationError("gradient, moments and parameters must have equal size")

    step = state.step + 1
    m = BETA1 * state.m + (1.0 - BETA1) * grad
    v = BETA2 * state.v + (1.0 - BETA2) * grad**2
    m_hat = m / (1.0 - BETA1**step)
    v_hat = v / (1.0 - BETA2**step)
    theta = params.theta + lr * m_hat / (np.sqrt(v_hat) + EPSILON)
    return params.with_theta(theta), AdamState(m=m, v=v, step=step)
