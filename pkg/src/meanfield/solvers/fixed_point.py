"""MFNE by alternating best response and population propagation."""

from __future__ import annotations

from typing import Optional

import numpy as np

from meanfield.core.backward import boltzmann_backward, exploitability, q_backward_optimal
from meanfield.core.dynamics import expected_return, propagate_flow, propagate_probs
from meanfield.models.game import MeanFieldFlow, TimeVaryingPolicy
from meanfield.models.options import FixedPointOptions
from meanfield.models.results import EquilibriumResult
from meanfield.models.spec import MfgSpec
from meanfield.utils.logger import get_logger

logger = get_logger(__name__)


def flow_mse(new: np.ndarray, old: np.ndarray) -> float:
    """Squared change of the flow over t >= 1, normalized by (T-1) |S|."""
    horizon, num_states = new.shape[0] - 1, new.shape[1]
    return float(np.sum((new[1:] - old[1:]) ** 2) / (max(horizon - 1, 1) * num_states))


def solve_mfne_fixed_point(
    spec: MfgSpec, opts: Optional[FixedPointOptions] = None
) -> EquilibriumResult:
    """
    Iterate pi <- best response to mu, mu <- flow induced by pi.

    Starts from the uniform policy. With ``damping`` lambda the new flow is mixed as
    (1 - lambda) * mu_new + lambda * mu_old. Greedy best responses break ties uniformly;
    with ``beta_soft`` set, the Boltzmann best response is used instead.

    Args:
        spec: Game with a ground-truth reward
        opts: Iteration options

    Returns:
        The last policy with its consistent flow; ``converged`` is False when the flow
        change never dropped below ``mse_tol`` within ``max_iters`` iterations
    """
    opts = opts or FixedPointOptions()
    reward = spec.require_reward()

    policy = TimeVaryingPolicy.uniform(spec.horizon, spec.num_states, spec.num_actions)
    flow = propagate_probs(spec, policy.probs)
    history: list[float] = []
    converged = False

    for iteration in range(1, opts.max_iters + 1):
        current = MeanFieldFlow(probs=flow)
        if opts.beta_soft is not None:
            _, policy = boltzmann_backward(spec, current, reward, opts.beta_soft)
        else:
            _, policy = q_backward_optimal(spec, current, reward)

        new_flow = propagate_probs(spec, policy.probs)
        if opts.damping > 0:
            new_flow = (1.0 - opts.damping) * new_flow + opts.damping * flow

        mse = flow_mse(new_flow, flow)
        history.append(mse)
        flow = new_flow
        logger.debug(f"Fixed point iteration {iteration}: flow mse {mse:.3e}")
        if mse <= opts.mse_tol:
            converged = True
            break

    final_flow = propagate_flow(spec, policy)
    result = EquilibriumResult(
        flow=final_flow,
        policy=policy,
        expected_return=expected_return(spec, final_flow, policy, reward),
        exploitability=exploitability(spec, final_flow, policy, reward),
        iterations=len(history),
        converged=converged,
        solver="mfne",
        history=history,
    )
    if converged:
        logger.info(
            f"MFNE for '{spec.name}' converged after {result.iterations} iterations, "
            f"exploitability {result.exploitability:.3e}"
        )
    else:
        logger.warning(
            f"MFNE for '{spec.name}' did not converge in {opts.max_iters} iterations "
            f"(last mse {history[-1]:.3e})"
        )
    return result
