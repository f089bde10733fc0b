"""Mean field social optimum via the reduced MDP."""

from __future__ import annotations

from typing import Optional

import numpy as np

from meanfield.core.backward import exploitability
from meanfield.core.dynamics import expected_return, propagate_flow
from meanfield.models.game import TimeVaryingPolicy
from meanfield.models.options import MfsoOptions
from meanfield.models.results import EquilibriumResult, ReducedMdpSolution
from meanfield.models.spec import MfgSpec
from meanfield.solvers.reduced_mdp import GroundTruthObjective, optimize_reduced_mdp
from meanfield.utils.config import get_settings
from meanfield.utils.logger import get_logger

logger = get_logger(__name__)


def policy_scores(policy: TimeVaryingPolicy) -> np.ndarray:
    """Scores whose softmax is ``policy``; zero-probability actions get a large negative score."""
    return np.log(np.maximum(policy.probs, get_settings().kl_floor))


def equilibrium_from_solution(
    spec: MfgSpec, solution: ReducedMdpSolution, solver: str
) -> EquilibriumResult:
    """Evaluate a reduced-MDP solution under the game's own reward."""
    reward = spec.require_reward()
    flow = propagate_flow(spec, solution.policy)
    return EquilibriumResult(
        flow=flow,
        policy=solution.policy,
        expected_return=expected_return(spec, flow, solution.policy, reward),
        exploitability=exploitability(spec, flow, solution.policy, reward),
        iterations=solution.steps,
        converged=solution.converged,
        solver=solver,
        history=solution.history,
    )


def solve_mfso(
    spec: MfgSpec,
    opts: Optional[MfsoOptions] = None,
    init_policy: Optional[TimeVaryingPolicy] = None,
) -> EquilibriumResult:
    """
    Maximize the cumulative societal reward subject to population consistency.

    Args:
        spec: Game with a ground-truth reward
        opts: Ascent options
        init_policy: Warm start; uniform policies when omitted

    Returns:
        The optimizing policy, its consistent flow, return and exploitability

    Raises:
        TrainingDivergenceError: If the gradient becomes non-finite
    """
    reward = spec.require_reward()
    init_scores = policy_scores(init_policy) if init_policy is not None else None
    solution = optimize_reduced_mdp(spec, GroundTruthObjective(reward), opts, init_scores)
    result = equilibrium_from_solution(spec, solution, "mfso")
    logger.info(
        f"MFSO for '{spec.name}' ({spec.variant}): return {result.expected_return:.6g} "
        f"after {result.iterations} steps"
    )
    return result
