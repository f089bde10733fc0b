"""
Population-level reward recovery.

A societal reward g_theta(mu, pi) is fitted by a bilevel loop: the lower level solves the
reduced MDP under the current g_theta, the upper level ascends theta on the margin between
the demonstrated societal return and the return of the lower-level optimum. The optimum is
held fixed while differentiating the margin.
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import Optional, Union

import numpy as np

from meanfield.core.backward import exploitability
from meanfield.models.demos import EmpiricalEstimates
from meanfield.models.options import MfsoOptions, PlirlOptions
from meanfield.models.results import (
    EquilibriumResult,
    PlirlResult,
    ReducedMdpSolution,
    TrainingLogEntry,
)
from meanfield.models.reward import (
    AdamState,
    RewardArchitecture,
    RewardKind,
    RewardParams,
    SocietalRewardModel,
)
from meanfield.models.spec import MfgSpec
from meanfield.rewards.adam import adam_step
from meanfield.rewards.networks import (
    forward_batch,
    init_params,
    input_grad_batch,
    param_grad_batch,
)
from meanfield.solvers.reduced_mdp import (
    SocietalObjective,
    optimize_reduced_mdp,
    reduced_mdp_value_and_grad,
)
from meanfield.utils.errors import ArgumentError, TrainingDivergenceError
from meanfield.utils.logger import get_logger

logger = get_logger(__name__)


def societal_features(flow: np.ndarray, policy: np.ndarray) -> np.ndarray:
    """Inputs [mu_t, flattened pi_t] for K steps, shape (K, |S| + |S| |A|)."""
    return np.concatenate([flow, policy.reshape(policy.shape[0], -1)], axis=1)


def societal_architecture(
    spec: MfgSpec, kind: RewardKind = RewardKind.MLP
) -> RewardArchitecture:
    return RewardArchitecture(
        kind=kind, input_dim=spec.num_states + spec.num_states * spec.num_actions
    )


class LearnedSocietalObjective(SocietalObjective):
    """g_theta evaluated by the societal reward network."""

    def __init__(self, model: SocietalRewardModel) -> None:
        self.model = model

    def values(self, flow: np.ndarray, policy: np.ndarray) -> np.ndarray:
        return forward_batch(self.model.params, societal_features(flow, policy))

    def gradients(self, flow: np.ndarray, policy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        grads = input_grad_batch(self.model.params, societal_features(flow, policy))
        num_states = flow.shape[1]
        return grads[:, :num_states], grads[:, num_states:].reshape(policy.shape)

    def discounted(
        self, flow: np.ndarray, policy: np.ndarray, discount: float
    ) -> tuple[float, np.ndarray]:
        """sum_t gamma^t g_theta(mu_t, pi_t) over the K given steps and its theta-gradient."""
        features = societal_features(flow, policy)
        weights = discount ** np.arange(flow.shape[0])
        value = float(weights @ forward_batch(self.model.params, features))
        return value, weights @ param_grad_batch(self.model.params, features)


def _as_list(
    estimates: Union[EmpiricalEstimates, Sequence[EmpiricalEstimates]],
) -> list[EmpiricalEstimates]:
    items = [estimates] if isinstance(estimates, EmpiricalEstimates) else list(estimates)
    if not items:
        raise ArgumentError("at least one set of empirical estimates is required")
    return items


def _check_estimates(spec: MfgSpec, estimates: list[EmpiricalEstimates]) -> None:
    for item in estimates:
        if item.policy.probs.shape != (spec.horizon + 1, spec.num_states, spec.num_actions):
            raise ArgumentError(
                f"estimated policy has shape {item.policy.probs.shape}, which does not fit "
                f"the game '{spec.name}'"
            )


# floor of the demonstrated probabilities turned into policy scores
POLICY_SCORE_FLOOR = 1e-12


def _seed_scores(
    spec: MfgSpec, objective: LearnedSocietalObjective, candidates: list[np.ndarray]
) -> np.ndarray:
    """The candidate scores whose induced pair the current reward values most."""
    values = [reduced_mdp_value_and_grad(spec, objective, scores)[0] for scores in candidates]
    return candidates[int(np.argmax(values))]


def plirl_train(
    estimates: Union[EmpiricalEstimates, Sequence[EmpiricalEstimates]],
    spec: MfgSpec,
    opts: Optional[PlirlOptions] = None,
    architecture: Optional[RewardArchitecture] = None,
) -> PlirlResult:
    """
    Fit a societal reward to demonstrated (flow, policy) estimates.

    When several estimates are given (one per game play), the demonstrated return is
    their average. Each inner solve starts from whichever of the previous optimum and the
    demonstrated policies the current reward values most, so for population-consistent
    demonstrations the margin never exceeds zero.

    Args:
        estimates: Empirical flow and policy, or one pair per game play
        spec: Game dynamics; its reward is ignored
        opts: Outer and inner loop options
        architecture: Societal reward layout, an MLP over [mu, pi] by default

    Returns:
        The trained model, the per-epoch margin log and the last inner solution

    Raises:
        TrainingDivergenceError: Naming the outer epoch whose inner solve diverged
    """
    opts = opts or PlirlOptions()
    items = _as_list(estimates)
    _check_estimates(spec, items)
    architecture = architecture or societal_architecture(spec)
    model = SocietalRewardModel(
        params=init_params(architecture, opts.seed),
        num_states=spec.num_states,
        num_actions=spec.num_actions,
    )
    horizon = spec.horizon
    state = AdamState.zeros(model.params.dim)
    log: list[TrainingLogEntry] = []
    demonstrated = [np.log(np.maximum(item.policy.probs, POLICY_SCORE_FLOOR)) for item in items]
    scores = np.zeros((horizon + 1, spec.num_states, spec.num_actions))
    solution: Optional[ReducedMdpSolution] = None

    for epoch in range(opts.outer_epochs):
        objective = LearnedSocietalObjective(model)
        try:
            scores = _seed_scores(spec, objective, [scores, *demonstrated])
            solution = optimize_reduced_mdp(spec, objective, opts.inner, scores)
        except TrainingDivergenceError as e:
            raise TrainingDivergenceError(
                f"inner solve of outer epoch {epoch}: {e}", (epoch,)
            ) from e
        scores = solution.scores

        expert_value = 0.0
        expert_grad = np.zeros(model.params.dim)
        for item in items:
            value, grad = objective.discounted(
                item.mean_field_flow.probs[:horizon], item.policy.probs[:horizon], spec.discount
            )
            expert_value += value / len(items)
            expert_grad += grad / len(items)
        learner_value, learner_grad = objective.discounted(
            solution.flow.probs[:horizon], solution.policy.probs[:horizon], spec.discount
        )

        margin = expert_value - learner_value
        grad = expert_grad - learner_grad
        if not np.isfinite(margin) or not np.all(np.isfinite(grad)):
            raise TrainingDivergenceError("non-finite PLIRL margin", (epoch,))
        if margin > 1e-6:
            logger.warning(
                f"PLIRL epoch {epoch}: demonstrations beat the inner optimum by {margin:.3g}"
            )

        grad_norm = float(np.linalg.norm(grad))
        log.append(TrainingLogEntry(epoch=epoch, objective=margin, grad_norm=grad_norm))
        logger.debug(f"PLIRL epoch {epoch}: margin={margin:.6g} |grad|={grad_norm:.3e}")
        params, state = adam_step(model.params, grad, state, opts.outer_lr)
        model = model.model_copy(update={"params": params})

    assert solution is not None
    logger.info(
        f"PLIRL on '{spec.name}' finished {opts.outer_epochs} epochs, "
        f"final margin {log[-1].objective:.6g}"
    )
    return PlirlResult(model=model, log=log, inner=solution)


def societal_equilibrium(
    spec: MfgSpec,
    objective: SocietalObjective,
    opts: Optional[MfsoOptions] = None,
    init_scores: Optional[np.ndarray] = None,
    solver: str = "plirl",
) -> EquilibriumResult:
    """
    Maximize ``objective`` over consistent pairs.

    ``expected_return`` is the optimized societal return. ``exploitability`` is measured
    under the game's own reward when it has one and is NaN otherwise.
    """
    solution = optimize_reduced_mdp(spec, objective, opts, init_scores)
    gap = (
        exploitability(spec, solution.flow, solution.policy, spec.reward)
        if spec.reward is not None
        else float("nan")
    )
    return EquilibriumResult(
        flow=solution.flow,
        policy=solution.policy,
        expected_return=solution.value,
        exploitability=gap,
        iterations=solution.steps,
        converged=solution.converged,
        solver=solver,
        history=solution.history,
    )


def plirl_equilibrium(
    model: SocietalRewardModel,
    spec: MfgSpec,
    opts: Optional[MfsoOptions] = None,
    init_scores: Optional[np.ndarray] = None,
) -> EquilibriumResult:
    """The social optimum of the learned societal reward, for evaluation."""
    if (model.num_states, model.num_actions) != (spec.num_states, spec.num_actions):
        raise ArgumentError(f"societal reward does not fit the game '{spec.name}'")
    return societal_equilibrium(spec, LearnedSocietalObjective(model), opts, init_scores)


def societal_model(params: RewardParams, spec: MfgSpec) -> SocietalRewardModel:
    return SocietalRewardModel(
        params=params, num_states=spec.num_states, num_actions=spec.num_actions
    )
