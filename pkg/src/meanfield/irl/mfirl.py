"""
Individual-level reward recovery for mean field games.

The learner maximizes L(omega) = E_D[sum_t gamma^t r_omega(s_t, a_t, mu_hat_t)] - J(mu_hat,
pi_omega), where pi_omega is the Boltzmann best response to the empirical flow mu_hat. The
gradient of J is computed by a backward recursion over parameter-gradient tables of the
soft action values and the Boltzmann policy.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from scipy.special import softmax

from meanfield.core.dynamics import kernel_matrix
from meanfield.demos.estimators import estimate_mean_field_flow, state_action_counts
from meanfield.envs.features import flow_features
from meanfield.models.demos import DemoSet
from meanfield.models.game import ActionValueTable, MeanFieldFlow, TimeVaryingPolicy
from meanfield.models.oracles import sample_categorical
from meanfield.models.options import DynamicsMode, MfirlOptions
from meanfield.models.results import GradientTables, MfirlResult, TrainingLogEntry
from meanfield.models.reward import AdamState, RewardArchitecture, RewardParams
from meanfield.models.spec import MfgSpec
from meanfield.rewards.adam import adam_step
from meanfield.rewards.networks import forward_batch, init_params, param_grad_batch
from meanfield.utils.errors import (
    ArgumentError,
    NumericDivergenceError,
    TrainingDivergenceError,
)
from meanfield.utils.logger import get_logger

logger = get_logger(__name__)


def _reward_tables(
    spec: MfgSpec, mu_hat: np.ndarray, params: RewardParams
) -> tuple[np.ndarray, np.ndarray]:
    """r_omega and its parameter gradient at every (t < T, s, a), shapes (T,S,A) and (T,S,A,d)."""
    horizon = spec.horizon
    features = flow_features(spec, mu_hat[:horizon])
    flat = features.reshape(-1, features.shape[-1])
    rewards = forward_batch(params, flat).reshape(horizon, spec.num_states, spec.num_actions)
    grads = param_grad_batch(params, flat).reshape(
        horizon, spec.num_states, spec.num_actions, params.dim
    )
    return rewards, grads


def _expert_weights(spec: MfgSpec, demos: DemoSet) -> np.ndarray:
    """Discounted empirical state-action frequencies, shape (T, S, A)."""
    horizon = spec.horizon
    frequencies = state_action_counts(demos)[:horizon] / demos.num_trajectories
    return frequencies * (spec.discount ** np.arange(horizon))[:, None, None]


def _weighted_rewards(
    weights: np.ndarray, rewards: np.ndarray, grads: np.ndarray
) -> tuple[float, np.ndarray]:
    return float(np.sum(weights * rewards)), np.einsum("tsa,tsad->d", weights, grads)


def empirical_expert_term(
    spec: MfgSpec, demos: DemoSet, mu_hat: MeanFieldFlow, params: RewardParams
) -> tuple[float, np.ndarray]:
    """
    Average discounted demonstrated reward and its parameter gradient.

    value = (1/M) sum_j sum_{t<T} gamma^t r_omega(s_t^j, a_t^j, mu_hat_t)

    Returns:
        The value and its gradient with respect to theta
    """
    rewards, grads = _reward_tables(spec, mu_hat.probs, params)
    return _weighted_rewards(_expert_weights(spec, demos), rewards, grads)


def sampled_kernels(kernels: np.ndarray, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Empirical kernels from ``samples`` next-state draws per (t, s, a)."""
    num_states = kernels.shape[-1]
    draws = sample_categorical(
        np.broadcast_to(kernels[..., None, :], kernels.shape[:-1] + (samples, num_states)), rng
    )
    return np.eye(num_states)[draws].mean(axis=-2)


def _check_finite(array: np.ndarray, t: int, what: str) -> None:
    if not np.all(np.isfinite(array)):
        bad = np.argwhere(~np.isfinite(array))[0]
        raise NumericDivergenceError(f"non-finite {what}", (t, int(bad[0]), int(bad[1])))


class SoftBackward:
    """One backward pass of soft values, Boltzmann policies and their parameter gradients."""

    def __init__(
        self,
        spec: MfgSpec,
        kernels: np.ndarray,
        rewards: np.ndarray,
        reward_grads: np.ndarray,
        beta: float,
    ) -> None:
        self.spec = spec
        self.kernels = kernels
        self.rewards = rewards
        self.reward_grads = reward_grads
        self.beta = beta
        horizon, num_states, num_actions = spec.horizon, spec.num_states, spec.num_actions
        self.q = np.zeros((horizon + 1, num_states, num_actions))
        self.pi = np.empty_like(self.q)
        self.pi[horizon] = softmax(beta * self.q[horizon], axis=-1)
        for t in reversed(range(horizon)):
            continuation = np.sum(self.pi[t + 1] * self.q[t + 1], axis=-1)
            self.q[t] = rewards[t] + spec.discount * kernels[t] @ continuation
            _check_finite(self.q[t], t, "soft action value")
            self.pi[t] = softmax(beta * self.q[t], axis=-1)

    def gradient_step(
        self, t: int, grad_q_next: np.ndarray, grad_pi_next: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        """Gradient tables at step t from those at step t + 1."""
        value_grad = np.einsum("xa,xad->xd", self.q[t + 1], grad_pi_next) + np.einsum(
            "xa,xad->xd", self.pi[t + 1], grad_q_next
        )
        grad_q = self.reward_grads[t] + self.spec.discount * np.einsum(
            "sax,xd->sad", self.kernels[t], value_grad
        )
        _check_finite(grad_q, t, "action-value gradient")
        expected = np.einsum("sa,sad->sd", self.pi[t], grad_q)
        grad_pi = self.pi[t][..., None] * self.beta * (grad_q - expected[:, None, :])
        return grad_q, grad_pi

    def gradients(
        self, truncation: Optional[int] = None, cache: Optional[GradientTables] = None
    ) -> GradientTables:
        """
        Gradient tables for t = 0..T.

        With ``truncation`` H, the tables at t are obtained by recursing H + 1 steps from the
        cached tables at t + H + 1 whenever that step lies before T; zero tables stand in for
        a missing cache. With H >= T - 1 no step is cut and the tables equal the full pass.
        """
        horizon = self.spec.horizon
        shape = self.q.shape + (self.reward_grads.shape[-1],)
        grad_q = np.zeros(shape)
        grad_pi = np.zeros(shape)
        # steps whose cut reaches T recurse from the zero terminal tables
        tail_start = 0 if truncation is None else max(horizon - truncation - 1, 0)
        for t in reversed(range(tail_start, horizon)):
            grad_q[t], grad_pi[t] = self.gradient_step(t, grad_q[t + 1], grad_pi[t + 1])
        if tail_start == 0:
            return GradientTables(grad_q=grad_q, grad_pi=grad_pi)

        cached_q = cache.grad_q if cache is not None else np.zeros(shape)
        cached_pi = cache.grad_pi if cache is not None else np.zeros(shape)
        for t in range(tail_start):
            cut = t + truncation + 1
            chain_q, chain_pi = cached_q[cut], cached_pi[cut]
            for k in reversed(range(t, cut)):
                chain_q, chain_pi = self.gradient_step(k, chain_q, chain_pi)
            grad_q[t], grad_pi[t] = chain_q, chain_pi
        return GradientTables(grad_q=grad_q, grad_pi=grad_pi)


def _kernels(spec: MfgSpec, mu_hat: np.ndarray) -> np.ndarray:
    return np.stack([kernel_matrix(spec.transition, mu_hat[t]) for t in range(spec.horizon)])


def _dynamics(exact: np.ndarray, opts: MfirlOptions, epoch: int) -> np.ndarray:
    if opts.dynamics_mode == DynamicsMode.EXACT:
        return exact
    rng = np.random.default_rng([opts.seed, epoch])
    return sampled_kernels(exact, opts.mc_samples, rng)


def soft_best_response_with_grads(
    spec: MfgSpec,
    mu_hat: MeanFieldFlow,
    params: RewardParams,
    opts: MfirlOptions,
    cache: Optional[GradientTables] = None,
    epoch: int = 0,
) -> tuple[ActionValueTable, TimeVaryingPolicy, GradientTables]:
    """
    Soft values, Boltzmann policy and parameter-gradient tables against ``mu_hat``.

    Args:
        spec: Game dynamics (the reward of ``spec`` is ignored)
        mu_hat: Empirical expert flow
        params: Reward parameters omega
        opts: Temperature, truncation and dynamics mode
        cache: Tables of the previous epoch, used at the truncation cut
        epoch: Epoch index, seeds the Monte-Carlo next-state draws

    Raises:
        NumericDivergenceError: Naming (t, s, a) of the first non-finite entry
    """
    if mu_hat.probs.shape != (spec.horizon + 1, spec.num_states):
        raise ArgumentError(f"empirical flow has shape {mu_hat.probs.shape}")
    truncation = _truncation(spec, opts)
    rewards, reward_grads = _reward_tables(spec, mu_hat.probs, params)
    kernels = _dynamics(_kernels(spec, mu_hat.probs), opts, epoch)
    backward = SoftBackward(spec, kernels, rewards, reward_grads, opts.beta)
    tables = backward.gradients(truncation, cache)
    return ActionValueTable(values=backward.q), TimeVaryingPolicy(probs=backward.pi), tables


def _truncation(spec: MfgSpec, opts: MfirlOptions) -> Optional[int]:
    """The truncation horizon; H equal to T is accepted and cuts nothing, H above T is refused."""
    if opts.truncation_horizon is not None and opts.truncation_horizon > spec.horizon:
        raise ArgumentError(
            f"truncation horizon {opts.truncation_horizon} exceeds the horizon {spec.horizon}"
        )
    return opts.truncation_horizon


def _soft_return(
    mu0: np.ndarray, q: np.ndarray, pi: np.ndarray, tables: GradientTables
) -> tuple[float, np.ndarray]:
    value = float(np.einsum("s,sa,sa->", mu0, pi[0], q[0]))
    grad = np.einsum("s,sa,sad->d", mu0, q[0], tables.grad_pi[0]) + np.einsum(
        "s,sa,sad->d", mu0, pi[0], tables.grad_q[0]
    )
    return value, grad


def objective_and_grad(
    spec: MfgSpec,
    demos: DemoSet,
    mu_hat: MeanFieldFlow,
    params: RewardParams,
    opts: MfirlOptions,
) -> tuple[float, np.ndarray]:
    """
    L(omega) and its gradient.

    L = expert term - J(mu_hat, pi_omega) with J = E_{s ~ mu_hat_0} sum_a pi_0(a|s) Q_0(s, a).
    """
    expert_value, expert_grad = empirical_expert_term(spec, demos, mu_hat, params)
    q, pi, tables = soft_best_response_with_grads(spec, mu_hat, params, opts)
    soft_value, soft_grad = _soft_return(mu_hat.probs[0], q.values, pi.probs, tables)
    return expert_value - soft_value, expert_grad - soft_grad


class MfirlTrainer:
    """Adam ascent on L(omega); mu_hat is estimated once from the demonstrations."""

    def __init__(self, spec: MfgSpec, demos: DemoSet, opts: Optional[MfirlOptions] = None) -> None:
        if (demos.num_states, demos.num_actions, demos.horizon) != (
            spec.num_states,
            spec.num_actions,
            spec.horizon,
        ):
            raise ArgumentError(
                f"demonstrations ({demos.env_name}) do not match the game '{spec.name}'"
            )
        if spec.name != "custom" and demos.env_name != spec.name:
            raise ArgumentError(
                f"demonstrations were recorded on '{demos.env_name}', not '{spec.name}'"
            )
        self.spec = spec
        self.demos = demos
        self.opts = opts or MfirlOptions()
        self.truncation = _truncation(spec, self.opts)
        self.mu_hat = estimate_mean_field_flow(demos)
        self.kernels = _kernels(spec, self.mu_hat.probs)
        self.expert_weights = _expert_weights(spec, demos)
        self.cache: Optional[GradientTables] = None

    def objective_and_grad(self, params: RewardParams, epoch: int = 0) -> tuple[float, np.ndarray]:
        """L and its gradient; updates the truncation cache with this epoch's tables."""
        rewards, reward_grads = _reward_tables(self.spec, self.mu_hat.probs, params)
        expert_value, expert_grad = _weighted_rewards(self.expert_weights, rewards, reward_grads)

        kernels = _dynamics(self.kernels, self.opts, epoch)
        backward = SoftBackward(self.spec, kernels, rewards, reward_grads, self.opts.beta)
        tables = backward.gradients(self.truncation, self.cache)
        if self.truncation is not None:
            self.cache = tables
        soft_value, soft_grad = _soft_return(self.mu_hat.probs[0], backward.q, backward.pi, tables)
        return expert_value - soft_value, expert_grad - soft_grad

    def train(
        self, architecture: RewardArchitecture, init: Optional[RewardParams] = None
    ) -> MfirlResult:
        """
        Run the configured number of epochs.

        Raises:
            TrainingDivergenceError: Naming the epoch where values became non-finite
        """
        params = init if init is not None else init_params(architecture, self.opts.seed)
        state = AdamState.zeros(params.dim)
        log: list[TrainingLogEntry] = []

        for epoch in range(self.opts.epochs):
            try:
                objective, grad = self.objective_and_grad(params, epoch)
            except TrainingDivergenceError:
                raise
            except NumericDivergenceError as e:
                raise TrainingDivergenceError(f"epoch {epoch}: {e}", (epoch,)) from e
            if not np.isfinite(objective) or not np.all(np.isfinite(grad)):
                raise TrainingDivergenceError("non-finite MFIRL objective", (epoch,))

            grad_norm = float(np.linalg.norm(grad))
            log.append(TrainingLogEntry(epoch=epoch, objective=objective, grad_norm=grad_norm))
            logger.debug(f"MFIRL epoch {epoch}: L={objective:.6g} |grad|={grad_norm:.3e}")
            params, state = adam_step(params, grad, state, self.opts.lr)

        logger.info(
            f"MFIRL on '{self.spec.name}' finished {self.opts.epochs} epochs, "
            f"final L={log[-1].objective:.6g}"
        )
        return MfirlResult(params=params, log=log)


def mfirl_train(
    spec: MfgSpec,
    demos: DemoSet,
    architecture: RewardArchitecture,
    opts: Optional[MfirlOptions] = None,
    init: Optional[RewardParams] = None,
) -> MfirlResult:
    """Train an individual reward on ``demos`` for the dynamics of ``spec``."""
    return MfirlTrainer(spec, demos, opts).train(architecture, init)
