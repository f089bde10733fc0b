"""Sampling expert trajectories against a fixed population flow."""

from __future__ import annotations

import numpy as np

from meanfield.core.dynamics import kernel_matrix
from meanfield.models.demos import DemoSet
from meanfield.models.game import MeanFieldFlow, TimeVaryingPolicy
from meanfield.models.oracles import sample_categorical
from meanfield.models.spec import MfgSpec
from meanfield.utils.errors import ArgumentError
from meanfield.utils.logger import get_logger

logger = get_logger(__name__)


def sample_trajectories(
    spec: MfgSpec,
    flow: MeanFieldFlow,
    policy: TimeVaryingPolicy,
    plays: int,
    agents: int,
    seed: int,
) -> DemoSet:
    """
    Sample ``plays x agents`` independent trajectories of the expert.

    s0 ~ mu0, a_t ~ pi_t(.|s_t) and s_{t+1} ~ P(.|s_t, a_t, mu_t) with mu_t taken from
    ``flow``; the sampled agents never perturb the flow.

    Args:
        spec: Game dynamics and mu0
        flow: Expert mean field flow
        policy: Expert policy
        plays: Number of game plays
        agents: Agents per game play
        seed: Seed of the random generator

    Returns:
        The demonstrations, bit-identical for equal seeds

    Raises:
        ArgumentError: If the flow or policy do not match the spec, or counts are not positive
    """
    steps = spec.horizon + 1
    if flow.probs.shape != (steps, spec.num_states):
        raise ArgumentError(f"flow has shape {flow.probs.shape}, expected {steps} steps")
    if policy.probs.shape != (steps, spec.num_states, spec.num_actions):
        raise ArgumentError(f"policy has shape {policy.probs.shape}")
    if plays < 1 or agents < 1:
        raise ArgumentError("plays and agents must be positive")

    rng = np.random.default_rng(seed)
    count = plays * agents
    states = np.empty((count, steps), dtype=np.int64)
    actions = np.empty((count, steps), dtype=np.int64)

    states[:, 0] = sample_categorical(
        np.broadcast_to(spec.initial_mean_field.probs, (count, spec.num_states)), rng
    )
    for t in range(steps):
        actions[:, t] = sample_categorical(policy.probs[t][states[:, t]], rng)
        if t < spec.horizon:
            matrix = kernel_matrix(spec.transition, flow.probs[t])
            states[:, t + 1] = sample_categorical(matrix[states[:, t], actions[:, t]], rng)

    logger.debug(f"Sampled {count} trajectories of length {steps} for '{spec.name}'")
    return DemoSet(
        states=states,
        actions=actions,
        env_name=spec.name,
        variant=spec.variant,
        num_states=spec.num_states,
        num_actions=spec.num_actions,
        horizon=spec.horizon,
        seed=seed,
        agents_per_play=agents,
        plays=plays,
    )
