"""Empirical mean field and policy estimated from demonstrations."""

from __future__ import annotations

import numpy as np

from meanfield.models.demos import DemoSet, EmpiricalEstimates
from meanfield.models.game import MeanFieldFlow, TimeVaryingPolicy
from meanfield.utils.errors import ArgumentError


def state_action_counts(demos: DemoSet) -> np.ndarray:
    """Occurrence counts of (s_t, a_t) as a (T+1, |S|, |A|) array."""
    if demos.num_trajectories == 0:
        raise ArgumentError("demonstration set is empty")
    steps = demos.horizon + 1
    counts = np.zeros((steps, demos.num_states, demos.num_actions))
    time_index = np.broadcast_to(np.arange(steps), demos.states.shape)
    np.add.at(counts, (time_index, demos.states, demos.actions), 1.0)
    return counts


def estimate_mean_field_flow(demos: DemoSet) -> MeanFieldFlow:
    """mu_hat_t(s) = (1/M) sum_j 1{s_t^j = s}."""
    counts = state_action_counts(demos).sum(axis=-1)
    return MeanFieldFlow(probs=counts / demos.num_trajectories)


def estimate_empirical_policy(demos: DemoSet) -> TimeVaryingPolicy:
    """pi_hat_t(a|s) = count(s, a) / count(s); rows of unvisited states are uniform."""
    counts = state_action_counts(demos)
    visits = counts.sum(axis=-1, keepdims=True)
    uniform = np.full_like(counts, 1.0 / demos.num_actions)
    probs = np.divide(counts, visits, out=uniform, where=visits > 0)
    return TimeVaryingPolicy(probs=probs)


def estimate_empirical(demos: DemoSet) -> EmpiricalEstimates:
    return EmpiricalEstimates(
        mean_field_flow=estimate_mean_field_flow(demos),
        policy=estimate_empirical_policy(demos),
    )


def estimate_per_play(demos: DemoSet) -> list[EmpiricalEstimates]:
    """Separate estimates from the N trajectories of each game play."""
    return [estimate_empirical(demos.play(k)) for k in range(demos.plays)]
