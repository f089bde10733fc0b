"""Expert demonstrations: sampling, estimators and persistence."""

from meanfield.demos.estimators import (
    estimate_empirical,
    estimate_empirical_policy,
    estimate_mean_field_flow,
    estimate_per_play,
    state_action_counts,
)
from meanfield.demos.sampling import sample_trajectories
from meanfield.demos.storage import load_demos, save_demos

__all__ = [
    "sample_trajectories",
    "state_action_counts",
    "estimate_mean_field_flow",
    "estimate_empirical_policy",
    "estimate_empirical",
    "estimate_per_play",
    "save_demos",
    "load_demos",
]
