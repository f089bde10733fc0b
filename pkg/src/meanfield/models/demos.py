"""Demonstrated trajectories and the estimates derived from them."""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, Field, model_validator

from meanfield.models.base import ArrayModel, IntArray
from meanfield.models.game import MeanFieldFlow, TimeVaryingPolicy


class Trajectory(ArrayModel):
    """State and action sequence of one agent, both of length T+1."""

    states: IntArray
    actions: IntArray

    @model_validator(mode="after")
    def _check_lengths(self) -> Trajectory:
        if self.states.ndim != 1 or self.states.shape != self.actions.shape:
            raise ValueError("states and actions must be equal-length sequences")
        if np.any(self.states < 0) or np.any(self.actions < 0):
            raise ValueError("indices must be non-negative")
        return self


class DemoMetadata(BaseModel):
    """Header of a demonstration file."""

    model_config = {"extra": "forbid", "frozen": True}

    env_name: str
    variant: str
    num_states: int = Field(gt=0)
    num_actions: int = Field(gt=0)
    horizon: int = Field(ge=1)
    seed: int
    agents_per_play: int = Field(gt=0)
    plays: int = Field(gt=0)
    num_trajectories: int = Field(gt=0)


class DemoSet(ArrayModel):
    """M = plays x N trajectories stored as (M, T+1) state and action arrays."""

    states: IntArray
    actions: IntArray
    env_name: str
    variant: str
    num_states: int = Field(gt=0)
    num_actions: int = Field(gt=0)
    horizon: int = Field(ge=1)
    seed: int
    agents_per_play: int = Field(gt=0)
    plays: int = Field(gt=0)

    @model_validator(mode="after")
    def _check_shape(self) -> DemoSet:
        if self.states.ndim != 2 or self.states.shape != self.actions.shape:
            raise ValueError("states and actions must both have shape (M, T+1)")
        if self.states.shape[1] != self.horizon + 1:
            raise ValueError("trajectory length must equal horizon + 1")
        if self.states.shape[0] != self.plays * self.agents_per_play:
            raise ValueError("number of trajectories must equal plays x agents_per_play")
        if np.any(self.states < 0) or np.any(self.states >= self.num_states):
            raise ValueError(f"states must lie in [0, {self.num_states})")
        if np.any(self.actions < 0) or np.any(self.actions >= self.num_actions):
            raise ValueError(f"actions must lie in [0, {self.num_actions})")
        return self

    @property
    def num_trajectories(self) -> int:
        return int(self.states.shape[0])

    @property
    def trajectories(self) -> list[Trajectory]:
        return [Trajectory(states=s, actions=a) for s, a in zip(self.states, self.actions)]

    @property
    def metadata(self) -> DemoMetadata:
        return DemoMetadata(
            env_name=self.env_name,
            variant=self.variant,
            num_states=self.num_states,
            num_actions=self.num_actions,
            horizon=self.horizon,
            seed=self.seed,
            agents_per_play=self.agents_per_play,
            plays=self.plays,
            num_trajectories=self.num_trajectories,
        )

    def first_plays(self, plays: int) -> DemoSet:
        """Keep only the first ``plays`` game plays."""
        if not 1 <= plays <= self.plays:
            raise ValueError(f"plays must be in [1, {self.plays}]")
        keep = plays * self.agents_per_play
        return self.model_copy(
            update={"states": self.states[:keep], "actions": self.actions[:keep], "plays": plays}
        )

    def play(self, index: int) -> DemoSet:
        """Return the N trajectories of one game play."""
        start = index * self.agents_per_play
        stop = start + self.agents_per_play
        if not 0 <= index < self.plays:
            raise ValueError(f"play index must be in [0, {self.plays})")
        return self.model_copy(
            update={
                "states": self.states[start:stop],
                "actions": self.actions[start:stop],
                "plays": 1,
            }
        )


class EmpiricalEstimates(ArrayModel):
    """Empirical mean field flow and policy estimated from demonstrations."""

    mean_field_flow: MeanFieldFlow
    policy: TimeVaryingPolicy
