"""Mean fields, policies and action-value tables of a finite-horizon MFG."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from pydantic import field_validator

from meanfield.models.base import ArrayModel, FloatArray, check_distributions


class MeanField(ArrayModel):
    """Distribution of the population over states at one time step."""

    probs: FloatArray

    @field_validator("probs")
    @classmethod
    def _check_simplex(cls, value: np.ndarray) -> np.ndarray:
        if value.ndim != 1:
            raise ValueError("mean field must be a vector")
        return check_distributions(value, "mean field")

    @property
    def num_states(self) -> int:
        return int(self.probs.shape[0])

    @classmethod
    def uniform(cls, num_states: int) -> MeanField:
        return cls(probs=np.full(num_states, 1.0 / num_states))

    @classmethod
    def point_mass(cls, num_states: int, state: int) -> MeanField:
        probs = np.zeros(num_states)
        probs[state] = 1.0
        return cls(probs=probs)


class MeanFieldFlow(ArrayModel):
    """Mean fields for t = 0..T, stored as a (T+1, |S|) array."""

    probs: FloatArray

    @field_validator("probs")
    @classmethod
    def _check_rows(cls, value: np.ndarray) -> np.ndarray:
        if value.ndim != 2 or value.shape[0] < 2:
            raise ValueError("flow must have shape (T+1, |S|) with T >= 1")
        return check_distributions(value, "mean field flow")

    @property
    def horizon(self) -> int:
        return int(self.probs.shape[0]) - 1

    @property
    def num_states(self) -> int:
        return int(self.probs.shape[1])

    @property
    def fields(self) -> tuple[MeanField, ...]:
        return tuple(MeanField(probs=row) for row in self.probs)

    def __len__(self) -> int:
        return int(self.probs.shape[0])

    def __getitem__(self, t: int) -> MeanField:
        return MeanField(probs=self.probs[t])

    @classmethod
    def from_fields(cls, fields: Sequence[MeanField]) -> MeanFieldFlow:
        return cls(probs=np.stack([field.probs for field in fields]))


class PerStepPolicy(ArrayModel):
    """Row-stochastic |S| x |A| matrix; row s is the action distribution in state s."""

    probs: FloatArray

    @field_validator("probs")
    @classmethod
    def _check_rows(cls, value: np.ndarray) -> np.ndarray:
        if value.ndim != 2:
            raise ValueError("per-step policy must be a matrix")
        return check_distributions(value, "per-step policy")

    @property
    def num_states(self) -> int:
        return int(self.probs.shape[0])

    @property
    def num_actions(self) -> int:
        return int(self.probs.shape[1])

    @classmethod
    def uniform(cls, num_states: int, num_actions: int) -> PerStepPolicy:
        return cls(probs=np.full((num_states, num_actions), 1.0 / num_actions))


class TimeVaryingPolicy(ArrayModel):
    """Per-step policies for t = 0..T, stored as a (T+1, |S|, |A|) array."""

    probs: FloatArray

    @field_validator("probs")
    @classmethod
    def _check_rows(cls, value: np.ndarray) -> np.ndarray:
        if value.ndim != 3 or value.shape[0] < 2:
            raise ValueError("policy must have shape (T+1, |S|, |A|) with T >= 1")
        return check_distributions(value, "time-varying policy")

    @property
    def horizon(self) -> int:
        return int(self.probs.shape[0]) - 1

    @property
    def num_states(self) -> int:
        return int(self.probs.shape[1])

    @property
    def num_actions(self) -> int:
        return int(self.probs.shape[2])

    @property
    def steps(self) -> tuple[PerStepPolicy, ...]:
        return tuple(PerStepPolicy(probs=step) for step in self.probs)

    def __len__(self) -> int:
        return int(self.probs.shape[0])

    def __getitem__(self, t: int) -> PerStepPolicy:
        return PerStepPolicy(probs=self.probs[t])

    @classmethod
    def from_steps(cls, steps: Sequence[PerStepPolicy]) -> TimeVaryingPolicy:
        return cls(probs=np.stack([step.probs for step in steps]))

    @classmethod
    def uniform(cls, horizon: int, num_states: int, num_actions: int) -> TimeVaryingPolicy:
        return cls(probs=np.full((horizon + 1, num_states, num_actions), 1.0 / num_actions))


class ActionValueTable(ArrayModel):
    """Q(t, s, a) for t = 0..T; the terminal slice is identically zero."""

    values: FloatArray

    @field_validator("values")
    @classmethod
    def _check_terminal(cls, value: np.ndarray) -> np.ndarray:
        if value.ndim != 3:
            raise ValueError("action values must have shape (T+1, |S|, |A|)")
        if np.any(value[-1] != 0.0):
            raise ValueError("action values at t = T must be zero")
        return value

    @property
    def horizon(self) -> int:
        return int(self.values.shape[0]) - 1
