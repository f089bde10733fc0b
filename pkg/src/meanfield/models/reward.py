"""Reward architectures, parameter vectors and optimizer state."""

from __future__ import annotations

import enum

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from meanfield.models.base import ArrayModel, FloatArray
from meanfield.utils.config import get_settings


class RewardKind(str, enum.Enum):
    """Reward model family."""

    LINEAR = "linear"
    MLP = "mlp"


class RewardArchitecture(BaseModel):
    """Layer layout of a reward model; ``input_dim`` is the feature length."""

    model_config = {"extra": "forbid", "frozen": True}

    kind: RewardKind
    input_dim: int = Field(gt=0)
    hidden: tuple[int, int] = Field(
        default_factory=lambda: (get_settings().reward_hidden_width,) * 2
    )
    negative_slope: float = Field(default_factory=lambda: get_settings().leaky_relu_slope, ge=0.0)

    @field_validator("hidden")
    @classmethod
    def _check_hidden(cls, value: tuple[int, int]) -> tuple[int, int]:
        if min(value) <= 0:
            raise ValueError("hidden layer widths must be positive")
        return value

    @property
    def layer_shapes(self) -> list[tuple[int, int]]:
        """Weight shapes (fan_in, fan_out) of each dense layer, input to output."""
        if self.kind == RewardKind.LINEAR:
            return [(self.input_dim, 1)]
        first, second = self.hidden
        return [(self.input_dim, first), (first, second), (second, 1)]

    @property
    def num_parameters(self) -> int:
        if self.kind == RewardKind.LINEAR:
            return self.input_dim
        return sum(fan_in * fan_out + fan_out for fan_in, fan_out in self.layer_shapes)


class RewardParams(ArrayModel):
    """Flat parameter vector theta of a reward model."""

    theta: FloatArray
    architecture: RewardArchitecture

    @model_validator(mode="after")
    def _check_theta(self) -> RewardParams:
        if self.theta.ndim != 1 or self.theta.shape[0] != self.architecture.num_parameters:
            raise ValueError(
                f"theta must have {self.architecture.num_parameters} entries for this architecture"
            )
        if not np.all(np.isfinite(self.theta)):
            raise ValueError("theta has non-finite entries")
        return self

    @property
    def dim(self) -> int:
        return int(self.theta.shape[0])

    def with_theta(self, theta: np.ndarray) -> RewardParams:
        return RewardParams(theta=theta, architecture=self.architecture)


class AdamState(ArrayModel):
    """First and second moment estimates plus the step counter."""

    m: FloatArray
    v: FloatArray
    step: int = Field(default=0, ge=0)

    @classmethod
    def zeros(cls, dim: int) -> AdamState:
        return cls(m=np.zeros(dim), v=np.zeros(dim))


class SocietalRewardModel(ArrayModel):
    """Learned societal reward over the input [mu, flattened pi] of length |S| + |S| |A|."""

    params: RewardParams
    num_states: int = Field(gt=0)
    num_actions: int = Field(gt=0)

    @model_validator(mode="after")
    def _check_input(self) -> SocietalRewardModel:
        expected = self.num_states + self.num_states * self.num_actions
        if self.params.architecture.input_dim != expected:
            raise ValueError(f"societal reward input must have {expected} entries")
        return self
