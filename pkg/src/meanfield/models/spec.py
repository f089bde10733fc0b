"""The MFG tuple (S, A, P, mu0, r, gamma) with a finite horizon."""

from __future__ import annotations

import enum
from typing import Optional

from pydantic import Field, model_validator

from meanfield.models.base import ArrayModel
from meanfield.models.game import MeanField
from meanfield.models.oracles import RewardOracle, TransitionKernel
from meanfield.utils.errors import ArgumentError


class MfgSpec(ArrayModel):
    """Environment definition shared by every solver and learner."""

    num_states: int = Field(gt=0)
    num_actions: int = Field(gt=0)
    horizon: int = Field(ge=1)
    discount: float = Field(gt=0.0, le=1.0)
    initial_mean_field: MeanField
    transition: TransitionKernel
    reward: Optional[RewardOracle] = None
    name: str = "custom"
    variant: str = "original"

    @model_validator(mode="after")
    def _check_dimensions(self) -> MfgSpec:
        if self.initial_mean_field.num_states != self.num_states:
            raise ValueError("initial mean field length must equal num_states")
        if (self.transition.num_states, self.transition.num_actions) != (
            self.num_states,
            self.num_actions,
        ):
            raise ValueError("transition kernel dimensions do not match the spec")
        if self.reward is not None and (self.reward.num_states, self.reward.num_actions) != (
            self.num_states,
            self.num_actions,
        ):
            raise ValueError("reward oracle dimensions do not match the spec")
        return self

    def with_reward(self, reward: Optional[RewardOracle]) -> MfgSpec:
        """Return a copy of this spec with ``reward`` as its reward oracle."""
        return MfgSpec(**{**self._fields(), "reward": reward})

    def without_reward(self) -> MfgSpec:
        return self.with_reward(None)

    def require_reward(self) -> RewardOracle:
        if self.reward is None:
            raise ArgumentError(f"spec '{self.name}' has no ground-truth reward")
        return self.reward

    def _fields(self) -> dict[str, object]:
        return {name: getattr(self, name) for name in type(self).model_fields}


class EnvName(str, enum.Enum):
    """Benchmark environments."""

    INVEST = "invest"
    MALWARE = "malware"
    VIRUS = "virus"
    RPS = "rps"
    LR = "lr"


class EnvVariant(str, enum.Enum):
    """Original dynamics or the perturbed dynamics used for robustness checks."""

    ORIGINAL = "original"
    NEW = "new"
