"""Results produced by solvers and trainers."""

from __future__ import annotations

import numpy as np
from pydantic import Field, field_validator

from meanfield.models.base import ArrayModel, FloatArray
from meanfield.models.game import MeanFieldFlow, TimeVaryingPolicy
from meanfield.models.reward import RewardParams, SocietalRewardModel


class EquilibriumResult(ArrayModel):
    """A population-consistent (flow, policy) pair and its diagnostics."""

    flow: MeanFieldFlow
    policy: TimeVaryingPolicy
    expected_return: float
    exploitability: float
    iterations: int = Field(ge=0)
    converged: bool
    solver: str
    history: list[float] = Field(default_factory=list)


class GradientTables(ArrayModel):
    """Parameter gradients of soft action values and Boltzmann policy, each (T+1, |S|, |A|, d)."""

    grad_q: FloatArray
    grad_pi: FloatArray

    @field_validator("grad_q")
    @classmethod
    def _check_terminal(cls, value: np.ndarray) -> np.ndarray:
        if value.ndim != 4:
            raise ValueError("gradient tables must have shape (T+1, |S|, |A|, d)")
        if np.any(value[-1] != 0.0):
            raise ValueError("grad_q at t = T must be zero")
        return value


class TrainingLogEntry(ArrayModel):
    """One epoch of an IRL training run."""

    epoch: int
    objective: float
    grad_norm: float


class ReducedMdpSolution(ArrayModel):
    """Open-loop policy scores maximizing a societal objective, with the induced pair."""

    scores: FloatArray
    policy: TimeVaryingPolicy
    flow: MeanFieldFlow
    value: float
    steps: int = Field(ge=0)
    converged: bool
    history: list[float] = Field(default_factory=list)


class MfirlResult(ArrayModel):
    """Trained individual reward parameters and the per-epoch log."""

    params: RewardParams
    log: list[TrainingLogEntry] = Field(default_factory=list)


class PlirlResult(ArrayModel):
    """Trained societal reward, its per-epoch log and the last inner solution."""

    model: SocietalRewardModel
    log: list[TrainingLogEntry] = Field(default_factory=list)
    inner: ReducedMdpSolution
