"""Solver and trainer options; defaults come from the cached settings."""

from __future__ import annotations

import enum
from collections.abc import Callable
from typing import Any, Optional

from pydantic import BaseModel, Field

from meanfield.utils.config import get_settings


def _setting(name: str) -> Callable[[], Any]:
    return lambda: getattr(get_settings(), name)


class FixedPointOptions(BaseModel):
    """Options for MFNE fixed-point iteration."""

    model_config = {"extra": "forbid", "frozen": True}

    max_iters: int = Field(default_factory=_setting("fixed_point_max_iters"), gt=0)
    mse_tol: float = Field(default_factory=_setting("fixed_point_mse_tol"), gt=0.0)
    damping: float = Field(default=0.0, ge=0.0, lt=1.0)
    beta_soft: Optional[float] = Field(default=None, gt=0.0)


class MfsoOptions(BaseModel):
    """Options for gradient ascent on the reduced MDP."""

    model_config = {"extra": "forbid", "frozen": True}

    learning_rate: float = Field(default_factory=_setting("mfso_learning_rate"), gt=0.0)
    max_steps: int = Field(default_factory=_setting("mfso_max_steps"), gt=0)
    grad_tol: float = Field(default_factory=_setting("mfso_grad_tol"), ge=0.0)
    max_halvings: int = Field(default_factory=_setting("mfso_max_halvings"), ge=0)
    seed: int = 0


class DynamicsMode(str, enum.Enum):
    """How next-state expectations are taken in the MFIRL backward pass."""

    EXACT = "exact"
    MONTE_CARLO = "mc"


class MfirlOptions(BaseModel):
    """
    Options for the MFIRL trainer.

    ``truncation_horizon`` H cuts the gradient recursion H + 1 steps ahead. Values of H from
    T - 1 up to the horizon T cut nothing and give the full tables; H above T is rejected by
    the trainer, which knows T.
    """

    model_config = {"extra": "forbid", "frozen": True}

    beta: float = Field(default_factory=_setting("mfirl_beta"), gt=0.0)
    epochs: int = Field(default_factory=_setting("mfirl_epochs"), gt=0)
    lr: float = Field(default_factory=_setting("mfirl_learning_rate"), ge=0.0)
    truncation_horizon: Optional[int] = Field(default=None, gt=0)
    dynamics_mode: DynamicsMode = DynamicsMode.EXACT
    mc_samples: int = Field(default_factory=_setting("mfirl_mc_samples"), ge=1)
    seed: int = 0


class PlirlOptions(BaseModel):
    """Options for the population-level IRL baseline."""

    model_config = {"extra": "forbid", "frozen": True}

    outer_epochs: int = Field(default_factory=_setting("plirl_outer_epochs"), gt=0)
    outer_lr: float = Field(default_factory=_setting("plirl_outer_learning_rate"), gt=0.0)
    inner: MfsoOptions = Field(
        default_factory=lambda: MfsoOptions(max_steps=get_settings().plirl_inner_max_steps)
    )
    seed: int = 0
