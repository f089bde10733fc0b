"""Deviation metrics between an expert equilibrium and a learned one."""

from __future__ import annotations

from typing import Optional

import numpy as np
from scipy.special import rel_entr

from meanfield.models.game import MeanFieldFlow, TimeVaryingPolicy
from meanfield.utils.config import get_settings
from meanfield.utils.errors import ContractViolationError


def _floored(probs: np.ndarray, floor: float) -> np.ndarray:
    probs = np.maximum(probs, floor)
    return probs / probs.sum(axis=-1, keepdims=True)


def cumulative_kl(expert: np.ndarray, learned: np.ndarray, floor: Optional[float] = None) -> float:
    """
    Sum of KL(expert || learned) over every distribution on the last axis.

    Both sides are floored at ``floor`` (the KL floor setting by default) and renormalized.
    """
    if expert.shape != learned.shape:
        raise ContractViolationError(
            f"cannot compare distributions of shapes {expert.shape} and {learned.shape}"
        )
    floor = get_settings().kl_floor if floor is None else floor
    divergence = np.sum(rel_entr(_floored(expert, floor), _floored(learned, floor)))
    return max(0.0, float(divergence))


def dev_policy(expert: TimeVaryingPolicy, learned: TimeVaryingPolicy) -> float:
    """sum_t sum_s KL(expert_t(.|s) || learned_t(.|s))."""
    return cumulative_kl(expert.probs, learned.probs)


def dev_mf(expert: MeanFieldFlow, learned: MeanFieldFlow) -> float:
    """sum_t KL(mu_expert_t || mu_learned_t)."""
    return cumulative_kl(expert.probs, learned.probs)
