"""Transition-kernel and reward interfaces, with tabular implementations."""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Union

import numpy as np

from meanfield.models.game import MeanField

MeanFieldLike = Union[MeanField, np.ndarray]


def as_probs(mu: MeanFieldLike) -> np.ndarray:
    """Return the raw probability vector of a mean field."""
    return mu.probs if isinstance(mu, MeanField) else np.asarray(mu, dtype=np.float64)


def sample_categorical(probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Draw one index per row of ``probs`` by inverse-CDF sampling.

    Args:
        probs: Array (..., K) whose last axis holds distributions
        rng: Random generator

    Returns:
        Integer array of shape ``probs.shape[:-1]``
    """
    cdf = np.cumsum(probs, axis=-1)
    draws = rng.random(probs.shape[:-1])[..., None]
    index = np.sum(cdf <= draws, axis=-1)
    return np.minimum(index, probs.shape[-1] - 1).astype(np.int64)


class TransitionKernel(ABC):
    """P(s' | s, a, mu) as exact categorical distributions."""

    def __init__(self, num_states: int, num_actions: int) -> None:
        self.num_states = num_states
        self.num_actions = num_actions

    @abstractmethod
    def matrix(self, mu: MeanFieldLike) -> np.ndarray:
        """Return the full kernel as an (|S|, |A|, |S|) array for the mean field ``mu``."""

    def mean_field_jacobian(self, mu: MeanFieldLike) -> np.ndarray:
        """Return dP(s'|s,a,mu)/dmu(y) as an (|S|, |A|, |S|, |S|) array indexed [s, a, s', y]."""
        return np.zeros((self.num_states, self.num_actions, self.num_states, self.num_states))

    def probs(self, state: int, action: int, mu: MeanFieldLike) -> np.ndarray:
        return self.matrix(mu)[state, action]

    def sample(self, state: int, action: int, mu: MeanFieldLike, rng: np.random.Generator) -> int:
        return int(sample_categorical(self.probs(state, action, mu), rng))

    def sample_batch(
        self,
        states: np.ndarray,
        actions: np.ndarray,
        mu: MeanFieldLike,
        rng: np.random.Generator,
    ) -> np.ndarray:
        """Draw one next state per (state, action) pair, all under the same mean field."""
        return sample_categorical(self.matrix(mu)[states, actions], rng)


class RewardOracle(ABC):
    """r(s, a, mu); the terminal step reward is zero by convention and never queried."""

    def __init__(self, num_states: int, num_actions: int) -> None:
        self.num_states = num_states
        self.num_actions = num_actions

    @abstractmethod
    def table(self, mu: MeanFieldLike) -> np.ndarray:
        """Return r(., ., mu) as an (|S|, |A|) array."""

    def mean_field_jacobian(self, mu: MeanFieldLike) -> np.ndarray:
        """Return dr(s,a,mu)/dmu(y) as an (|S|, |A|, |S|) array."""
        return np.zeros((self.num_states, self.num_actions, self.num_states))

    def __call__(self, state: int, action: int, mu: MeanFieldLike) -> float:
        return float(self.table(mu)[state, action])


class TabularKernel(TransitionKernel):
    """Kernel that ignores the mean field."""

    def __init__(self, matrix: np.ndarray) -> None:
        matrix = np.array(matrix, dtype=np.float64)
        super().__init__(matrix.shape[0], matrix.shape[1])
        matrix.setflags(write=False)
        self._matrix = matrix

    def matrix(self, mu: MeanFieldLike) -> np.ndarray:
        return self._matrix


class TabularReward(RewardOracle):
    """Reward that ignores the mean field."""

    def __init__(self, table: np.ndarray) -> None:
        table = np.array(table, dtype=np.float64)
        super().__init__(table.shape[0], table.shape[1])
        table.setflags(write=False)
        self._table = table

    def table(self, mu: MeanFieldLike) -> np.ndarray:
        return self._table


class ConstantReward(TabularReward):
    """r(s, a, mu) = c everywhere."""

    def __init__(self, num_states: int, num_actions: int, value: float = 0.0) -> None:
        super().__init__(np.full((num_states, num_actions), float(value)))
        self.value = float(value)
