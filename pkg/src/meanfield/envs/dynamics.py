"""Transition kernels and rewards of the benchmark environments."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from meanfield.models.oracles import MeanFieldLike, RewardOracle, TransitionKernel, as_probs

NUM_LEVELS = 10


def floor_uniform_law(width: Fraction, low: Fraction, high: Fraction, size: int) -> np.ndarray:
    """
    Exact law of floor(chi * width) for chi ~ U(low, high).

    P(k) is the length of [k, k+1) intersected with [low * width, high * width), divided by
    the length of the whole interval. Endpoints are rationals so half-integer boundaries
    are handled exactly.

    Args:
        width: Positive multiplier of chi
        low: Lower end of the uniform support
        high: Upper end of the uniform support
        size: Number of outcomes k = 0..size-1 to return

    Returns:
        Probability vector of length ``size``
    """
    start, stop = low * width, high * width
    span = stop - start
    probs = np.zeros(size)
    for k in range(size):
        overlap = min(stop, Fraction(k + 1)) - max(start, Fraction(k))
        if overlap > 0:
            probs[k] = float(overlap / span)
    return probs


def mean_level(mu: MeanFieldLike) -> float:
    """Average state index sum_s s * mu(s)."""
    probs = as_probs(mu)
    return float(np.dot(np.arange(probs.shape[0]), probs))


def increment_kernel(width_divisor: int, low: Fraction, high: Fraction) -> np.ndarray:
    """Rows P(s + floor(chi * (10 - s) / divisor) | s) for every level s."""
    rows = np.zeros((NUM_LEVELS, NUM_LEVELS))
    for s in range(NUM_LEVELS):
        width = Fraction(NUM_LEVELS - s, width_divisor)
        rows[s, s:] = floor_uniform_law(width, low, high, NUM_LEVELS - s)
    return rows


class InvestKernel(TransitionKernel):
    """Investing raises quality by a random amount, halved once the average quality reaches q."""

    def __init__(self, threshold: float) -> None:
        super().__init__(NUM_LEVELS, 2)
        self.threshold = threshold
        stay = np.eye(NUM_LEVELS)
        self._below = np.stack([stay, increment_kernel(1, Fraction(0), Fraction(1))], axis=1)
        self._above = np.stack([stay, increment_kernel(2, Fraction(0), Fraction(1))], axis=1)
        self._below.setflags(write=False)
        self._above.setflags(write=False)

    def matrix(self, mu: MeanFieldLike) -> np.ndarray:
        return self._below if mean_level(mu) < self.threshold else self._above


def malware_kernel(low: Fraction) -> np.ndarray:
    """Doing nothing lets infection grow; intervening resets the level to 0."""
    reset = np.zeros((NUM_LEVELS, NUM_LEVELS))
    reset[:, 0] = 1.0
    return np.stack([increment_kernel(1, low, Fraction(1)), reset], axis=1)


class VirusKernel(TransitionKernel):
    """Susceptible agents going out are infected with probability ``infection * mu(I)``."""

    SUSCEPTIBLE, INFECTED = 0, 1
    GO_OUT, DISTANCE = 0, 1

    def __init__(self, infection: float, recovery: float = 0.3) -> None:
        super().__init__(2, 2)
        self.infection = infection
        self.recovery = recovery

    def matrix(self, mu: MeanFieldLike) -> np.ndarray:
        p_infect = self.infection * as_probs(mu)[self.INFECTED]
        matrix = np.zeros((2, 2, 2))
        matrix[self.SUSCEPTIBLE, self.GO_OUT] = (1.0 - p_infect, p_infect)
        matrix[self.SUSCEPTIBLE, self.DISTANCE] = (1.0, 0.0)
        matrix[self.INFECTED, :] = (self.recovery, 1.0 - self.recovery)
        return matrix

    def mean_field_jacobian(self, mu: MeanFieldLike) -> np.ndarray:
        jacobian = np.zeros((2, 2, 2, 2))
        jacobian[self.SUSCEPTIBLE, self.GO_OUT, self.INFECTED, self.INFECTED] = self.infection
        jacobian[self.SUSCEPTIBLE, self.GO_OUT, self.SUSCEPTIBLE, self.INFECTED] = -self.infection
        return jacobian


def move_kernel(
    targets: list[int], num_states: int, noise: float, noise_states: list[int]
) -> np.ndarray:
    """
    Kernel where action a leads to state ``targets[a]``.

    With probability ``noise`` the next state is instead drawn uniformly from ``noise_states``.
    """
    num_actions = len(targets)
    matrix = np.zeros((num_states, num_actions, num_states))
    for a, target in enumerate(targets):
        matrix[:, a, target] += 1.0 - noise
        matrix[:, a, noise_states] += noise / len(noise_states)
    return matrix


class AffineReward(RewardOracle):
    """r(s, a, mu) = base[s, a] + sum_y coef[s, a, y] mu(y)."""

    def __init__(self, base: np.ndarray, coef: np.ndarray) -> None:
        base = np.array(base, dtype=np.float64)
        coef = np.array(coef, dtype=np.float64)
        super().__init__(base.shape[0], base.shape[1])
        base.setflags(write=False)
        coef.setflags(write=False)
        self.base = base
        self.coef = coef

    def table(self, mu: MeanFieldLike) -> np.ndarray:
        return self.base + self.coef @ as_probs(mu)

    def mean_field_jacobian(self, mu: MeanFieldLike) -> np.ndarray:
        return self.coef


def invest_reward(quality: float, cost: float, invest_cost: float) -> AffineReward:
    """d * s / 10 - c * <mu> - alpha * a."""
    levels = np.arange(NUM_LEVELS)
    base = quality * levels[:, None] / NUM_LEVELS - invest_cost * np.arange(2)[None, :]
    coef = np.broadcast_to(-cost * levels, (NUM_LEVELS, 2, NUM_LEVELS))
    return AffineReward(base, coef)


def malware_reward(risk: float, intervene_cost: float) -> AffineReward:
    """-(k + <mu>) * s / 10 - alpha * a."""
    levels = np.arange(NUM_LEVELS)
    base = -risk * levels[:, None] / NUM_LEVELS - intervene_cost * np.arange(2)[None, :]
    coef = -np.outer(levels / NUM_LEVELS, levels)[:, None, :].repeat(2, axis=1)
    return AffineReward(base, coef)


def virus_reward(infected_cost: float = 1.0, distancing_cost: float = 0.5) -> AffineReward:
    base = -infected_cost * np.array([[0.0, 0.0], [1.0, 1.0]])
    base -= distancing_cost * np.array([[0.0, 1.0], [0.0, 1.0]])
    return AffineReward(base, np.zeros((2, 2, 2)))


# r(s) = sum_y RPS_PAYOFF[s, y] mu(y) for rock, paper, scissors
RPS_PAYOFF = np.array(
    [
        [0.0, -1.0, 2.0],
        [4.0, 0.0, -2.0],
        [-3.0, 6.0, 0.0],
    ]
)


def rps_reward() -> AffineReward:
    coef = np.repeat(RPS_PAYOFF[:, None, :], 3, axis=1)
    return AffineReward(np.zeros((3, 3)), coef)


def left_right_reward() -> AffineReward:
    """-1{s=L} mu(L) - 1{s=R} mu(R); the center is free."""
    coef = np.zeros((3, 2, 3))
    for s in (1, 2):
        coef[s, :, s] = -1.0
    return AffineReward(np.zeros((3, 2)), coef)
