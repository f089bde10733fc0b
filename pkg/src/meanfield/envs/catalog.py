"""Catalog of the five benchmark games in their original and perturbed variants."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Union

from pydantic import BaseModel

from meanfield.envs.dynamics import (
    NUM_LEVELS,
    InvestKernel,
    VirusKernel,
    invest_reward,
    left_right_reward,
    malware_kernel,
    malware_reward,
    move_kernel,
    rps_reward,
    virus_reward,
)
from meanfield.models.game import MeanField
from meanfield.models.oracles import TabularKernel
from meanfield.models.spec import EnvName, EnvVariant, MfgSpec
from meanfield.utils.config import get_settings
from meanfield.utils.errors import ArgumentError

# Probability that the perturbed RPS / LR dynamics ignore the chosen move.
MOVE_NOISE = 0.2


class EnvDescription(BaseModel):
    """Human-readable summary of an environment, as printed by ``env describe``."""

    model_config = {"extra": "forbid", "frozen": True}

    name: EnvName
    variant: EnvVariant
    num_states: int
    num_actions: int
    horizon: int
    discount: float
    cooperative: bool
    state_labels: list[str]
    action_labels: list[str]
    initial_mean_field: list[float]
    parameters: dict[str, float]


_LABELS: dict[EnvName, tuple[list[str], list[str]]] = {
    EnvName.INVEST: ([str(s) for s in range(NUM_LEVELS)], ["hold", "invest"]),
    EnvName.MALWARE: ([str(s) for s in range(NUM_LEVELS)], ["do_nothing", "intervene"]),
    EnvName.VIRUS: (["S", "I"], ["U", "D"]),
    EnvName.RPS: (["R", "P", "S"], ["R", "P", "S"]),
    EnvName.LR: (["C", "L", "R"], ["L", "R"]),
}

_COOPERATIVE = {EnvName.VIRUS, EnvName.LR}


def _parse(
    name: Union[EnvName, str], variant: Union[EnvVariant, str]
) -> tuple[EnvName, EnvVariant]:
    try:
        return EnvName(name), EnvVariant(variant)
    except ValueError as e:
        raise ArgumentError(f"unknown environment or variant: {name!r}/{variant!r}") from e


def env_parameters(
    name: Union[EnvName, str], variant: Union[EnvVariant, str]
) -> dict[str, float]:
    """Constants of an environment variant."""
    env, var = _parse(name, variant)
    new = var == EnvVariant.NEW
    if env == EnvName.INVEST:
        return {"d": 0.3, "c": 0.2, "alpha": 0.2, "q": 5.0 if new else 4.0, "chi_low": 0.0}
    if env == EnvName.MALWARE:
        return {"k": 0.2, "alpha": 0.5, "chi_low": 0.5 if new else 0.0}
    if env == EnvName.VIRUS:
        return {"infection": 0.8**2 if new else 0.9**2, "recovery": 0.3, "distancing_cost": 0.5}
    return {"move_noise": MOVE_NOISE if new else 0.0}


def make_env(
    name: Union[EnvName, str],
    variant: Union[EnvVariant, str] = EnvVariant.ORIGINAL,
    horizon: Optional[int] = None,
    discount: Optional[float] = None,
) -> MfgSpec:
    """
    Build a benchmark game with its ground-truth reward.

    Args:
        name: Environment name
        variant: ORIGINAL or NEW dynamics
        horizon: Override of the default horizon T
        discount: Override of the default discount

    Returns:
        Fully populated game definition

    Raises:
        ArgumentError: On an unknown name or variant
    """
    env, var = _parse(name, variant)
    params = env_parameters(env, var)
    settings = get_settings()

    if env == EnvName.INVEST:
        num_states, num_actions = NUM_LEVELS, 2
        kernel = InvestKernel(params["q"])
        reward = invest_reward(params["d"], params["c"], params["alpha"])
        mu0 = MeanField.uniform(num_states)
    elif env == EnvName.MALWARE:
        num_states, num_actions = NUM_LEVELS, 2
        kernel = TabularKernel(malware_kernel(Fraction(params["chi_low"])))
        reward = malware_reward(params["k"], params["alpha"])
        mu0 = MeanField.uniform(num_states)
    elif env == EnvName.VIRUS:
        num_states, num_actions = 2, 2
        kernel = VirusKernel(params["infection"], params["recovery"])
        reward = virus_reward(distancing_cost=params["distancing_cost"])
        mu0 = MeanField.uniform(num_states)
    elif env == EnvName.RPS:
        num_states, num_actions = 3, 3
        kernel = TabularKernel(move_kernel([0, 1, 2], 3, params["move_noise"], [0, 1, 2]))
        reward = rps_reward()
        mu0 = MeanField.uniform(num_states)
    else:
        num_states, num_actions = 3, 2
        kernel = TabularKernel(move_kernel([1, 2], 3, params["move_noise"], [1, 2]))
        reward = left_right_reward()
        mu0 = MeanField(probs=[0.0, 0.5, 0.5])

    return MfgSpec(
        num_states=num_states,
        num_actions=num_actions,
        horizon=horizon if horizon is not None else settings.default_horizon,
        discount=discount if discount is not None else settings.default_discount,
        initial_mean_field=mu0,
        transition=kernel,
        reward=reward,
        name=env.value,
        variant=var.value,
    )


def describe_env(
    name: Union[EnvName, str], variant: Union[EnvVariant, str] = EnvVariant.ORIGINAL
) -> EnvDescription:
    """Summarize sizes, labels and constants of an environment variant."""
    spec = make_env(name, variant)
    env, var = _parse(name, variant)
    states, actions = _LABELS[env]
    return EnvDescription(
        name=env,
        variant=var,
        num_states=spec.num_states,
        num_actions=spec.num_actions,
        horizon=spec.horizon,
        discount=spec.discount,
        cooperative=env in _COOPERATIVE,
        state_labels=states,
        action_labels=actions,
        initial_mean_field=spec.initial_mean_field.probs.tolist(),
        parameters=env_parameters(env, var),
    )


def list_envs() -> list[EnvName]:
    return list(EnvName)
