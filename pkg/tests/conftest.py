"""Pytest configuration and fixtures."""

from collections.abc import Callable

import numpy as np
import pytest

from meanfield.envs.catalog import make_env
from meanfield.envs.dynamics import AffineReward
from meanfield.models.game import MeanField, TimeVaryingPolicy
from meanfield.models.oracles import TabularKernel
from meanfield.models.spec import MfgSpec
from meanfield.utils.config import Settings


@pytest.fixture(scope="session")
def test_settings() -> Settings:
    """Test settings with overrides."""
    return Settings(default_horizon=5, agents_per_play=20, log_level="WARNING")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def lr_spec() -> MfgSpec:
    """Left-right game with a short horizon."""
    return make_env("lr", horizon=5)


@pytest.fixture
def virus_spec() -> MfgSpec:
    """Virus game with a short horizon."""
    return make_env("virus", horizon=5)


@pytest.fixture
def rps_spec() -> MfgSpec:
    return make_env("rps", horizon=5)


@pytest.fixture
def random_spec() -> Callable[..., MfgSpec]:
    """Factory of random games with mean-field dependent affine rewards."""

    def build(
        seed: int = 0,
        num_states: int = 3,
        num_actions: int = 2,
        horizon: int = 4,
        discount: float = 0.9,
    ) -> MfgSpec:
        gen = np.random.default_rng(seed)
        kernel = gen.dirichlet(np.ones(num_states), size=(num_states, num_actions))
        base = gen.normal(size=(num_states, num_actions))
        coef = gen.normal(size=(num_states, num_actions, num_states))
        return MfgSpec(
            num_states=num_states,
            num_actions=num_actions,
            horizon=horizon,
            discount=discount,
            initial_mean_field=MeanField(probs=gen.dirichlet(np.ones(num_states))),
            transition=TabularKernel(kernel),
            reward=AffineReward(base, coef),
        )

    return build


@pytest.fixture
def random_policy() -> Callable[..., TimeVaryingPolicy]:
    """Factory of random time-varying policies."""

    def build(spec: MfgSpec, seed: int = 0) -> TimeVaryingPolicy:
        gen = np.random.default_rng(seed)
        probs = gen.dirichlet(
            np.ones(spec.num_actions), size=(spec.horizon + 1, spec.num_states)
        )
        return TimeVaryingPolicy(probs=probs)

    return build


@pytest.fixture
def always_left(lr_spec: MfgSpec) -> TimeVaryingPolicy:
    """Every agent of the left-right game always moves left."""
    probs = np.zeros((lr_spec.horizon + 1, lr_spec.num_states, lr_spec.num_actions))
    probs[..., 0] = 1.0
    return TimeVaryingPolicy(probs=probs)
