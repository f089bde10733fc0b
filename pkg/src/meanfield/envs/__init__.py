"""Benchmark environments and the feature encoding used by reward models."""

from meanfield.envs.catalog import (
    EnvDescription,
    describe_env,
    env_parameters,
    list_envs,
    make_env,
)
from meanfield.envs.dynamics import AffineReward, floor_uniform_law
from meanfield.envs.features import encode_features, feature_dim, feature_table, flow_features
from meanfield.models.spec import EnvName, EnvVariant

__all__ = [
    "EnvName",
    "EnvVariant",
    "EnvDescription",
    "make_env",
    "describe_env",
    "env_parameters",
    "list_envs",
    "AffineReward",
    "floor_uniform_law",
    "encode_features",
    "feature_dim",
    "feature_table",
    "flow_features",
]
