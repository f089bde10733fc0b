"""Parameterized reward models."""

from meanfield.rewards.adam import adam_step
from meanfield.rewards.networks import (
    ParametricReward,
    forward_batch,
    individual_architecture,
    init_params,
    input_grad_batch,
    param_grad_batch,
    reward_forward,
    reward_grad,
    unpack_layers,
)
from meanfield.rewards.storage import RewardArtifact, load_reward, save_reward

__all__ = [
    "init_params",
    "unpack_layers",
    "forward_batch",
    "param_grad_batch",
    "input_grad_batch",
    "reward_forward",
    "reward_grad",
    "individual_architecture",
    "ParametricReward",
    "adam_step",
    "RewardArtifact",
    "save_reward",
    "load_reward",
]
