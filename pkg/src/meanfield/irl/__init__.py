"""Reward recovery from demonstrations: individual (MFIRL) and societal (PLIRL)."""

from meanfield.irl.mfirl import (
    MfirlTrainer,
    SoftBackward,
    empirical_expert_term,
    mfirl_train,
    objective_and_grad,
    sampled_kernels,
    soft_best_response_with_grads,
)
from meanfield.irl.plirl import (
    LearnedSocietalObjective,
    plirl_equilibrium,
    plirl_train,
    societal_architecture,
    societal_equilibrium,
    societal_features,
    societal_model,
)
from meanfield.irl.training_log import training_log_frame, write_training_log

__all__ = [
    "MfirlTrainer",
    "SoftBackward",
    "empirical_expert_term",
    "soft_best_response_with_grads",
    "objective_and_grad",
    "mfirl_train",
    "sampled_kernels",
    "LearnedSocietalObjective",
    "plirl_train",
    "plirl_equilibrium",
    "societal_architecture",
    "societal_equilibrium",
    "societal_features",
    "societal_model",
    "training_log_frame",
    "write_training_log",
]
