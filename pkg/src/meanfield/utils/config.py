"""Configuration management using Pydantic Settings."""

from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings from environment variables (prefix ``MEANFIELD_``)."""

    model_config = SettingsConfigDict(
        env_prefix="MEANFIELD_", env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    # Game defaults
    default_horizon: int = 50
    default_discount: float = 0.99
    agents_per_play: int = 100

    # Numerical tolerances
    simplex_tol: float = 1e-9
    tie_tol: float = 1e-9
    kl_floor: float = 1e-10

    # MFNE fixed point
    fixed_point_max_iters: int = 500
    fixed_point_mse_tol: float = 1e-10
    # damping used when solving experts for demonstrations; the solver itself defaults to none
    fixed_point_expert_damping: float = 0.5

    # MFSO / reduced MDP
    mfso_learning_rate: float = 0.05
    mfso_max_steps: int = 5000
    mfso_grad_tol: float = 1e-7
    mfso_max_halvings: int = 20

    # MFIRL
    mfirl_beta: float = 1.0
    mfirl_learning_rate: float = 1e-4
    mfirl_epochs: int = 500
    mfirl_mc_samples: int = 32

    # PLIRL
    plirl_outer_epochs: int = 50
    plirl_outer_learning_rate: float = 1e-3
    plirl_inner_max_steps: int = 200

    # Reward networks
    reward_hidden_width: int = 64
    leaky_relu_slope: float = 0.01

    # Experiments
    experiment_workers: int = 1

    # Logging
    log_level: str = "WARNING"
    log_format: str = "console"
    log_file: Optional[str] = None


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
