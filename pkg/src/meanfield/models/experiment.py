"""Experiment configuration and per-row metric reports."""

from __future__ import annotations

import enum
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from meanfield.models.options import FixedPointOptions, MfirlOptions, MfsoOptions, PlirlOptions
from meanfield.models.reward import RewardKind
from meanfield.models.spec import EnvName, EnvVariant
from meanfield.utils.config import get_settings


class SolverKind(str, enum.Enum):
    """Forward equilibrium concept."""

    MFNE = "mfne"
    MFSO = "mfso"


class Algorithm(str, enum.Enum):
    """Reward-recovery algorithm evaluated by the experiment pipeline."""

    MFIRL = "mfirl"
    PLIRL = "plirl"
    GROUND_TRUTH = "ground_truth"


# Cooperative games are demonstrated from the social optimum, the rest from a Nash equilibrium.
DEFAULT_EXPERT_SOLVERS: dict[EnvName, SolverKind] = {
    EnvName.INVEST: SolverKind.MFNE,
    EnvName.MALWARE: SolverKind.MFNE,
    EnvName.VIRUS: SolverKind.MFSO,
    EnvName.RPS: SolverKind.MFNE,
    EnvName.LR: SolverKind.MFSO,
}

CSV_COLUMNS = [
    "env",
    "variant",
    "algorithm",
    "plays",
    "seed",
    "dev_policy",
    "dev_mf",
    "return_learned",
    "return_expert",
    "expert_converged",
    "expert_exploitability",
    "error",
]


class MetricsReport(BaseModel):
    """Metrics of one (env, variant, algorithm, plays, seed) row."""

    model_config = {"extra": "forbid", "frozen": True}

    env: EnvName
    variant: EnvVariant
    algorithm: Algorithm
    plays: int
    seed: int
    dev_policy: Optional[float] = Field(default=None, ge=0.0)
    dev_mf: Optional[float] = Field(default=None, ge=0.0)
    return_learned: Optional[float] = None
    return_expert: Optional[float] = None
    expert_converged: Optional[bool] = None
    expert_exploitability: Optional[float] = Field(default=None, ge=0.0)
    error: Optional[str] = None

    @property
    def key(self) -> tuple[str, str, str, int, int]:
        return (self.env.value, self.variant.value, self.algorithm.value, self.plays, self.seed)

    def as_row(self) -> dict[str, object]:
        row = self.model_dump(mode="json")
        return {column: row[column] for column in CSV_COLUMNS}


class ExperimentConfig(BaseModel):
    """A full sweep, serialized as a single JSON document."""

    model_config = {"extra": "forbid", "frozen": True}

    envs: list[EnvName]
    variants: list[EnvVariant] = Field(default_factory=lambda: [EnvVariant.ORIGINAL])
    algorithms: list[Algorithm] = Field(default_factory=lambda: [Algorithm.MFIRL, Algorithm.PLIRL])
    plays: list[int]
    seeds: list[int]
    agents_per_play: int = Field(default_factory=lambda: get_settings().agents_per_play, gt=0)
    horizon: Optional[int] = Field(default=None, ge=1)
    discount: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    reward_kind: RewardKind = RewardKind.MLP
    expert_solvers: dict[EnvName, SolverKind] = Field(
        default_factory=lambda: dict(DEFAULT_EXPERT_SOLVERS)
    )
    fixed_point: FixedPointOptions = Field(
        default_factory=lambda: FixedPointOptions(
            damping=get_settings().fixed_point_expert_damping
        )
    )
    mfso: MfsoOptions = Field(default_factory=MfsoOptions)
    mfirl: MfirlOptions = Field(default_factory=MfirlOptions)
    plirl: PlirlOptions = Field(default_factory=PlirlOptions)
    workers: int = Field(default_factory=lambda: get_settings().experiment_workers, gt=0)

    @field_validator("envs", "variants", "algorithms", "plays", "seeds")
    @classmethod
    def _non_empty(cls, value: list[object]) -> list[object]:
        if not value:
            raise ValueError("sweep lists must be non-empty")
        return value

    @field_validator("plays")
    @classmethod
    def _positive_plays(cls, value: list[int]) -> list[int]:
        if any(p <= 0 for p in value):
            raise ValueError("play counts must be positive")
        return value
