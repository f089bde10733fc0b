"""reward.json artifacts: architecture, flat parameters and training metadata."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, Field

from meanfield.models.reward import RewardArchitecture, RewardParams
from meanfield.utils.logger import get_logger

logger = get_logger(__name__)


class RewardArtifact(BaseModel):
    """Serialized reward model."""

    model_config = {"extra": "forbid"}

    target: Literal["individual", "societal"] = "individual"
    architecture: RewardArchitecture
    theta: list[float]
    num_states: int = Field(gt=0)
    num_actions: int = Field(gt=0)
    metadata: dict[str, Any] = Field(default_factory=dict)

    @property
    def params(self) -> RewardParams:
        return RewardParams(theta=self.theta, architecture=self.architecture)


def save_reward(
    params: RewardParams,
    path: Union[str, Path],
    num_states: int,
    num_actions: int,
    metadata: Optional[dict[str, Any]] = None,
    target: Literal["individual", "societal"] = "individual",
) -> Path:
    """Write a reward artifact to ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    artifact = RewardArtifact(
        target=target,
        architecture=params.architecture,
        theta=params.theta.tolist(),
        num_states=num_states,
        num_actions=num_actions,
        metadata=metadata or {},
    )
    path.write_text(artifact.model_dump_json(indent=2), encoding="utf-8")
    logger.info(f"Saved {target} reward ({params.dim} parameters) to {path}")
    return path


def load_reward(path: Union[str, Path]) -> RewardArtifact:
    """Read a reward artifact; raises ``pydantic.ValidationError`` on malformed content."""
    return RewardArtifact.model_validate_json(Path(path).read_text(encoding="utf-8"))
