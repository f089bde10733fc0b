"""expert.json artifacts: an equilibrium together with the game it was solved on."""

from __future__ import annotations

from pathlib import Path
from typing import Union

from pydantic import BaseModel, Field

from meanfield.models.results import EquilibriumResult
from meanfield.models.spec import EnvName, EnvVariant, MfgSpec
from meanfield.utils.logger import get_logger

logger = get_logger(__name__)


class ExpertArtifact(BaseModel):
    """Serialized expert equilibrium."""

    model_config = {"extra": "forbid", "frozen": True}

    env: EnvName
    variant: EnvVariant
    horizon: int = Field(ge=1)
    discount: float = Field(gt=0.0, le=1.0)
    result: EquilibriumResult


def save_expert(result: EquilibriumResult, spec: MfgSpec, path: Union[str, Path]) -> Path:
    """Write the equilibrium ``result`` of the benchmark game ``spec`` to ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    artifact = ExpertArtifact(
        env=EnvName(spec.name),
        variant=EnvVariant(spec.variant),
        horizon=spec.horizon,
        discount=spec.discount,
        result=result,
    )
    path.write_text(artifact.model_dump_json(), encoding="utf-8")
    logger.info(f"Saved {result.solver} expert for '{spec.name}' to {path}")
    return path


def load_expert(path: Union[str, Path]) -> ExpertArtifact:
    return ExpertArtifact.model_validate_json(Path(path).read_text(encoding="utf-8"))
