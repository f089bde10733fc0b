"""Line-delimited JSON persistence of demonstration sets.

The first line holds the metadata object; every following line holds one trajectory as
``{"s": [...], "a": [...]}``.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

import numpy as np
from pydantic import BaseModel, ValidationError

from meanfield.models.demos import DemoMetadata, DemoSet
from meanfield.utils.errors import DemoIntegrityError, DemoParseError
from meanfield.utils.logger import get_logger

logger = get_logger(__name__)


class TrajectoryRecord(BaseModel):
    """One trajectory line."""

    model_config = {"extra": "forbid"}

    s: list[int]
    a: list[int]


def save_demos(demos: DemoSet, path: Union[str, Path]) -> Path:
    """Write ``demos`` to ``path`` and return the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        f.write(demos.metadata.model_dump_json() + "\n")
        for states, actions in zip(demos.states.tolist(), demos.actions.tolist()):
            f.write(TrajectoryRecord(s=states, a=actions).model_dump_json() + "\n")
    logger.info(f"Saved {demos.num_trajectories} trajectories to {path}")
    return path


def _decode_lines(raw: bytes) -> list[str]:
    lines: list[str] = []
    for line_number, chunk in enumerate(raw.splitlines(), start=1):
        try:
            lines.append(chunk.decode("utf-8"))
        except UnicodeDecodeError as e:
            raise DemoParseError(f"invalid UTF-8 at byte {e.start}", line_number) from e
    return lines


def load_demos(path: Union[str, Path]) -> DemoSet:
    """
    Read a demonstration file written by :func:`save_demos`.

    Raises:
        DemoParseError: If a line is not valid UTF-8 or JSON, or lacks the expected fields
        DemoIntegrityError: If the trajectories disagree with the metadata
    """
    path = Path(path)
    lines = _decode_lines(path.read_bytes())
    if not lines or not lines[0].strip():
        raise DemoParseError("missing metadata line", 1)

    try:
        metadata = DemoMetadata.model_validate_json(lines[0])
    except ValidationError as e:
        raise DemoParseError(f"invalid metadata: {e.errors()[0]['msg']}", 1) from e

    records: list[TrajectoryRecord] = []
    for line_number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            record = TrajectoryRecord.model_validate_json(line)
        except ValidationError as e:
            raise DemoParseError(f"invalid trajectory: {e.errors()[0]['msg']}", line_number) from e
        expected = metadata.horizon + 1
        if len(record.s) != expected or len(record.a) != expected:
            raise DemoIntegrityError(
                f"line {line_number}: trajectory length {len(record.s)}/{len(record.a)}, "
                f"expected {expected}"
            )
        records.append(record)

    if len(records) != metadata.num_trajectories:
        raise DemoIntegrityError(
            f"{path} holds {len(records)} trajectories, metadata declares "
            f"{metadata.num_trajectories}"
        )

    try:
        return DemoSet(
            states=np.array([r.s for r in records], dtype=np.int64),
            actions=np.array([r.a for r in records], dtype=np.int64),
            env_name=metadata.env_name,
            variant=metadata.variant,
            num_states=metadata.num_states,
            num_actions=metadata.num_actions,
            horizon=metadata.horizon,
            seed=metadata.seed,
            agents_per_play=metadata.agents_per_play,
            plays=metadata.plays,
        )
    except ValidationError as e:
        raise DemoIntegrityError(f"{path} disagrees with its metadata: {e}") from e
