"""Per-epoch training logs as CSV."""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path
from typing import Union

import pandas as pd

from meanfield.models.results import TrainingLogEntry

# header name of each TrainingLogEntry field
LOG_HEADER = {"epoch": "epoch", "objective": "L", "grad_norm": "grad-norm"}
LOG_COLUMNS = list(LOG_HEADER.values())


def training_log_frame(log: Sequence[TrainingLogEntry]) -> pd.DataFrame:
    frame = pd.DataFrame([entry.model_dump() for entry in log], columns=list(LOG_HEADER))
    return frame.rename(columns=LOG_HEADER)


def write_training_log(log: Sequence[TrainingLogEntry], path: Union[str, Path]) -> Path:
    """
    Write ``log`` to ``path`` with columns epoch, L, grad-norm.

    L is the MFIRL objective; PLIRL logs its margin in the same column.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    training_log_frame(log).to_csv(path, index=False)
    return path
