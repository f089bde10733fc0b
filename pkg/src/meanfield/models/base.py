"""Base model for pydantic models that carry numpy arrays."""

from __future__ import annotations

from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer

from meanfield.utils.config import get_settings


def _as_float_array(value: Any) -> np.ndarray:
    array = np.array(value, dtype=np.float64)
    array.setflags(write=False)
    return array


def _as_int_array(value: Any) -> np.ndarray:
    array = np.array(value, dtype=np.int64)
    array.setflags(write=False)
    return array


def _to_list(array: np.ndarray) -> list[Any]:
    return array.tolist()


FloatArray = Annotated[
    np.ndarray, BeforeValidator(_as_float_array), PlainSerializer(_to_list, when_used="json")
]
IntArray = Annotated[
    np.ndarray, BeforeValidator(_as_int_array), PlainSerializer(_to_list, when_used="json")
]


class ArrayModel(BaseModel):
    """Frozen model whose array fields compare by value."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True, extra="forbid")

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        for name in type(self).model_fields:
            mine, theirs = getattr(self, name), getattr(other, name)
            if isinstance(mine, np.ndarray) or isinstance(theirs, np.ndarray):
                if not np.array_equal(mine, theirs):
                    return False
            elif mine != theirs:
                return False
        return True

    __hash__ = None  # type: ignore[assignment]


def check_distributions(array: np.ndarray, what: str) -> np.ndarray:
    """
    Validate that the last axis of ``array`` holds probability distributions.

    Args:
        array: Array whose last axis sums to one
        what: Name used in the error message

    Returns:
        The array, unchanged

    Raises:
        ValueError: If an entry is negative, non-finite or a row does not sum to one
    """
    tol = get_settings().simplex_tol
    if array.size == 0:
        raise ValueError(f"{what} is empty")
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{what} has non-finite entries")
    if np.any(array < -tol):
        raise ValueError(f"{what} has negative entries")
    deviation = np.max(np.abs(array.sum(axis=-1) - 1.0))
    if deviation > tol:
        raise ValueError(f"{what} rows must sum to 1 (max deviation {deviation:.3e})")
    return array
