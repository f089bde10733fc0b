"""Exception hierarchy shared by every toolkit module."""

from __future__ import annotations

from typing import Optional


class MeanFieldError(Exception):
    """Base class for all toolkit errors."""


class ArgumentError(MeanFieldError, ValueError):
    """An argument is outside its documented domain."""


class ContractViolationError(MeanFieldError, ValueError):
    """Inputs do not share consistent dimensions."""


class KernelIntegrityError(MeanFieldError):
    """A transition kernel returned something that is not a distribution."""


class NumericDivergenceError(MeanFieldError, ArithmeticError):
    """A computation produced non-finite values."""

    def __init__(self, message: str, location: Optional[tuple[int, ...]] = None) -> None:
        self.location = location
        if location is not None:
            message = f"{message} at {location}"
        super().__init__(message)


class TrainingDivergenceError(NumericDivergenceError):
    """An iterative optimizer diverged; ``location`` holds the step or epoch index."""


class DemoParseError(MeanFieldError, ValueError):
    """A demonstration file line could not be parsed."""

    def __init__(self, message: str, line_number: int) -> None:
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class DemoIntegrityError(MeanFieldError, ValueError):
    """A demonstration file disagrees with its own metadata."""
