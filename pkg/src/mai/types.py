"""Shared types, errors and protocols for the mai package."""

from typing import Protocol, runtime_checkable

import numpy as np
import numpy.typing as npt

FloatArray = npt.NDArray[np.float64]
ClassId = str


class MAIError(Exception):
    """Base class for every error raised by the mai package."""

    pass


class NotACycle(MAIError):
    """Raised when a chain expected to be a cycle has a nonempty boundary."""

    pass


class EmptyInput(MAIError):
    """Raised when an operation receives no data to work on."""

    pass


class DimensionMismatch(MAIError):
    """Raised when vectors or matrices disagree on dimension."""

    pass


class NegativeWeight(MAIError):
    """Raised when a graph filtration sees a negative edge weight."""

    pass


class InfiniteBarMismatch(MAIError):
    """Raised when two diagrams disagree on their number of infinite bars."""

    pass


class UnknownShape(MAIError):
    """Raised when a task generator is asked for an unsupported loop shape."""

    pass


class UnknownClassId(MAIError):
    """Raised when a memory update references a class id the library lacks."""

    pass


class NoSharedAnchor(MAIError):
    """Raised when libraries cannot be compared in a common anchor space."""

    pass


class NoRetrieval(MAIError):
    """Raised when a cycle template is required but none is available."""

    pass


class InsufficientEpisodes(MAIError):
    """Raised when a metric needs more episodes than it was given."""

    pass


class DegenerateSeries(MAIError):
    """Raised when a series cannot be fitted (all zero or too short)."""

    pass


class TargetUnreachable(MAIError):
    """Raised when an inner loop never reaches the residual target."""

    pass


class UnknownAblation(MAIError):
    """Raised for an ablation id outside A1..A5."""

    pass


class ParseError(MAIError):
    """Raised when an input file cannot be parsed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ConfigError(MAIError):
    """Raised for a missing or invalid configuration field."""

    def __init__(self, field: str, message: str) -> None:
        self.field = field
        super().__init__(f"{field}: {message}")


@runtime_checkable
class Aligner(Protocol):
    """Protocol for scoring a latent trajectory against a stored cycle path."""

    def cost(self, states: FloatArray, path: FloatArray) -> float:
        """Compute a nonnegative alignment cost.

        Args:
            states: Query latent states, one row per step
            path: Closed representative path, one row per landmark

        Returns:
            Alignment cost, 0 for a perfect match

        Raises:
            DimensionMismatch: If the latent dimensions differ
        """
        ...
