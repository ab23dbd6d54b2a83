"""Fast per-episode gain/offset corrections applied on top of a retrieved template."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from src.mai.config import LATENT_DIM, RESIDUAL_HISTORY, SCAFFOLD_BOUND
from src.mai.types import ClassId, FloatArray


def _clip_norm(v: FloatArray, bound: float) -> FloatArray:
    norm = float(np.linalg.norm(v))
    return v if norm <= bound else v * (bound / norm)


@dataclass(frozen=True, eq=False)
class ResidualEntry:
    class_id: ClassId
    phase: float
    residual: FloatArray


@dataclass(eq=False)
class Scaffold:
    """Gain and offset about a template's centroid: c + g * (p - c) + o.

    Both corrections are clipped to ``bound`` (the gain as a deviation from 1).
    The scaffold is reset at every episode and never persisted.
    """

    dim: int = LATENT_DIM
    bound: float = SCAFFOLD_BOUND
    frozen: bool = False
    gain: FloatArray = field(init=False)
    offset: FloatArray = field(init=False)
    residual_history: deque[ResidualEntry] = field(init=False)

    def __post_init__(self) -> None:
        self.reset()

    def reset(self) -> None:
        self.gain = np.ones(self.dim)
        self.offset = np.zeros(self.dim)
        self.residual_history = deque(maxlen=RESIDUAL_HISTORY)

    def apply(self, point: FloatArray, center: FloatArray) -> FloatArray:
        return center + self.gain * (point - center) + self.offset

    def step(
        self,
        residual: FloatArray,
        point: FloatArray,
        center: FloatArray,
        eta: float,
        class_id: ClassId = "",
        phase: float = 0.0,
    ) -> None:
        """One gradient step on 0.5 * ||residual||^2; a frozen scaffold is left untouched."""
        if self.frozen:
            return
        self.residual_history.append(ResidualEntry(class_id, phase, np.array(residual, dtype=float)))
        self.offset = _clip_norm(self.offset - eta * residual, self.bound)
        deviation = (self.gain - 1.0) - eta * residual * (point - center)
        self.gain = 1.0 + _clip_norm(deviation, self.bound)

    def magnitudes(self) -> list[float]:
        return [float(np.linalg.norm(e.residual)) for e in self.residual_history]

    def norm(self) -> float:
        return float(np.linalg.norm(np.concatenate([self.gain - 1.0, self.offset])))
