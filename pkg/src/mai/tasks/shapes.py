"""Parametric loops used as ground-truth latent rings."""

import numpy as np

from src.mai.config import SHAPE_CENTERS, SHAPES
from src.mai.types import FloatArray, UnknownShape


def _circle(u: FloatArray) -> FloatArray:
    return np.column_stack([np.cos(u), np.sin(u)])


def _figure8(u: FloatArray) -> FloatArray:
    # Lobes on either side of the crossing at the center
    return np.column_stack([2.0 * np.sin(u), np.sin(2.0 * u)])


_CURVES = {"circle": _circle, "figure8": _figure8}


def sample_loop(
    shape: str,
    steps: int,
    closed: bool = True,
    fraction: float = 1.0,
    scale: float = 1.0,
    shift: tuple[float, float] = (0.0, 0.0),
) -> FloatArray:
    """Sample a loop at evenly spaced parameter values.

    A closed loop spans the full period, so the first and last samples coincide.
    An open loop stops after ``fraction`` of the period.

    Raises:
        UnknownShape: If the shape is not registered
    """
    if shape not in _CURVES or shape not in SHAPES:
        raise UnknownShape(f"unknown shape: {shape!r}")
    span = 1.0 if closed else fraction
    u = 2.0 * np.pi * span * np.linspace(0.0, 1.0, steps)
    points = scale * _CURVES[shape](u) + np.asarray(SHAPE_CENTERS[shape]) + np.asarray(shift)
    if closed:
        points[-1] = points[0]
    return points


def expected_betti1(shape: str) -> int:
    """Number of independent loops in the shape's image."""
    if shape not in _CURVES:
        raise UnknownShape(f"unknown shape: {shape!r}")
    return {"circle": 1, "figure8": 2}[shape]
