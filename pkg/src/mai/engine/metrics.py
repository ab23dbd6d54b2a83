"""Closure and residual metrics reported per episode."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from scipy.stats import entropy

from src.mai.chaincore import Chain, boundary
from src.mai.config import ENTROPY_BINS, ENTROPY_RANGE, ENTROPY_WINDOW
from src.mai.tasks import LatentTrajectory, StateGraph
from src.mai.types import ClassId, DegenerateSeries, FloatArray, TargetUnreachable

from .reports import EpisodeReport


def residual_boundary_norm(g: StateGraph, tr: LatentTrajectory | FloatArray) -> int:
    """Support size of the boundary of the trajectory's 1-chain in the binned graph.

    Each state is snapped to its nearest node; a closed walk has no boundary and
    an open one leaves its two endpoints.
    """
    states = tr.states if isinstance(tr, LatentTrajectory) else tr
    chain = Chain.edge_path(g.snap(states).tolist())
    return len(boundary(chain))


def histogram_entropy(
    magnitudes: Sequence[float], bins: int = ENTROPY_BINS, value_range: tuple[float, float] = ENTROPY_RANGE
) -> float:
    """Entropy in bits of a fixed-width histogram; out-of-range values land in the edge bins."""
    if len(magnitudes) == 0:
        return 0.0
    lo, hi = value_range
    clipped = np.clip(np.asarray(magnitudes, dtype=float), lo, hi)
    counts, _ = np.histogram(clipped, bins=bins, range=value_range)
    return float(entropy(counts, base=2))


def entropy_proxy(history: Sequence[EpisodeReport], window: int = ENTROPY_WINDOW) -> float:
    """Residual-magnitude entropy grouped by decoded class and averaged over classes.

    Only the last ``window`` reports are used.
    """
    groups: dict[ClassId, list[float]] = {}
    for report in history[-window:]:
        for cid, loss in zip(report.step_classes, report.residual_series, strict=True):
            groups.setdefault(cid, []).append(float(np.sqrt(loss)))
    if not groups:
        return 0.0
    return float(np.mean([histogram_entropy(m) for m in groups.values()]))


def inner_steps_to_target(series: Sequence[float], target: float, window: int) -> int:
    """Steps until the mean of the last ``window`` residuals first reaches target.

    Raises:
        TargetUnreachable: If the series never gets there
    """
    values = np.asarray(series, dtype=float)
    if len(values) >= window:
        means = np.convolve(values, np.ones(window) / window, mode="valid")
        hits = np.flatnonzero(means <= target)
        if hits.size:
            return int(hits[0] + window)
    raise TargetUnreachable(f"target {target} not reached in {len(values)} steps")


def contraction_fit(medians: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope of log medians against index, and gamma = exp(slope).

    A flat series has slope exactly zero.

    Raises:
        DegenerateSeries: If every median is zero
    """
    values = np.asarray(medians, dtype=float)
    if len(values) < 2:
        raise ValueError("a contraction fit needs at least two medians")
    if not np.any(values > 0):
        raise DegenerateSeries("all residual medians are zero")
    logs = np.log(np.maximum(values, np.finfo(float).tiny))
    if np.all(logs == logs[0]):
        return 0.0, 1.0
    slope = float(np.polyfit(np.arange(len(logs)), logs, 1)[0])
    return slope, float(np.exp(slope))
