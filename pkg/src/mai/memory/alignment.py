"""Dynamic time warping with cyclic start handling."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from src.mai.config import CLOSURE_TOL, DTW_BAND
from src.mai.types import DimensionMismatch, EmptyInput, FloatArray

logger = logging.getLogger(__name__)


def is_closed(path: FloatArray, tol: float = CLOSURE_TOL) -> bool:
    return len(path) > 2 and bool(np.allclose(path[0], path[-1], atol=tol))


def open_cycle(path: FloatArray) -> FloatArray:
    """Drop the repeated endpoint of a closed path."""
    return path[:-1] if is_closed(path) else path


def _band_limits(n: int, m: int, band: int | None) -> tuple[np.ndarray, np.ndarray]:
    if band is None:
        return np.zeros(n, dtype=int), np.full(n, m - 1)
    center = np.arange(n) * (m - 1) / max(n - 1, 1)
    lo = np.clip(np.ceil(center - band), 0, m - 1).astype(int)
    hi = np.clip(np.floor(center + band), 0, m - 1).astype(int)
    return lo, hi


def accumulate(costs: FloatArray, band: int | None = None, free_start: bool = False) -> FloatArray:
    """Accumulated DTW cost, one vectorized pass per row.

    The horizontal recursion D[i, j] = min(diag/up, D[i, j-1]) + C[i, j] is
    solved by a running minimum over the row's cumulative sum. A Sakoe-Chiba
    band restricts each row to a contiguous window around the diagonal.
    """
    n, m = costs.shape
    lo, hi = _band_limits(n, m, band)
    acc = np.full((n, m), np.inf)
    row = costs[0, lo[0] : hi[0] + 1]
    acc[0, lo[0] : hi[0] + 1] = row if free_start else np.cumsum(row)
    for i in range(1, n):
        a, b = lo[i], hi[i] + 1
        prev = acc[i - 1]
        shifted = np.concatenate(([np.inf], prev[:-1]))
        entry = costs[i, a:b] + np.minimum(prev[a:b], shifted[a:b])
        cum = np.cumsum(costs[i, a:b])
        acc[i, a:b] = cum + np.minimum.accumulate(entry - cum)
    return acc


def warp_length(acc: FloatArray, end: int, free_start: bool = False) -> int:
    """Number of cells on the optimal warp path ending at (last row, end)."""
    i, j = acc.shape[0] - 1, end
    length = 1
    while i > 0 or (j > 0 and not free_start):
        if i == 0:
            j -= 1
        elif j == 0:
            i -= 1
        else:
            steps = ((i - 1, j - 1), (i - 1, j), (i, j - 1))
            i, j = min(steps, key=lambda ij: acc[ij])
        length += 1
    return length


def dtw(a: FloatArray, b: FloatArray, band: int | None = None) -> float:
    """Normalized DTW cost between two sequences: raw cost over warp-path length."""
    costs = cdist(a, b)
    acc = accumulate(costs, band)
    raw = acc[-1, -1]
    if not np.isfinite(raw):
        return float("inf")
    return float(raw / warp_length(acc, acc.shape[1] - 1))


def subsequence_cost(window: FloatArray, path: FloatArray) -> float:
    """Best normalized match of a short window anywhere along a closed path."""
    ring = open_cycle(path)
    doubled = np.vstack([ring, ring])
    acc = accumulate(cdist(window, doubled), free_start=True)
    end = int(np.argmin(acc[-1]))
    return float(acc[-1, end] / warp_length(acc, end, free_start=True))


@dataclass(frozen=True)
class DtwAligner:
    """Rotation-minimized DTW between a trajectory and a cyclic template."""

    band: int | None = DTW_BAND

    def cost(self, states: FloatArray, path: FloatArray) -> float:
        states = np.asarray(states, dtype=float)
        path = np.asarray(path, dtype=float)
        if len(states) == 0 or len(path) == 0:
            raise EmptyInput("alignment needs nonempty sequences")
        if states.shape[1] != path.shape[1]:
            raise DimensionMismatch(f"trajectory is {states.shape[1]}-d, template is {path.shape[1]}-d")
        ring = open_cycle(path)
        if is_closed(states):
            traj = open_cycle(states)
            start = int(np.argmin(cdist(ring[:1], traj)[0]))
            traj = np.roll(traj, -start, axis=0)
            traj = np.vstack([traj, traj[:1]])
        else:
            traj = states
        base = cdist(traj, np.vstack([ring, ring[:1]]))
        best = float("inf")
        for r in range(len(ring)):
            cols = np.concatenate([(np.arange(len(ring)) + r) % len(ring), [r]])
            acc = accumulate(base[:, cols], self.band)
            raw = acc[-1, -1]
            if not np.isfinite(raw) or raw / (len(traj) + len(ring)) >= best:
                continue
            best = min(best, float(raw / warp_length(acc, acc.shape[1] - 1)))
        return best


def align_cost(states: FloatArray, path: FloatArray, band: int | None = DTW_BAND) -> float:
    """DTW cost between latent states and a record's representative path."""
    return DtwAligner(band).cost(states, path)
