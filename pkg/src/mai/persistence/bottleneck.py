"""Exact bottleneck distance between persistence diagrams."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from src.mai.types import InfiniteBarMismatch

from .diagram import Bar, PersistenceDiagram

logger = logging.getLogger(__name__)


def _augmented_costs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cost matrix with one diagonal slot per point of the opposite diagram."""
    n, m = len(a), len(b)
    size = n + m
    costs = np.full((size, size), np.inf)
    if n and m:
        costs[:n, :m] = np.maximum(
            np.abs(a[:, None, 0] - b[None, :, 0]), np.abs(a[:, None, 1] - b[None, :, 1])
        )
    half_a = (a[:, 1] - a[:, 0]) / 2 if n else np.empty(0)
    half_b = (b[:, 1] - b[:, 0]) / 2 if m else np.empty(0)
    costs[np.arange(n), m + np.arange(n)] = half_a
    costs[n + np.arange(m), np.arange(m)] = half_b
    costs[n:, m:] = 0.0
    return costs


def _has_perfect_matching(costs: np.ndarray, threshold: float) -> bool:
    allowed = csr_matrix(costs <= threshold)
    matching = maximum_bipartite_matching(allowed, perm_type="column")
    return bool(np.all(matching >= 0))


def _finite_distance(a: np.ndarray, b: np.ndarray) -> float:
    if len(a) == 0 and len(b) == 0:
        return 0.0
    costs = _augmented_costs(a, b)
    candidates = np.unique(costs[np.isfinite(costs)])
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_perfect_matching(costs, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def _points(bars: Sequence[Bar]) -> np.ndarray:
    if not bars:
        return np.empty((0, 2))
    return np.array([[b.birth, b.death] for b in bars], dtype=float)


def bottleneck(d1: PersistenceDiagram, d2: PersistenceDiagram, dim: int, strict: bool = False) -> float:
    """Bottleneck distance between the dim-bars of two diagrams.

    Finite bars are matched to each other or to the diagonal under the
    L-infinity cost; infinite bars are matched by sorted birth.

    Args:
        d1: First diagram
        d2: Second diagram
        dim: Homology dimension to compare
        strict: Raise instead of returning infinity when the infinite bars differ in count

    Returns:
        The distance, or ``math.inf`` when the infinite-bar counts differ

    Raises:
        InfiniteBarMismatch: If strict and the infinite-bar counts differ
    """
    inf1 = sorted(b.birth for b in d1.infinite(dim))
    inf2 = sorted(b.birth for b in d2.infinite(dim))
    if len(inf1) != len(inf2):
        if strict:
            raise InfiniteBarMismatch(f"H{dim}: {len(inf1)} vs {len(inf2)} infinite bars")
        logger.debug(f"H{dim} infinite bar counts differ ({len(inf1)} vs {len(inf2)})")
        return math.inf
    infinite_cost = max((abs(x - y) for x, y in zip(inf1, inf2, strict=True)), default=0.0)
    finite_cost = _finite_distance(_points(d1.finite(dim)), _points(d2.finite(dim)))
    return max(infinite_cost, finite_cost)
