"""Filtrations: simplices paired with birth values in a deterministic order."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np
from scipy.spatial.distance import cdist

from src.mai.chaincore import Simplex, SimplicialComplex
from src.mai.config import MAX_SIMPLEX_DIM
from src.mai.types import DimensionMismatch, EmptyInput, FloatArray, NegativeWeight

logger = logging.getLogger(__name__)


def _order_key(entry: tuple[Simplex, float]) -> tuple[float, int, tuple[int, ...]]:
    simplex, birth = entry
    return (birth, simplex.dim, simplex.vertices)


@dataclass(frozen=True)
class Filtration:
    """Simplices sorted by (birth, dim, lexicographic vertices)."""

    entries: tuple[tuple[Simplex, float], ...]

    def __post_init__(self) -> None:
        seen: set[Simplex] = set()
        last = -np.inf
        for simplex, birth in self.entries:
            if birth < 0:
                raise ValueError(f"negative birth {birth} for {simplex}")
            if birth < last:
                raise ValueError("births must be nondecreasing")
            missing = [f for f in simplex.faces() if f not in seen]
            if missing:
                raise ValueError(f"{simplex} appears before its face {missing[0]}")
            seen.add(simplex)
            last = birth

    @classmethod
    def from_births(cls, births: Iterable[tuple[Simplex, float]]) -> Filtration:
        """Sort arbitrary (simplex, birth) pairs into filtration order."""
        return cls(tuple(sorted(births, key=_order_key)))

    def __len__(self) -> int:
        return len(self.entries)

    @cached_property
    def index(self) -> dict[Simplex, int]:
        return {s: i for i, (s, _) in enumerate(self.entries)}

    @cached_property
    def birth_of(self) -> dict[Simplex, float]:
        return dict(self.entries)

    def births(self) -> list[float]:
        """Distinct birth values in increasing order."""
        return sorted({b for _, b in self.entries})

    def cutoff(self, scale: float, strict: bool = False) -> int:
        """Number of leading entries with birth <= scale (< scale when strict)."""
        keys = [b for _, b in self.entries]
        side = "left" if strict else "right"
        return int(np.searchsorted(np.asarray(keys, dtype=float), scale, side=side))

    def complex_at(self, scale: float) -> SimplicialComplex:
        """The subcomplex of simplices born at or before scale."""
        return SimplicialComplex(frozenset(s for s, b in self.entries if b <= scale))

    def max_dim(self) -> int:
        return max((s.dim for s, _ in self.entries), default=-1)


def build_vr(points: Sequence[Sequence[float]] | FloatArray, max_dim: int, max_scale: float) -> Filtration:
    """Vietoris-Rips filtration on Euclidean points.

    Args:
        points: Point cloud, one row per point
        max_dim: Highest simplex dimension, at most 2
        max_scale: Simplices born later than this are dropped

    Returns:
        Filtration with vertices at 0, edges at their length and triangles at their longest edge

    Raises:
        EmptyInput: If there are no points
        DimensionMismatch: If the rows have different lengths
    """
    if len(points) == 0:
        raise EmptyInput("Vietoris-Rips needs at least one point")
    try:
        x = np.asarray(points, dtype=float)
    except ValueError as e:
        raise DimensionMismatch(f"points have inconsistent dimensions: {e}") from e
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d point array, got shape {x.shape}")
    if max_scale <= 0:
        raise ValueError("max_scale must be positive")
    max_dim = min(max_dim, MAX_SIMPLEX_DIM)

    n = x.shape[0]
    d = cdist(x, x)
    births: list[tuple[Simplex, float]] = [(Simplex((i,)), 0.0) for i in range(n)]
    if max_dim >= 1:
        ii, jj = np.nonzero(np.triu(d <= max_scale, k=1))
        births.extend((Simplex((int(i), int(j))), float(d[i, j])) for i, j in zip(ii, jj, strict=True))
    if max_dim >= 2:
        births.extend(_flag_triangles(ii, jj, lambda a, b: float(d[a, b])))
    logger.debug(f"Built VR filtration with {len(births)} simplices on {n} points")
    return Filtration.from_births(births)


def build_graph_filtration(graph: nx.Graph) -> Filtration:
    """Flag filtration of a weighted graph up to dimension 2.

    Nodes must be nonnegative integers; edges read their ``weight`` attribute.

    Raises:
        NegativeWeight: If any edge weight is negative
    """
    births: list[tuple[Simplex, float]] = [(Simplex((int(v),)), 0.0) for v in graph.nodes]
    weights: dict[tuple[int, int], float] = {}
    for u, v, w in graph.edges(data="weight", default=0.0):
        if w < 0:
            raise NegativeWeight(f"edge ({u}, {v}) has weight {w}")
        a, b = sorted((int(u), int(v)))
        if a == b:
            continue
        weights[(a, b)] = float(w)
        births.append((Simplex((a, b)), float(w)))
    if weights:
        ii, jj = zip(*weights, strict=True)
        births.extend(_flag_triangles(np.array(ii), np.array(jj), lambda a, b: weights[(a, b)]))
    return Filtration.from_births(births)


def _flag_triangles(ii, jj, weight) -> list[tuple[Simplex, float]]:  # type: ignore[no-untyped-def]
    """Triangles whose three edges are present, born at their heaviest edge."""
    neighbors: dict[int, set[int]] = {}
    for i, j in zip(ii, jj, strict=True):
        neighbors.setdefault(int(i), set()).add(int(j))
    out: list[tuple[Simplex, float]] = []
    for a, upper in neighbors.items():
        for b in upper:
            for c in upper & neighbors.get(b, set()):
                birth = max(weight(a, b), weight(a, c), weight(b, c))
                out.append((Simplex((a, b, c)), birth))
    return out
