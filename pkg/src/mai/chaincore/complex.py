"""Face-closed simplicial complexes and exact homology over the two-element field.

This is the small-instance oracle: everything is dense Gaussian elimination, which
is fine for the few dozen simplices the tests and the CLI throw at it. Scalable
work goes through the persistence reduction instead.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import numpy.typing as npt

from src.mai.config import MAX_SIMPLEX_DIM
from src.mai.types import NotACycle

from .chain import Chain, is_cycle
from .simplex import Simplex

logger = logging.getLogger(__name__)

GF2Matrix = npt.NDArray[np.uint8]


@dataclass(frozen=True)
class SimplicialComplex:
    """A finite face-closed set of simplices."""

    simplices: frozenset[Simplex]

    def __post_init__(self) -> None:
        missing = [f for s in self.simplices for f in s.faces() if f not in self.simplices]
        if missing:
            raise ValueError(f"complex is not face-closed, missing {sorted(set(missing))[:5]}")
        if any(s.dim > MAX_SIMPLEX_DIM for s in self.simplices):
            raise ValueError(f"simplices above dimension {MAX_SIMPLEX_DIM} are not supported")

    @classmethod
    def closure_of(cls, simplices: Iterable[Simplex]) -> SimplicialComplex:
        """Build the smallest complex containing the given simplices."""
        return cls(frozenset(face for s in simplices for face in s.closure()))

    @property
    def max_dim(self) -> int:
        return max((s.dim for s in self.simplices), default=-1)

    def skeleton(self, k: int) -> list[Simplex]:
        """Sorted simplices of exactly dimension k."""
        return self._by_dim.get(k, [])

    def supports(self, c: Chain) -> bool:
        return c.terms <= self.simplices

    @cached_property
    def _by_dim(self) -> dict[int, list[Simplex]]:
        groups: dict[int, list[Simplex]] = {}
        for s in self.simplices:
            groups.setdefault(s.dim, []).append(s)
        return {k: sorted(v) for k, v in groups.items()}

    def boundary_matrix(self, k: int) -> GF2Matrix:
        """Matrix of the boundary map from k-chains to (k-1)-chains."""
        rows = self.skeleton(k - 1)
        cols = self.skeleton(k)
        index = {s: i for i, s in enumerate(rows)}
        m = np.zeros((len(rows), len(cols)), dtype=np.uint8)
        if k == 0:
            return m
        for j, s in enumerate(cols):
            for face in s.faces():
                m[index[face], j] = 1
        return m

    def vector(self, c: Chain) -> GF2Matrix:
        """Coordinate vector of a chain in the sorted k-simplex basis."""
        index = {s: i for i, s in enumerate(self.skeleton(c.dim))}
        v = np.zeros(len(index), dtype=np.uint8)
        for s in c.terms:
            v[index[s]] = 1
        return v


def gf2_rank(m: GF2Matrix) -> int:
    """Rank of a 0/1 matrix over the two-element field."""
    a = (m.copy() % 2).astype(np.uint8)
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivots = np.nonzero(a[rank:, col])[0]
        if pivots.size == 0:
            continue
        pivot = rank + int(pivots[0])
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        below = np.nonzero(a[:, col])[0]
        below = below[below != rank]
        a[below] ^= a[rank]
        rank += 1
    return rank


def gf2_solvable(a: GF2Matrix, b: GF2Matrix) -> bool:
    """True iff a x = b has a solution over the two-element field."""
    if a.size == 0:
        return not b.any()
    return gf2_rank(a) == gf2_rank(np.column_stack([a, b]))


def is_boundary(c: Chain, k: SimplicialComplex) -> bool:
    """True iff c is the boundary of some (dim+1)-chain of k."""
    if c.is_zero():
        return True
    if not k.supports(c):
        return False
    if not k.skeleton(c.dim + 1):
        return False
    return gf2_solvable(k.boundary_matrix(c.dim + 1), k.vector(c))


def betti(k: SimplicialComplex, dim: int) -> int:
    """Rank of ker of the boundary at dim minus rank of im of the boundary at dim+1."""
    n = len(k.skeleton(dim))
    if n == 0:
        return 0
    rank_here = gf2_rank(k.boundary_matrix(dim)) if dim > 0 else 0
    above = k.boundary_matrix(dim + 1)
    rank_above = gf2_rank(above) if above.size else 0
    return n - rank_here - rank_above


def class_equal(c1: Chain, c2: Chain, k: SimplicialComplex) -> bool:
    """True iff two cycles are homologous in k."""
    for c in (c1, c2):
        if not is_cycle(c):
            raise NotACycle(f"chain of dimension {c.dim} with {len(c)} terms is not a cycle")
    return is_boundary(c1 + c2, k)
