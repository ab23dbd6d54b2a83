"""Left-to-right column reduction of the filtered boundary matrix over GF(2).

Columns are kept as sets of row indices so the xor of two columns is a set
symmetric difference. The change-of-basis matrix V is tracked alongside R, which
gives representatives for infinite bars.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field

from src.mai.chaincore import Chain

from .diagram import Bar, PersistenceDiagram
from .filtration import Filtration

logger = logging.getLogger(__name__)


@dataclass
class ReducedBoundary:
    """Reduced boundary matrix R = D V together with the pivot lookup."""

    filtration: Filtration
    columns: list[set[int]]
    v: list[set[int]]
    pivot_of: dict[int, int]

    def chain_of(self, column: Iterable[int]) -> Chain:
        entries = self.filtration.entries
        indices = list(column)
        if not indices:
            return Chain(0)
        dim = entries[indices[0]][0].dim
        return Chain(dim, frozenset(entries[i][0] for i in indices))

    def indices_of(self, c: Chain, cutoff: int | None = None) -> set[int] | None:
        """Row indices of a chain, or None when a term is missing or falls past cutoff."""
        limit = len(self.filtration) if cutoff is None else cutoff
        index = self.filtration.index
        out: set[int] = set()
        for s in c.terms:
            i = index.get(s)
            if i is None or i >= limit:
                return None
            out.add(i)
        return out

    def residual(self, column: set[int], cutoff: int) -> set[int]:
        """Eliminate leading entries using reduced columns with index below cutoff."""
        col = set(column)
        while col:
            j = self.pivot_of.get(max(col))
            if j is None or j >= cutoff:
                break
            col ^= self.columns[j]
        return col

    def is_boundary_below(self, c: Chain, cutoff: int) -> bool:
        """True iff c bounds in the subcomplex made of the first cutoff entries."""
        if c.is_zero():
            return True
        column = self.indices_of(c, cutoff)
        if column is None:
            return False
        return not self.residual(column, cutoff)

    def diagram(self) -> PersistenceDiagram:
        entries = self.filtration.entries
        bars: list[Bar] = []
        paired: set[int] = set()
        for low, j in self.pivot_of.items():
            paired.add(low)
            paired.add(j)
            simplex, birth = entries[low]
            bars.append(Bar(simplex.dim, birth, entries[j][1], self.chain_of(self.columns[j])))
        for i, (simplex, birth) in enumerate(entries):
            if i in paired or self.columns[i]:
                continue
            bars.append(Bar(simplex.dim, birth, float("inf"), self.chain_of(self.v[i])))
        bars.sort(key=lambda b: (b.dim, b.birth, b.death))
        return PersistenceDiagram(tuple(bars), self.filtration)


@dataclass
class CycleSpan:
    """Incremental span test: boundaries born before a cutoff plus explicitly added cycles.

    Added cycles may use any simplex of the filtration; only the boundary
    columns are restricted to the cutoff.
    """

    reduced: ReducedBoundary
    cutoff: int
    basis: dict[int, set[int]] = field(default_factory=dict)

    def _reduce(self, column: set[int]) -> set[int]:
        col = set(column)
        while col:
            low = max(col)
            j = self.reduced.pivot_of.get(low)
            if j is not None and j < self.cutoff:
                col ^= self.reduced.columns[j]
            elif low in self.basis:
                col ^= self.basis[low]
            else:
                break
        return col

    def contains(self, c: Chain) -> bool:
        if c.is_zero():
            return True
        column = self.reduced.indices_of(c)
        if column is None:
            return False
        return not self._reduce(column)

    def add(self, c: Chain) -> bool:
        """Add a cycle; returns False if it was already in the span."""
        if c.is_zero():
            return False
        column = self.reduced.indices_of(c)
        if column is None:
            return False
        col = self._reduce(column)
        if not col:
            return False
        self.basis[max(col)] = col
        return True


def reduce_boundary(f: Filtration) -> ReducedBoundary:
    """Run the standard reduction and keep R, V and the pivot table."""
    index = f.index
    columns: list[set[int]] = []
    v: list[set[int]] = []
    pivot_of: dict[int, int] = {}
    for j, (simplex, _) in enumerate(f.entries):
        col = {index[face] for face in simplex.faces()}
        basis = {j}
        while col:
            k = pivot_of.get(max(col))
            if k is None:
                break
            col ^= columns[k]
            basis ^= v[k]
        if col:
            pivot_of[max(col)] = j
        columns.append(col)
        v.append(basis)
    logger.debug(f"Reduced {len(f)} columns into {len(pivot_of)} pairs")
    return ReducedBoundary(f, columns, v, pivot_of)


def reduce(f: Filtration) -> PersistenceDiagram:
    """Barcode of a filtration with a representative cycle for each bar."""
    return reduce_boundary(f).diagram()
