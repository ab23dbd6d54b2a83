"""Chains with coefficients in the two-element field."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

from .simplex import Simplex


@dataclass(frozen=True)
class Chain:
    """A formal sum of same-dimension simplices; presence means coefficient 1."""

    dim: int
    terms: frozenset[Simplex] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.dim < 0:
            raise ValueError("chain dimension must be nonnegative")
        bad = [s for s in self.terms if s.dim != self.dim]
        if bad:
            raise ValueError(f"terms of dimension != {self.dim}: {sorted(bad)}")

    @classmethod
    def from_simplices(cls, dim: int, simplices: Iterable[Simplex]) -> Chain:
        """Sum simplices with characteristic-2 cancellation."""
        terms: set[Simplex] = set()
        for s in simplices:
            terms ^= {s}
        return cls(dim, frozenset(terms))

    @classmethod
    def edge_path(cls, vertices: Iterable[int]) -> Chain:
        """Build the 1-chain walked by a vertex sequence; repeated edges cancel."""
        seq = list(vertices)
        return cls.from_simplices(
            1, (Simplex.of(a, b) for a, b in zip(seq, seq[1:], strict=False) if a != b)
        )

    def __add__(self, other: Chain) -> Chain:
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.dim != self.dim:
            raise ValueError(f"cannot add chains of dimension {self.dim} and {other.dim}")
        return Chain(self.dim, self.terms ^ other.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):  # type: ignore[no-untyped-def]
        return iter(sorted(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def vertices(self) -> set[int]:
        return {v for s in self.terms for v in s.vertices}


def boundary(c: Chain) -> Chain:
    """Return the boundary of a chain; the boundary of a 0-chain is empty."""
    if c.dim == 0:
        return Chain(0)
    return Chain.from_simplices(c.dim - 1, (face for s in c.terms for face in s.faces()))


def is_cycle(c: Chain) -> bool:
    """True iff the chain has empty boundary."""
    return boundary(c).is_zero()
