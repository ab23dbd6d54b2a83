"""Persistence bars, diagrams, the Pers_tau filter and CSV serialization."""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from src.mai.chaincore import Chain, format_chain

from .filtration import Filtration


@dataclass(frozen=True)
class Bar:
    """A homology class alive on [birth, death) with a representative cycle."""

    dim: int
    birth: float
    death: float
    representative: Chain

    def __post_init__(self) -> None:
        if self.death < self.birth:
            raise ValueError(f"death {self.death} precedes birth {self.birth}")

    @property
    def lifetime(self) -> float:
        return self.death - self.birth

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.death)

    def alive_at(self, scale: float) -> bool:
        return self.birth <= scale < self.death


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of bars, optionally tied to the filtration they were computed from."""

    bars: tuple[Bar, ...] = ()
    filtration: Filtration | None = field(default=None, compare=False, repr=False)

    def in_dim(self, dim: int) -> list[Bar]:
        return [b for b in self.bars if b.dim == dim]

    def finite(self, dim: int) -> list[Bar]:
        return [b for b in self.in_dim(dim) if not b.is_infinite]

    def infinite(self, dim: int) -> list[Bar]:
        return [b for b in self.in_dim(dim) if b.is_infinite]

    def betti_at(self, dim: int, scale: float) -> int:
        """Number of dim-bars alive at scale."""
        return sum(1 for b in self.in_dim(dim) if b.alive_at(scale))


def pers_tau(d: PersistenceDiagram, tau: float) -> list[Bar]:
    """Bars with lifetime >= tau; infinite bars are always kept."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    return [b for b in d.bars if b.is_infinite or b.lifetime >= tau]


def elbow_tau(d: PersistenceDiagram, dim: int = 1, default: float = 0.0) -> float:
    """Pick tau at the largest gap between sorted finite lifetimes.

    Returns the midpoint of the widest gap, or ``default`` with fewer than two
    finite bars.
    """
    lifetimes = np.sort([b.lifetime for b in d.finite(dim)])
    if lifetimes.size < 2:
        return default
    gaps = np.diff(lifetimes)
    i = int(np.argmax(gaps))
    return float((lifetimes[i] + lifetimes[i + 1]) / 2)


def diagram_to_csv(d: PersistenceDiagram | Iterable[Bar], representatives: bool = False) -> str:
    """One row per bar: dim, birth, death, lifetime; death written as ``inf`` when infinite."""
    bars = d.bars if isinstance(d, PersistenceDiagram) else tuple(d)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    header = ["dim", "birth", "death", "lifetime"]
    if representatives:
        header.append("representative")
    writer.writerow(header)
    for b in sorted(bars, key=lambda b: (b.dim, b.birth, b.death)):
        row = [
            str(b.dim),
            repr(b.birth),
            "inf" if b.is_infinite else repr(b.death),
            "inf" if b.is_infinite else repr(b.lifetime),
        ]
        if representatives:
            row.append(format_chain(b.representative))
        writer.writerow(row)
    return out.getvalue()
