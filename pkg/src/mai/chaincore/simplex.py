"""Oriented-free simplices over dense integer vertex ids."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from itertools import combinations


@dataclass(frozen=True, order=True)
class Simplex:
    """A simplex given by its strictly increasing vertex ids."""

    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise ValueError("a simplex needs at least one vertex")
        if any(v < 0 for v in self.vertices):
            raise ValueError(f"vertex ids must be nonnegative: {self.vertices}")
        if any(a >= b for a, b in zip(self.vertices, self.vertices[1:], strict=False)):
            raise ValueError(f"vertices must be strictly increasing: {self.vertices}")

    @classmethod
    def of(cls, *vertices: int) -> Simplex:
        """Build a simplex from vertices in any order."""
        return cls(tuple(sorted(set(vertices))))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self) -> Iterator[Simplex]:
        """Yield the codimension-one faces; a vertex has none."""
        if self.dim == 0:
            return
        for face in combinations(self.vertices, self.dim):
            yield Simplex(face)

    def closure(self) -> Iterator[Simplex]:
        """Yield every nonempty face, the simplex itself included."""
        for size in range(1, len(self.vertices) + 1):
            for face in combinations(self.vertices, size):
                yield Simplex(face)

    def __str__(self) -> str:
        return " ".join(str(v) for v in self.vertices)
