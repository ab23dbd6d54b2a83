"""Tests for the bottleneck distance."""

import math

import numpy as np
import pytest

from src.mai.chaincore import Chain
from src.mai.persistence import Bar, PersistenceDiagram, bottleneck
from src.mai.types import InfiniteBarMismatch


def diagram(*pairs: tuple[float, float], dim: int = 1) -> PersistenceDiagram:
    return PersistenceDiagram(tuple(Bar(dim, b, d, Chain(dim)) for b, d in pairs))


class TestBottleneck:
    """Tests for bottleneck."""

    def test_single_pair(self) -> None:
        """{(1, 3)} against {(1.2, 2.9)} costs 0.2."""
        assert bottleneck(diagram((1.0, 3.0)), diagram((1.2, 2.9)), 1) == pytest.approx(0.2)

    def test_identical(self) -> None:
        d = diagram((0.0, 1.0), (0.5, 2.0))
        assert bottleneck(d, d, 1) == 0.0

    def test_match_to_diagonal(self) -> None:
        """An unmatched bar costs half its lifetime."""
        assert bottleneck(diagram((0.0, 1.0)), diagram(), 1) == pytest.approx(0.5)

    def test_diagonal_beats_cross_match(self) -> None:
        d1 = diagram((0.0, 0.2))
        d2 = diagram((5.0, 5.4))
        assert bottleneck(d1, d2, 1) == pytest.approx(0.2)

    def test_symmetric(self) -> None:
        d1 = diagram((0.0, 1.0), (2.0, 5.0))
        d2 = diagram((0.1, 1.3), (2.5, 4.0), (1.0, 1.1))
        assert bottleneck(d1, d2, 1) == pytest.approx(bottleneck(d2, d1, 1))

    def test_infinite_bars_by_birth(self) -> None:
        d1 = diagram((0.0, math.inf), dim=0)
        d2 = diagram((0.3, math.inf), dim=0)
        assert bottleneck(d1, d2, 0) == pytest.approx(0.3)

    def test_infinite_count_mismatch(self) -> None:
        d1 = diagram((0.0, math.inf), dim=0)
        d2 = diagram(dim=0)
        assert math.isinf(bottleneck(d1, d2, 0))
        with pytest.raises(InfiniteBarMismatch):
            bottleneck(d1, d2, 0, strict=True)

    def test_other_dimensions_ignored(self) -> None:
        assert bottleneck(diagram((0.0, 1.0), dim=0), diagram(), 1) == 0.0


def random_diagram(rng: np.random.Generator, max_bars: int = 8) -> PersistenceDiagram:
    n = int(rng.integers(0, max_bars + 1))
    births = rng.uniform(0.0, 2.0, size=n)
    deaths = births + rng.exponential(0.5, size=n)
    return diagram(*zip(births.tolist(), deaths.tolist(), strict=True))


class TestBottleneckProperties:
    """Randomized metric properties over finite diagrams."""

    def test_symmetry_and_triangle_inequality(self) -> None:
        rng = np.random.default_rng(21)
        for _ in range(50):
            a, b, c = (random_diagram(rng) for _ in range(3))
            ab, bc, ac = bottleneck(a, b, 1), bottleneck(b, c, 1), bottleneck(a, c, 1)
            assert ab == pytest.approx(bottleneck(b, a, 1))
            assert ac <= ab + bc + 1e-9

    def test_agrees_with_gudhi(self) -> None:
        gudhi = pytest.importorskip("gudhi")
        rng = np.random.default_rng(22)
        for _ in range(50):
            a, b = random_diagram(rng), random_diagram(rng)
            points_a = np.array([[bar.birth, bar.death] for bar in a.bars]).reshape(-1, 2)
            points_b = np.array([[bar.birth, bar.death] for bar in b.bars]).reshape(-1, 2)
            expected = gudhi.bottleneck_distance(points_a, points_b, e=0)
            assert bottleneck(a, b, 1) == pytest.approx(expected, abs=1e-9)
