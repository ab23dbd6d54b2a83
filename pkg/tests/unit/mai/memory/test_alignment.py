"""Tests for dynamic time warping and cyclic alignment."""

import numpy as np
import pytest

from src.mai.memory import DtwAligner, align_cost, dtw, is_closed, open_cycle, subsequence_cost
from src.mai.memory.alignment import accumulate
from src.mai.tasks import sample_loop
from src.mai.types import DimensionMismatch, EmptyInput


class TestDtw:
    """Tests for dtw and accumulate."""

    def test_identical_sequences(self) -> None:
        a = sample_loop("circle", 20)
        assert dtw(a, a) == 0.0

    def test_repeated_samples_cost_nothing(self) -> None:
        """Warping absorbs a stalled step."""
        a = np.array([[0.0], [1.0], [2.0]])
        b = np.array([[0.0], [1.0], [1.0], [2.0]])
        assert dtw(a, b) == 0.0

    def test_known_cost(self) -> None:
        a = np.array([[0.0], [0.0]])
        b = np.array([[1.0], [1.0]])
        assert dtw(a, b) == pytest.approx(1.0)

    def test_accumulate_matches_recursion(self) -> None:
        """Vectorized rows agree with the textbook recursion."""
        rng = np.random.default_rng(0)
        costs = rng.random((6, 9))
        expected = np.full((6, 9), np.inf)
        for i in range(6):
            for j in range(9):
                if i == 0 and j == 0:
                    expected[i, j] = costs[0, 0]
                    continue
                best = min(
                    expected[i - 1, j - 1] if i and j else np.inf,
                    expected[i - 1, j] if i else np.inf,
                    expected[i, j - 1] if j else np.inf,
                )
                expected[i, j] = costs[i, j] + best
        np.testing.assert_allclose(accumulate(costs), expected)

    def test_band_restricts_cells(self) -> None:
        acc = accumulate(np.ones((5, 5)), band=1)
        assert np.isinf(acc[0, 4])
        assert np.isfinite(acc[4, 4])


class TestCyclicAlignment:
    """Tests for DtwAligner and subsequence_cost."""

    def test_closed_helpers(self) -> None:
        ring = sample_loop("circle", 16)
        assert is_closed(ring)
        assert len(open_cycle(ring)) == 15
        assert not is_closed(ring[:-1])

    def test_rotation_invariant(self) -> None:
        """A loop started at another phase aligns at zero cost."""
        ring = sample_loop("circle", 33)
        shifted = np.roll(ring[:-1], 7, axis=0)
        shifted = np.vstack([shifted, shifted[:1]])
        assert DtwAligner().cost(shifted, ring) == pytest.approx(0.0, abs=1e-12)

    def test_other_loop_costs_more(self) -> None:
        circle = sample_loop("circle", 33)
        figure8 = sample_loop("figure8", 33)
        assert align_cost(circle, figure8) > align_cost(circle, circle)

    def test_subsequence_anywhere(self) -> None:
        ring = sample_loop("circle", 33)
        window = np.vstack([ring[28:32], ring[0:4]])
        assert subsequence_cost(window, ring) == pytest.approx(0.0, abs=1e-12)

    def test_errors(self) -> None:
        ring = sample_loop("circle", 16)
        with pytest.raises(EmptyInput):
            DtwAligner().cost(np.empty((0, 2)), ring)
        with pytest.raises(DimensionMismatch):
            DtwAligner().cost(np.zeros((4, 3)), ring)
