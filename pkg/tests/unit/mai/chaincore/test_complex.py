"""Tests for simplicial complexes and homology over the two-element field."""

import numpy as np
import pytest

from src.mai.chaincore import (
    Chain,
    Simplex,
    SimplicialComplex,
    betti,
    class_equal,
    gf2_rank,
    gf2_solvable,
    is_boundary,
)
from src.mai.types import NotACycle


class TestGf2:
    """Tests for rank and solvability over the two-element field."""

    def test_rank_counts_mod_two(self) -> None:
        """Rows that sum to another row are dependent."""
        m = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=np.uint8)
        assert gf2_rank(m) == 2

    def test_rank_of_identity(self) -> None:
        assert gf2_rank(np.eye(4, dtype=np.uint8)) == 4

    def test_solvable(self) -> None:
        a = np.array([[1, 0], [1, 1]], dtype=np.uint8)
        assert gf2_solvable(a, np.array([0, 1], dtype=np.uint8))

    def test_empty_system(self) -> None:
        a = np.zeros((2, 0), dtype=np.uint8)
        assert gf2_solvable(a, np.zeros(2, dtype=np.uint8))
        assert not gf2_solvable(a, np.array([1, 0], dtype=np.uint8))


class TestSimplicialComplex:
    """Tests for SimplicialComplex construction."""

    def test_requires_face_closure(self) -> None:
        with pytest.raises(ValueError):
            SimplicialComplex(frozenset({Simplex.of(0, 1)}))

    def test_rejects_high_dimensions(self) -> None:
        with pytest.raises(ValueError):
            SimplicialComplex.closure_of([Simplex.of(0, 1, 2, 3)])

    def test_skeleton(self, filled_triangle: SimplicialComplex) -> None:
        assert len(filled_triangle.skeleton(0)) == 3
        assert len(filled_triangle.skeleton(1)) == 3
        assert filled_triangle.skeleton(2) == [Simplex.of(0, 1, 2)]
        assert filled_triangle.max_dim == 2


class TestHomology:
    """Tests for betti, is_boundary and class_equal."""

    def test_hollow_triangle(self, hollow_triangle: SimplicialComplex) -> None:
        assert betti(hollow_triangle, 0) == 1
        assert betti(hollow_triangle, 1) == 1

    def test_filled_triangle(self, filled_triangle: SimplicialComplex) -> None:
        """Filling the triangle kills the loop."""
        assert betti(filled_triangle, 0) == 1
        assert betti(filled_triangle, 1) == 0

    def test_figure_eight(self, figure_eight: SimplicialComplex) -> None:
        assert betti(figure_eight, 1) == 2

    def test_two_components(self) -> None:
        k = SimplicialComplex.closure_of([Simplex.of(0, 1), Simplex.of(2, 3)])
        assert betti(k, 0) == 2

    def test_triangle_loop_bounds_when_filled(
        self, hollow_triangle: SimplicialComplex, filled_triangle: SimplicialComplex
    ) -> None:
        loop = Chain.edge_path([0, 1, 2, 0])
        assert not is_boundary(loop, hollow_triangle)
        assert is_boundary(loop, filled_triangle)

    def test_zero_chain_is_boundary(self, hollow_triangle: SimplicialComplex) -> None:
        assert is_boundary(Chain(1), hollow_triangle)

    def test_class_equal(self, figure_eight: SimplicialComplex) -> None:
        """The two lobes are different classes; each lobe equals itself."""
        left = Chain.edge_path([0, 1, 2, 0])
        right = Chain.edge_path([0, 3, 4, 0])
        assert class_equal(left, left, figure_eight)
        assert not class_equal(left, right, figure_eight)

    def test_class_equal_rejects_non_cycles(self, figure_eight: SimplicialComplex) -> None:
        with pytest.raises(NotACycle):
            class_equal(Chain.edge_path([0, 1]), Chain.edge_path([0, 1, 2, 0]), figure_eight)
