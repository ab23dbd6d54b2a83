"""Shared fixtures for mai tests."""

import numpy as np
import pytest

from src.mai.chaincore import Chain, Simplex, SimplicialComplex
from src.mai.engine import EngineConfig, MAIState, new_state, run_episode
from src.mai.tasks import Episode, gen_t1
from src.mai.types import FloatArray


def random_complex(
    rng: np.random.Generator, n_vertices: int = 7, max_simplices: int = 30
) -> SimplicialComplex:
    """Face closure of a random set of edges and triangles, capped at max_simplices."""
    picked: list[Simplex] = []
    while True:
        size = int(rng.integers(2, 4))
        s = Simplex.of(*rng.choice(n_vertices, size=size, replace=False).tolist())
        candidate = SimplicialComplex.closure_of([*picked, s])
        if len(candidate.simplices) > max_simplices:
            return SimplicialComplex.closure_of(picked) if picked else candidate
        picked.append(s)


def random_chain(rng: np.random.Generator, k: SimplicialComplex, dim: int) -> Chain:
    simplices = k.skeleton(dim)
    mask = rng.integers(0, 2, size=len(simplices)).astype(bool)
    return Chain.from_simplices(dim, (s for s, keep in zip(simplices, mask, strict=True) if keep))


def hexagon(radius: float = 1.0) -> FloatArray:
    angles = np.arange(6) * np.pi / 3
    return radius * np.column_stack([np.cos(angles), np.sin(angles)])


@pytest.fixture
def hollow_triangle() -> SimplicialComplex:
    """Fixture providing the boundary of a triangle."""
    return SimplicialComplex.closure_of([Simplex.of(0, 1), Simplex.of(1, 2), Simplex.of(0, 2)])


@pytest.fixture
def filled_triangle() -> SimplicialComplex:
    """Fixture providing a solid triangle."""
    return SimplicialComplex.closure_of([Simplex.of(0, 1, 2)])


@pytest.fixture
def figure_eight() -> SimplicialComplex:
    """Fixture providing two hollow triangles glued at vertex 0."""
    edges = [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)]
    return SimplicialComplex.closure_of([Simplex.of(a, b) for a, b in edges])


@pytest.fixture
def circle_episode() -> Episode:
    """Fixture providing a clean, unpermuted circle episode."""
    return gen_t1("circle", 64, 0.0, False, seed=3)


@pytest.fixture
def trained_state() -> MAIState:
    """Fixture providing an engine trained on ten jittered circle episodes."""
    state = new_state(EngineConfig())
    for seed in range(10):
        state, _ = run_episode(state, gen_t1("circle", 64, 0.01, True, seed=seed))
    return state
