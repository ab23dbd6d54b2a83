"""Tests for loop shapes and episode generators."""

import numpy as np
import pytest

from src.mai.tasks import (
    Episode,
    expected_betti1,
    gen_t1,
    gen_t2,
    gen_t3,
    modality_map,
    permute,
    sample_loop,
    scramble,
)
from src.mai.types import ConfigError, UnknownShape


def rows(a: np.ndarray) -> list[tuple[float, ...]]:
    return sorted(map(tuple, np.round(a, 12)))


class TestSampleLoop:
    """Tests for sample_loop and expected_betti1."""

    def test_closed_circle(self) -> None:
        pts = sample_loop("circle", 32)
        assert pts.shape == (32, 2)
        np.testing.assert_array_equal(pts[0], pts[-1])
        np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0)

    def test_open_loop_does_not_return(self) -> None:
        pts = sample_loop("circle", 32, closed=False, fraction=0.75)
        assert np.linalg.norm(pts[0] - pts[-1]) > 1.0

    def test_figure8_offset(self) -> None:
        """The figure-8 sits away from the circle so the two never share states."""
        assert sample_loop("figure8", 64).mean(axis=0)[0] == pytest.approx(5.0, abs=0.1)

    def test_unknown_shape(self) -> None:
        with pytest.raises(UnknownShape):
            sample_loop("torus", 16)
        with pytest.raises(UnknownShape):
            expected_betti1("torus")

    def test_expected_betti1(self) -> None:
        assert expected_betti1("circle") == 1
        assert expected_betti1("figure8") == 2


class TestGenT1:
    """Tests for gen_t1, permute and scramble."""

    def test_clean_episode(self, circle_episode: Episode) -> None:
        """Position plus velocity, closed, labelled with its shape."""
        assert circle_episode.steps == 64
        assert circle_episode.obs_dim == 4
        assert circle_episode.loop_class == "circle"
        np.testing.assert_array_equal(circle_episode.observations[0], circle_episode.observations[-1])

    def test_seeded_noise_is_reproducible(self) -> None:
        a = gen_t1("circle", 32, 0.05, False, seed=9)
        b = gen_t1("circle", 32, 0.05, False, seed=9)
        c = gen_t1("circle", 32, 0.05, False, seed=10)
        np.testing.assert_array_equal(a.observations, b.observations)
        assert not np.allclose(a.observations, c.observations)

    def test_too_short(self) -> None:
        with pytest.raises(ValueError):
            gen_t1("circle", 4, 0.0, False, seed=0)

    def test_permute_keeps_rows_and_closure(self, circle_episode: Episode) -> None:
        p = permute(circle_episode, seed=4)
        assert p.permuted and p.class_preserving
        np.testing.assert_array_equal(p.observations[0], p.observations[-1])
        assert rows(p.observations[:-1]) == rows(circle_episode.observations[:-1])

    def test_permute_requires_closed(self) -> None:
        ep = gen_t1("circle", 32, 0.0, False, seed=0, closed=False)
        with pytest.raises(ValueError):
            permute(ep, seed=1)

    def test_permuted_open_loop_is_rejected(self) -> None:
        with pytest.raises(ConfigError) as exc_info:
            gen_t1("circle", 32, 0.0, True, seed=0, closed=False)
        assert exc_info.value.field == "permute"

    def test_scramble_breaks_class(self, circle_episode: Episode) -> None:
        s = scramble(circle_episode, seed=1)
        assert not s.class_preserving
        assert rows(s.observations) == rows(circle_episode.observations)
        assert not np.array_equal(s.observations, circle_episode.observations)


class TestCrossModalAndSocial:
    """Tests for gen_t2 and gen_t3."""

    def test_t2_views_share_latent_loop(self) -> None:
        a, b = gen_t2("circle", 32, seed=2)
        assert (a.modality, b.modality) == ("A", "B")
        assert (a.obs_dim, b.obs_dim) == (12, 7)
        latent_a = a.observations @ modality_map("A")
        latent_b = b.observations @ modality_map("B")
        np.testing.assert_allclose(latent_a, latent_b, atol=1e-9)

    def test_t3_agents(self) -> None:
        mentor, learner = gen_t3("circle", 32, seed=2)
        assert (mentor.agent, learner.agent) == ("mentor", "learner")
        assert not np.allclose(mentor.observations, learner.observations)

    def test_t3_disjoint_shapes(self) -> None:
        mentor, learner = gen_t3("circle", 32, seed=2, learner_shape="figure8")
        assert (mentor.loop_class, learner.loop_class) == ("circle", "figure8")
