"""Tests for the from-scratch predictor and the direct-fit oracle."""

import numpy as np
import pytest

from src.mai.engine import OnlineAffine, fit_affine, oracle_loss
from src.mai.tasks import Encoder, Episode, encode, gen_t1


class TestFitAffine:
    """Tests for fit_affine and OnlineAffine."""

    def test_recovers_affine_map(self) -> None:
        rng = np.random.default_rng(0)
        x = rng.normal(size=(40, 3))
        w = rng.normal(size=(3, 3))
        b = np.array([0.5, -1.0, 2.0])
        w_hat, b_hat = fit_affine(x, x @ w.T + b, ridge=0.0)
        np.testing.assert_allclose(w_hat, w, atol=1e-8)
        np.testing.assert_allclose(b_hat, b, atol=1e-8)

    def test_online_predicts_no_motion_until_ready(self) -> None:
        scratch = OnlineAffine(2)
        z = np.array([1.0, 2.0])
        np.testing.assert_array_equal(scratch.predict(z), z)
        for t in range(4):
            scratch.add(np.array([t, 0.0]), np.array([t + 1.0, 0.0]))
        assert scratch.ready
        np.testing.assert_allclose(scratch.predict(np.array([2.5, 0.0])), [3.5, 0.0], atol=1e-3)


class TestOracleLoss:
    """Tests for the per-episode direct fit."""

    def test_rotation_is_fit_exactly(self, circle_episode: Episode) -> None:
        """A uniformly sampled circle is a linear one-step map."""
        states = encode(Encoder.identity(), circle_episode).states[:-1]
        assert oracle_loss(states) == pytest.approx(0.0, abs=1e-4)

    def test_noise_floor_is_positive(self) -> None:
        states = gen_t1("circle", 64, 0.01, False, 3).observations
        loss = oracle_loss(states)
        assert 0.0 < loss < 0.01

    def test_beats_predicting_no_motion(self) -> None:
        states = gen_t1("figure8", 64, 0.01, False, 4).observations
        still = float(np.mean(np.sum((states[1:] - states[:-1]) ** 2, axis=1)))
        assert oracle_loss(states) < still

    def test_depends_only_on_the_episode(self) -> None:
        states = gen_t1("circle", 64, 0.01, False, 5).observations
        assert oracle_loss(states) == oracle_loss(states.copy())
