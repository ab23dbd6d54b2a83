"""Tests for the hypothesis checks."""

import numpy as np
import pytest

from src.mai.engine import EpisodeReport, MAIState, new_state
from src.mai.eval import (
    ExperimentLog,
    check_h1,
    check_h2,
    check_h3,
    check_h4,
    check_h5,
    h1_from_sizes,
    h2_from_medians,
    window_coherence,
)
from src.mai.tasks import Episode, encode, gen_t1, permute, scramble


def log_of(sizes: list[int], falsified: list[int] | None = None, per_epoch: int = 1) -> ExperimentLog:
    log = ExperimentLog(seed=0, episodes_per_epoch=per_epoch)
    falsified = falsified or [0] * len(sizes)
    for i, (size, n_false) in enumerate(zip(sizes, falsified, strict=True)):
        log.append(
            EpisodeReport(
                i, "circle", [0.1], [""], 0, falsified=[f"c{k}" for k in range(n_false)], phi_size_after=size
            )
        )
    return log


class TestH1:
    """Tests for library-size monotonicity."""

    def test_growth_then_flat(self) -> None:
        verdict = h1_from_sizes([0, 1, 1, 1])
        assert verdict.passed
        assert verdict.statistic == 1.0

    def test_unexplained_drop(self) -> None:
        verdict = h1_from_sizes([0, 1, 0])
        assert not verdict.passed
        assert verdict.detail["unexplained_drops"] == [2]

    def test_drop_explained_by_falsification(self) -> None:
        verdict = check_h1(log_of([1, 2, 1], falsified=[0, 0, 1]))
        assert verdict.passed

    def test_no_growth_fails_for_closed_stream(self) -> None:
        assert not check_h1(log_of([0, 0, 0])).passed

    def test_needs_two_episodes(self) -> None:
        with pytest.raises(ValueError):
            check_h1(log_of([1]))


class TestH2:
    """Tests for residual contraction."""

    def test_halving(self) -> None:
        verdict = h2_from_medians([1.0, 0.5, 0.25])
        assert verdict.passed
        assert verdict.statistic == pytest.approx(0.5)

    def test_flat_fails(self) -> None:
        assert not h2_from_medians([0.2, 0.2, 0.2]).passed

    def test_slight_contraction_passes(self) -> None:
        verdict = h2_from_medians([1.0, 0.995, 0.99])
        assert verdict.passed
        assert 0.99 < verdict.statistic < 1.0

    def test_growth_fails(self) -> None:
        assert not h2_from_medians([0.1, 0.2, 0.4]).passed

    def test_held_out_evaluations_drive_the_verdict(self) -> None:
        """Training residuals that fall do not count when held-out ones stay flat."""
        log = ExperimentLog(seed=0, episodes_per_epoch=1)
        for i, r in enumerate([1.0, 0.5, 0.25]):
            log.append(EpisodeReport(i, "circle", [r], [""], 0))
        log.evaluations = [[0.2, 0.3]] * 3
        assert not check_h2(log).passed

    def test_all_zero_passes(self) -> None:
        verdict = h2_from_medians([0.0, 0.0, 0.0])
        assert verdict.passed
        assert verdict.statistic == 0.0
        assert verdict.detail["degenerate"]

    def test_needs_two_epochs(self) -> None:
        with pytest.raises(ValueError):
            check_h2(log_of([0, 1, 1], per_epoch=3))


class TestH3:
    """Tests for order invariance."""

    def test_reorderings_keep_class(self, trained_state: MAIState, circle_episode: Episode) -> None:
        verdict = check_h3(trained_state, circle_episode, n=5)
        assert verdict.detail["class"] is not None
        assert verdict.detail["excluded"] == 0
        assert all(c == verdict.detail["class"] for c in verdict.detail["variant_classes"])

    def test_scrambles_are_excluded(self, trained_state: MAIState, circle_episode: Episode) -> None:
        variants = [permute(circle_episode, 1), scramble(circle_episode, 2)]
        verdict = check_h3(trained_state, circle_episode, variants=variants)
        assert verdict.detail["excluded"] == 1
        assert len(verdict.detail["distances"]) == 1

    def test_empty_library_fails(self, circle_episode: Episode) -> None:
        assert not check_h3(new_state(), circle_episode, n=2).passed


class TestH4:
    """Tests for window coherence."""

    def test_empty_library_has_no_coherence(self, circle_episode: Episode) -> None:
        assert window_coherence(new_state(), circle_episode.observations, "circle") == 0.0

    def test_trained_circle_is_coherent(self, trained_state: MAIState, circle_episode: Episode) -> None:
        states = encode(trained_state.encoder, circle_episode).states
        assert window_coherence(trained_state, states, "circle") > 0.0
        assert window_coherence(trained_state, states, "figure8") == 0.0

    def test_coherence_must_not_fall(self) -> None:
        log = ExperimentLog(seed=0, episodes_per_epoch=2)
        for i, c in enumerate([0.2, 0.4, 0.6, 0.8]):
            r = EpisodeReport(i, "circle", [0.1], [""], 0)
            r.coherence = c
            log.append(r)
        verdict = check_h4(log)
        assert verdict.passed
        assert verdict.statistic == pytest.approx(0.4)


class TestH5:
    """Tests for the retrieval speedup."""

    def test_empty_library_gives_unit_ratio(self) -> None:
        held_out = [gen_t1("circle", 64, 0.01, False, seed=300 + i) for i in range(2)]
        verdict = check_h5(new_state(), held_out)
        assert verdict.statistic == pytest.approx(1.0)
        assert not verdict.passed

    def test_homologous_ratio_recorded(self, trained_state: MAIState) -> None:
        held_out = [gen_t1("circle", 64, 0.01, False, seed=300)]
        novel = [gen_t1("circle", 64, 0.01, False, seed=301, scale=1.5, shift=(0.3, 0.0))]
        verdict = check_h5(trained_state, held_out, novel)
        assert np.isfinite(verdict.detail["homologous_ratio"])

    def test_needs_held_out(self) -> None:
        with pytest.raises(ValueError):
            check_h5(new_state(), [])
