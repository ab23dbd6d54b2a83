"""Tests for task streams, seeding and the experiment runner."""

import pytest

from src.mai.engine import EngineConfig, EpisodeReport, new_state
from src.mai.eval import (
    ExperimentLog,
    ExperimentRunner,
    RunResult,
    TaskSpec,
    create_default_runner,
    evaluate,
    make_episode,
    schedule,
    subseed,
)
from src.mai.eval.runner import build_encoders
from src.mai.types import ConfigError

SMALL = TaskSpec(steps=32, epochs=2, episodes_per_epoch=2, held_out=1, stability=False)


class TestSubseed:
    """Tests for per-episode seed derivation."""

    def test_deterministic(self) -> None:
        assert subseed(7, 1, 2) == subseed(7, 1, 2)

    def test_distinct_positions(self) -> None:
        seeds = {subseed(7, e, i) for e in range(3) for i in range(3)}
        assert len(seeds) == 9

    def test_fits_four_bytes(self) -> None:
        assert 0 <= subseed(123, -1, -1) < 2**32


class TestTaskSpec:
    """Tests for TaskSpec validation and the episode schedule."""

    @pytest.mark.parametrize(
        "kwargs,field",
        [
            ({"task": "T9"}, "task"),
            ({"shapes": ("square",)}, "shapes"),
            ({"shapes": ()}, "shapes"),
            ({"steps": 4}, "steps"),
            ({"jitter": -0.1}, "jitter"),
            ({"epochs": 0}, "epochs"),
            ({"held_out": -1}, "held_out"),
            ({"learner_shapes": ("square",)}, "shapes"),
        ],
    )
    def test_invalid(self, kwargs: dict[str, object], field: str) -> None:
        with pytest.raises(ConfigError) as exc_info:
            TaskSpec(**kwargs)  # type: ignore[arg-type]
        assert exc_info.value.field == field

    def test_round_robin(self) -> None:
        task = TaskSpec(shapes=("circle", "figure8"), epochs=2, episodes_per_epoch=2)
        assert schedule(task) == [(0, 0, "circle"), (0, 1, "figure8"), (1, 0, "circle"), (1, 1, "figure8")]

    def test_introduce_at(self) -> None:
        """The first shape runs alone until the second is introduced."""
        task = TaskSpec(shapes=("circle", "figure8"), epochs=1, episodes_per_epoch=5, introduce_at=3)
        assert [shape for _, _, shape in schedule(task)] == ["circle"] * 3 + ["figure8", "circle"]


class TestEpisodes:
    """Tests for make_episode and build_encoders."""

    def test_t1(self) -> None:
        ep = make_episode(SMALL, "circle", seed=5, index=0)
        assert ep.modality == "A"
        assert ep.loop_class == "circle"
        assert ep.steps == 32

    def test_open_loops_are_never_permuted(self) -> None:
        task = TaskSpec(steps=32, closed=False, permute=True)
        ep = make_episode(task, "circle", seed=5, index=0)
        assert not ep.closed
        assert not ep.permuted

    def test_permuted_stream(self) -> None:
        ep = make_episode(TaskSpec(steps=32, permute=True), "circle", seed=5, index=0)
        assert ep.permuted and ep.class_preserving

    def test_t2_alternates_modality(self) -> None:
        task = TaskSpec(task="T2", steps=32)
        assert [make_episode(task, "circle", 5, i).modality for i in range(3)] == ["A", "B", "A"]

    def test_t3_tags_agent(self) -> None:
        task = TaskSpec(task="T3", steps=32)
        assert make_episode(task, "circle", 5, 0, agent="learner").agent == "learner"

    def test_encoders_per_task(self) -> None:
        assert set(build_encoders(SMALL, 0)) == {"A"}
        assert set(build_encoders(TaskSpec(task="T2", steps=32), 0)) == {"A", "B"}


class TestEvaluate:
    """Tests for check selection in evaluate."""

    def test_only_requested_checks(self) -> None:
        log = ExperimentLog(seed=0, episodes_per_epoch=1)
        for i in range(3):
            log.append(EpisodeReport(i, "circle", [0.1 / (i + 1)], [""], 0, phi_size_after=1))
        verdicts = evaluate(RunResult(log, new_state(), SMALL), ("H1",))
        assert [v.hypothesis for v in verdicts] == ["H1"]
        assert verdicts[0].passed

    def test_skips_checks_without_data(self) -> None:
        result = RunResult(ExperimentLog(0, 1), new_state(), SMALL)
        assert evaluate(result) == []


class TestExperimentRunner:
    """Tests for ExperimentRunner."""

    def test_default_runner(self) -> None:
        runner = create_default_runner(seed=4)
        assert runner.seed == 4
        assert runner.config.seed == 4
        assert runner.snapshot()["task"]["task"] == "T1"

    def test_train_logs_every_episode(self) -> None:
        result = ExperimentRunner(EngineConfig(), SMALL, seed=1).train()
        assert len(result.log.reports) == SMALL.total_episodes
        assert len(result.held_out) == 1
        assert len(result.held_out_classes) == len(result.held_out_closed) == 1
        assert result.gap is None

    @pytest.mark.asyncio
    async def test_run_is_reproducible(self) -> None:
        first = await ExperimentRunner(EngineConfig(), SMALL, seed=2).run()
        second = await ExperimentRunner(EngineConfig(), SMALL, seed=2).run()
        series = [r.residual_series for r in first.log.reports]
        assert series == [r.residual_series for r in second.log.reports]
        assert first.log.phi_sizes() == second.log.phi_sizes()

    def test_one_held_out_evaluation_per_epoch(self) -> None:
        result = ExperimentRunner(EngineConfig(), SMALL, seed=1).train()
        assert len(result.log.evaluations) == SMALL.epochs
        assert all(len(e) == SMALL.held_out for e in result.log.evaluations)

    def test_starts_from_a_given_library(self) -> None:
        first = ExperimentRunner(EngineConfig(), SMALL, seed=3).train()
        assert len(first.state.library) >= 1
        again = ExperimentRunner(EngineConfig(), SMALL, seed=3, library=first.state.library).train()
        assert not again.log.reports[0].from_scratch
        assert set(first.state.library.class_ids()) <= set(again.state.library.class_ids())
