"""Experiment orchestration: episode schedules, seeded training runs and verdicts."""

from __future__ import annotations

import asyncio
import hashlib
import logging
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field, replace
from typing import Any

import numpy as np
from scipy.stats import ortho_group

from src.mai.config import (
    A4_SCRAMBLES,
    EPISODE_STEPS,
    EPISODES_PER_EPOCH,
    EPOCHS,
    GAP_FRACTION,
    HELD_OUT_EPISODES,
    HOMOLOGOUS_SCALE,
    HOMOLOGOUS_SHIFT,
    JITTER,
    LATENT_DIM,
    LEARNER_FRAME_SEED,
    MIN_EPISODE_STEPS,
    SHAPES,
    TASK_TYPES,
)
from src.mai.engine import (
    EngineConfig,
    GapEstimate,
    MAIState,
    amortization_gap,
    amortized_loss,
    closure_test,
    decode_class,
    new_state,
    run_episode,
)
from src.mai.memory import CycleLibrary, intersect
from src.mai.tasks import (
    Encoder,
    Episode,
    agent_map,
    encode,
    fit_encoder,
    gen_t1,
    gen_t2,
    gen_t3,
    modality_map,
    procrustes_rotation,
    render,
    scramble,
)
from src.mai.types import ClassId, ConfigError, InsufficientEpisodes

from .hypotheses import check_h1, check_h2, check_h3, check_h4, check_h5, window_coherence
from .log import ExperimentLog, Verdict

logger = logging.getLogger(__name__)

ALL_CHECKS = ("H1", "H2", "H3", "H4", "H5", "GAP", "INTERSECT")


@dataclass(frozen=True)
class TaskSpec:
    """What stream of episodes a run trains on.

    ``introduce_at`` holds the stream at the first shape until that episode
    index and cycles through all shapes afterwards. ``scramble`` replaces the
    held-out episodes with class-breaking shuffles.
    """

    task: str = "T1"
    shapes: tuple[str, ...] = ("circle",)
    steps: int = EPISODE_STEPS
    jitter: float = JITTER
    epochs: int = EPOCHS
    episodes_per_epoch: int = EPISODES_PER_EPOCH
    closed: bool = True
    scramble: bool = False
    permute: bool = False
    introduce_at: int | None = None
    learner_shapes: tuple[str, ...] | None = None
    held_out: int = HELD_OUT_EPISODES
    stability: bool = True

    def __post_init__(self) -> None:
        if self.task not in TASK_TYPES:
            raise ConfigError("task", f"must be one of {list(TASK_TYPES)}, got {self.task!r}")
        for name in (*self.shapes, *(self.learner_shapes or ())):
            if name not in SHAPES:
                raise ConfigError("shapes", f"unknown shape {name!r}")
        if not self.shapes:
            raise ConfigError("shapes", "at least one shape is required")
        if self.steps < MIN_EPISODE_STEPS:
            raise ConfigError("steps", f"must be at least {MIN_EPISODE_STEPS}")
        if self.jitter < 0:
            raise ConfigError("jitter", "must be nonnegative")
        if self.epochs < 1 or self.episodes_per_epoch < 1:
            raise ConfigError("epochs", "epochs and episodes_per_epoch must be positive")
        if self.held_out < 0:
            raise ConfigError("held_out", "must be nonnegative")

    @property
    def total_episodes(self) -> int:
        return self.epochs * self.episodes_per_epoch


def subseed(seed: int, epoch: int, episode: int) -> int:
    """Per-episode seed: the first four bytes of sha256 over ``seed:epoch:episode``."""
    digest = hashlib.sha256(f"{seed}:{epoch}:{episode}".encode()).digest()
    return int.from_bytes(digest[:4], "big")


def schedule(task: TaskSpec) -> list[tuple[int, int, str]]:
    """(epoch, episode within epoch, shape) for every training episode in order."""
    plan = []
    for g in range(task.total_episodes):
        if task.introduce_at is None:
            shape = task.shapes[g % len(task.shapes)]
        elif g < task.introduce_at:
            shape = task.shapes[0]
        else:
            shape = task.shapes[(g - task.introduce_at + 1) % len(task.shapes)]
        plan.append((g // task.episodes_per_epoch, g % task.episodes_per_epoch, shape))
    return plan


def make_episode(task: TaskSpec, shape: str, seed: int, index: int, agent: str = "") -> Episode:
    """One episode of the task's kind. T2 alternates modality A and B by index."""
    base = gen_t1(shape, task.steps, task.jitter, task.permute and task.closed, seed, closed=task.closed)
    if task.task == "T2":
        modality = "AB"[index % 2]
        return render(base, modality_map(modality), modality)
    if task.task == "T3":
        return render(base, agent_map(agent), "A", agent=agent)
    return base


def learner_frame() -> np.ndarray:
    return np.asarray(ortho_group.rvs(LATENT_DIM, random_state=LEARNER_FRAME_SEED))


def build_encoders(task: TaskSpec, seed: int, agent: str = "") -> dict[str, Encoder]:
    """Encoders for one agent. T2's modality-B encoder is fit on a paired episode."""
    if task.task == "T1":
        return {"A": Encoder.identity()}
    if task.task == "T3":
        rotation = learner_frame() if agent == "learner" else None
        return {"A": Encoder.for_map(agent_map(agent), rotation)}
    enc_a = Encoder.for_map(modality_map("A"))
    view_a, view_b = gen_t2(task.shapes[0], task.steps, subseed(seed, -1, -1), task.jitter)
    target = encode(enc_a, view_a).states
    centered = target - target.mean(axis=0)
    rms = float(np.sqrt(np.mean(np.sum(centered**2, axis=1))))
    enc_b = fit_encoder(view_b.observations, target)
    enc_b = enc_b.calibrated(encode(enc_b, view_b).states, rms)
    return {"A": enc_a, "B": enc_b}


@dataclass
class RunResult:
    """Trained state, its log, and what was measured on held-out episodes."""

    log: ExperimentLog
    state: MAIState
    task: TaskSpec
    held_out: list[Episode] = field(default_factory=list)
    held_out_classes: list[ClassId | None] = field(default_factory=list)
    held_out_closed: list[bool] = field(default_factory=list)
    gap: GapEstimate | None = None
    peers: dict[str, RunResult] = field(default_factory=dict)
    extras: dict[str, Any] = field(default_factory=dict)


class ExperimentRunner:
    """Trains one engine per agent on a seeded episode stream and evaluates it."""

    def __init__(
        self, config: EngineConfig, task: TaskSpec, seed: int, library: CycleLibrary | None = None
    ):
        """Initialize the ExperimentRunner.

        Args:
            config: Engine hyperparameters
            task: Episode stream description
            seed: Root seed; every episode seed is derived from it
            library: Library to start from instead of an empty one; on T3 it seeds the mentor
        """
        self.config = config
        self.task = task
        self.seed = seed
        self.library = library

    def snapshot(self) -> dict[str, Any]:
        return {"seed": self.seed, "engine": asdict(self.config), "task": asdict(self.task)}

    def train(self, agent: str = "", shapes: Sequence[str] | None = None) -> RunResult:
        """Run the full schedule for one agent and measure held-out behaviour."""
        task = self.task if shapes is None else replace(self.task, shapes=tuple(shapes))
        frame = agent or "native"
        if self.library is not None and agent in ("", "mentor"):
            library = replace(
                self.library, landmark_cap=self.config.landmark_cap, anchor_scale=self.config.anchor_scale
            )
            logger.debug(f"Agent {frame}: starting from a library of {len(library)} records")
        else:
            library = CycleLibrary(
                frame=frame, landmark_cap=self.config.landmark_cap, anchor_scale=self.config.anchor_scale
            )
        state = new_state(self.config, build_encoders(task, self.seed, agent), library)
        log = ExperimentLog(self.seed, task.episodes_per_epoch, self.snapshot())
        held_out = self.held_out_episodes(task, agent)

        for g, (epoch, index, shape) in enumerate(schedule(task)):
            ep = make_episode(task, shape, subseed(self.seed, epoch, index), g, agent)
            tr = encode(state.encoder_for(ep.modality), ep, self.config.bin)
            coherence = window_coherence(state, tr.states, ep.loop_class)
            state, report = run_episode(state, ep, with_stability=task.stability)
            report.coherence = coherence
            log.append(report)
            if index == task.episodes_per_epoch - 1 and held_out:
                log.evaluations.append([amortized_loss(state, h) for h in held_out])
        logger.debug(f"Agent {frame}: trained {len(log.reports)} episodes, |library|={len(state.library)}")

        result = RunResult(log, state, task, held_out)
        self._measure(result)
        return result

    def held_out_episodes(self, task: TaskSpec, agent: str = "") -> list[Episode]:
        """Episodes never trained on, cycling through the task's shapes."""
        shapes = [task.shapes[i % len(task.shapes)] for i in range(task.held_out)]
        return [
            make_episode(task, shape, subseed(self.seed, task.epochs, i), i, agent)
            for i, shape in enumerate(shapes)
        ]

    def _measure(self, result: RunResult) -> None:
        task, state = result.task, result.state
        episodes = result.held_out
        if task.scramble and episodes:
            episodes = [
                scramble(episodes[i % len(episodes)], subseed(self.seed, task.epochs + 1, i))
                for i in range(A4_SCRAMBLES)
            ]
        for ep in episodes:
            tr = encode(state.encoder_for(ep.modality), ep, self.config.bin)
            record = decode_class(state, tr.states)
            closure = closure_test(state, tr)
            bars = [b for b in closure.diagram.in_dim(1) if b.lifetime >= closure.tau]
            result.held_out_classes.append(record.class_id if record is not None else None)
            result.held_out_closed.append(bool(bars))
        try:
            result.gap = amortization_gap(state, result.held_out)
        except InsufficientEpisodes as e:
            logger.debug(f"Skipping amortization gap: {e}")
        if task.task == "T2":
            result.extras["cross_modal_agreement"] = self._cross_modal_agreement(state)

    def _cross_modal_agreement(self, state: MAIState) -> float:
        """Fraction of paired A/B views of one loop that decode to the same stored class."""
        agree = []
        for i in range(max(self.task.held_out, 1)):
            shape = self.task.shapes[i % len(self.task.shapes)]
            view_a, view_b = gen_t2(shape, self.task.steps, subseed(self.seed, -2, i), self.task.jitter)
            views = (view_a, view_b)
            ids = [decode_class(state, encode(state.encoder_for(v.modality), v).states) for v in views]
            agree.append(ids[0] is not None and ids[1] is not None and ids[0].class_id == ids[1].class_id)
        return float(np.mean(agree))

    async def run(self) -> RunResult:
        """Train and evaluate; T3 trains mentor and learner concurrently."""
        if self.task.task != "T3":
            return await asyncio.to_thread(self.train)
        learner_shapes = self.task.learner_shapes or self.task.shapes
        mentor, learner = await asyncio.gather(
            asyncio.to_thread(self.train, "mentor"),
            asyncio.to_thread(self.train, "learner", learner_shapes),
        )
        mentor.peers["learner"] = learner
        mentor.extras["intersection"] = self.align_and_intersect(mentor, learner)
        return mentor

    def align_and_intersect(self, mentor: RunResult, learner: RunResult) -> list[tuple[ClassId, ...]]:
        """Align the learner's latent frame onto the mentor's and intersect the two libraries."""
        view_m, view_l = gen_t3(self.task.shapes[0], self.task.steps, subseed(self.seed, -3, 0))
        source = encode(learner.state.encoder, view_l).states
        target = encode(mentor.state.encoder, view_m).states
        rotation = procrustes_rotation(source, target)
        mentor_lib = replace(mentor.state.library, alignment=np.eye(LATENT_DIM))
        learner_lib = replace(learner.state.library, alignment=rotation)
        groups = intersect([mentor_lib, learner_lib], self.config.tau)
        logger.debug(f"Mentor/learner intersection: {groups}")
        return groups


def evaluate(result: RunResult, checks: Sequence[str] = ALL_CHECKS) -> list[Verdict]:
    """Verdicts for the requested checks that apply to the run's task."""
    task, state, log = result.task, result.state, result.log
    verdicts: list[Verdict] = []
    if "H1" in checks and len(log.reports) >= 2:
        verdicts.append(check_h1(log))
    if "H2" in checks and len(log.epochs()) >= 2:
        verdicts.append(check_h2(log))
    if "H3" in checks and result.held_out and task.closed:
        verdicts.append(check_h3(state, result.held_out[0]))
    if "H4" in checks and len(log.epochs()) >= 2:
        verdicts.append(check_h4(log))
    if "H5" in checks and result.held_out:
        homologous = []
        if task.task == "T1":
            seed = subseed(log.seed, -4, 0)
            novel = gen_t1(
                "circle", task.steps, task.jitter, False, seed, scale=HOMOLOGOUS_SCALE, shift=HOMOLOGOUS_SHIFT
            )
            homologous = [novel]
        verdicts.append(check_h5(state, result.held_out, homologous))
    if "GAP" in checks and result.gap is not None:
        gap = result.gap
        passed = gap.epsilon <= GAP_FRACTION * gap.oracle + 1e-12
        gap_detail = {"amortized": gap.amortized, "oracle": gap.oracle}
        verdicts.append(Verdict("GAP", passed, gap.epsilon, gap_detail))
    if "INTERSECT" in checks and "intersection" in result.extras:
        groups = result.extras["intersection"]
        expected = len(set(task.shapes) & set(task.learner_shapes or task.shapes))
        detail = {"groups": [list(g) for g in groups], "expected": expected}
        verdicts.append(Verdict("INTERSECT", len(groups) == expected, float(len(groups)), detail))
    return verdicts


def create_default_runner(seed: int = 0) -> ExperimentRunner:
    """Runner for a clean single-circle T1 stream with default engine settings."""
    return ExperimentRunner(EngineConfig(seed=seed), TaskSpec(), seed)


def run_experiment(
    config: EngineConfig, task: TaskSpec, seed: int, library: CycleLibrary | None = None
) -> RunResult:
    """Synchronous convenience wrapper around ExperimentRunner.run."""

    async def _run() -> RunResult:
        return await ExperimentRunner(config, task, seed, library).run()

    return asyncio.run(_run())
