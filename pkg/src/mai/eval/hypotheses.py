"""Checks for structure monotonicity, residual contraction, order invariance,
integration and amortization."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import replace

import numpy as np

from src.mai.config import (
    H3_EPSILON,
    H3_PERMUTATIONS,
    H3_VR_SCALE,
    H5_RATIO,
    MATCH_COST,
    WINDOW_LENGTH,
    WINDOW_STRIDE,
)
from src.mai.engine import MAIState, contraction_fit, decode_class, decode_steps, inner_steps_to_target
from src.mai.memory import DtwAligner, Scaffold, retrieve, subsequence_cost
from src.mai.persistence import PersistenceDiagram, bottleneck, build_vr, reduce
from src.mai.tasks import Episode, encode, permute
from src.mai.types import DegenerateSeries, FloatArray, TargetUnreachable

from .log import ExperimentLog, Verdict

logger = logging.getLogger(__name__)


def h1_from_sizes(
    sizes: Sequence[int], falsified: Sequence[int] | None = None, expect_growth: bool = True
) -> Verdict:
    """Library sizes may only shrink by the number of classes falsified at that step."""
    falsified = list(falsified) if falsified is not None else [0] * len(sizes)
    drops = []
    for i in range(1, len(sizes)):
        if sizes[i] < sizes[i - 1] and sizes[i - 1] - sizes[i] > falsified[i]:
            drops.append(i)
    increases = sum(1 for a, b in zip(sizes, sizes[1:], strict=False) if b > a)
    passed = not drops and (increases > 0 or not expect_growth)
    return Verdict("H1", passed, float(increases), {"sizes": list(sizes), "unexplained_drops": drops})


def check_h1(log: ExperimentLog) -> Verdict:
    """Library size is nondecreasing apart from falsifications and grows on novel loops."""
    if len(log.reports) < 2:
        raise ValueError("H1 needs at least two episodes")
    sizes = [0, *log.phi_sizes()]
    falsified = [0, *(len(r.falsified) for r in log.reports)]
    return h1_from_sizes(sizes, falsified, expect_growth=any(r.closed for r in log.reports))


def h2_from_medians(medians: Sequence[float]) -> Verdict:
    """Pass when log medians fall along a line with negative slope, so gamma < 1."""
    try:
        slope, gamma = contraction_fit(medians)
    except DegenerateSeries:
        return Verdict("H2", True, 0.0, {"epoch_medians": list(medians), "degenerate": True})
    return Verdict("H2", slope < 0.0 and gamma < 1.0, gamma, {"epoch_medians": list(medians), "slope": slope})


def check_h2(log: ExperimentLog) -> Verdict:
    """Log epoch-median residuals fall along a line with negative slope."""
    medians = log.epoch_medians()
    if len(medians) < 2:
        raise ValueError("H2 needs at least two epochs")
    return h2_from_medians(medians)


def _vr_diagram(states: FloatArray, scale: float) -> PersistenceDiagram:
    return reduce(build_vr(states, 2, scale))


def check_h3(
    state: MAIState,
    ep: Episode,
    n: int = H3_PERMUTATIONS,
    epsilon: float = H3_EPSILON,
    variants: Sequence[Episode] | None = None,
    scale: float = H3_VR_SCALE,
) -> Verdict:
    """Class-preserving reorderings decode to one class with nearby latent diagrams.

    Variants that do not preserve the loop class are skipped.
    """
    enc = state.encoder_for(ep.modality)
    base_states = encode(enc, ep).states
    base = decode_class(state, base_states)
    base_diagram = _vr_diagram(base_states, scale)
    pool = list(variants) if variants is not None else [permute(ep, seed) for seed in range(1, n + 1)]
    kept = [v for v in pool if v.class_preserving]

    classes, distances = [], []
    for variant in kept:
        states = encode(enc, variant).states
        record = decode_class(state, states)
        classes.append(record.class_id if record is not None else None)
        distances.append(bottleneck(base_diagram, _vr_diagram(states, scale), 1))
    same = base is not None and all(c == base.class_id for c in classes)
    worst = max(distances, default=0.0)
    return Verdict(
        "H3",
        same and worst <= epsilon,
        worst,
        {
            "class": base.class_id if base is not None else None,
            "variant_classes": classes,
            "distances": distances,
            "excluded": len(pool) - len(kept),
        },
    )


def window_coherence(state: MAIState, states: FloatArray, label: str) -> float:
    """Fraction of overlapping windows whose best-aligned record came from the same loop label."""
    records = state.library.records
    starts = range(0, max(len(states) - WINDOW_LENGTH, 0) + 1, WINDOW_STRIDE)
    if not records:
        return 0.0
    agree = 0
    for s in starts:
        window = states[s : s + WINDOW_LENGTH]
        costs = [(subsequence_cost(window, r.representative_path), r.class_id, r) for r in records]
        cost, _, record = min(costs, key=lambda c: (c[0], c[1]))
        if cost <= MATCH_COST and record.label == label:
            agree += 1
    return agree / len(starts)


def check_h4(log: ExperimentLog) -> Verdict:
    """Epoch-mean window coherence does not fall from the first epoch to the last."""
    epochs = log.epochs()
    if len(epochs) < 2:
        raise ValueError("H4 needs at least two epochs")
    means = [float(np.mean([r.coherence for r in epoch])) for epoch in epochs]
    return Verdict("H4", means[-1] >= means[0], means[-1] - means[0], {"epoch_coherence": means})


def _steps_to_target(state: MAIState, states: FloatArray, use_memory: bool) -> tuple[int, bool]:
    cfg = state.config
    retrieved = []
    if use_memory and cfg.use_retrieval and len(state.library) > 0:
        retrieved = [rec for rec, _ in retrieve(states, state.library, cfg.k, DtwAligner(cfg.dtw_band))]
    fresh = replace(state, scaffold=Scaffold(dim=states.shape[1], frozen=cfg.freeze_scaffold))
    trace = decode_steps(fresh, states, retrieved)
    try:
        return inner_steps_to_target(trace.residuals, cfg.target_residual, cfg.target_window), True
    except TargetUnreachable:
        return len(trace.residuals), False


def adaptation_ratios(
    state: MAIState, episodes: Sequence[Episode]
) -> tuple[list[float], list[dict[str, int]]]:
    """Per-episode ratio of inner steps with memory to inner steps from scratch."""
    ratios, steps = [], []
    for ep in episodes:
        states = encode(state.encoder_for(ep.modality), ep).states
        with_memory, reached = _steps_to_target(state, states, use_memory=True)
        scratch, scratch_reached = _steps_to_target(state, states, use_memory=False)
        if not scratch_reached:
            logger.debug(f"From-scratch fit capped at {scratch} steps")
        ratios.append(with_memory / max(scratch, 1))
        capped = int(not (reached and scratch_reached))
        steps.append({"memory": with_memory, "scratch": scratch, "capped": capped})
    return ratios, steps


def check_h5(
    state: MAIState,
    held_out: Sequence[Episode],
    homologous: Sequence[Episode] = (),
    threshold: float = H5_RATIO,
) -> Verdict:
    """Retrieval reaches the residual target in at most ``threshold`` of the from-scratch steps."""
    if not held_out:
        raise ValueError("H5 needs held-out episodes")
    ratios, steps = adaptation_ratios(state, held_out)
    median = float(np.median(ratios))
    detail: dict[str, object] = {"ratios": ratios, "steps": steps, "threshold": threshold}
    if homologous:
        novel, _ = adaptation_ratios(state, homologous)
        detail["homologous_ratio"] = float(np.median(novel))
    return Verdict("H5", median <= threshold, median, detail)
