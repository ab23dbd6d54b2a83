"""The episode loop: retrieve, adapt the scaffold, test closure, consolidate."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, replace

import numpy as np

from src.mai.config import H3_VR_SCALE, MATCH_COST, MIN_GAP_EPISODES, PHASE_WINDOW
from src.mai.memory import (
    CycleLibrary,
    CycleRecord,
    DtwAligner,
    Scaffold,
    admit,
    falsify,
    open_cycle,
    retrieve,
    update_memory,
)
from src.mai.persistence import (
    PersistenceDiagram,
    bottleneck,
    build_graph_filtration,
    build_vr,
    elbow_tau,
    pers_tau,
    reduce,
)
from src.mai.tasks import Episode, LatentTrajectory, StateGraph, build_state_graph, encode, permute
from src.mai.types import (
    ClassId,
    FloatArray,
    InsufficientEpisodes,
    NoRetrieval,
    TargetUnreachable,
)

from .metrics import entropy_proxy, inner_steps_to_target, residual_boundary_norm
from .oracle import OnlineAffine, fit_affine, oracle_loss
from .reports import EpisodeReport
from .state import Decoder, MAIState

logger = logging.getLogger(__name__)


def phase_of(
    template: FloatArray, z: FloatArray, hint: float | None = None, window: int = PHASE_WINDOW
) -> tuple[float, float]:
    """Continuous position of z's projection onto a cyclic polyline, and its distance.

    With a hint only the segments within ``window`` of it are searched.
    """
    n = len(template)
    if hint is None:
        idx = np.arange(n)
    else:
        base = int(math.floor(hint))
        idx = np.unique(np.arange(base - window, base + window + 1) % n)
    start = template[idx]
    delta = template[(idx + 1) % n] - start
    length2 = np.sum(delta**2, axis=1)
    s = np.sum((z - start) * delta, axis=1) / np.where(length2 > 0, length2, 1.0)
    s = np.clip(np.where(length2 > 0, s, 0.0), 0.0, 1.0)
    dist = np.linalg.norm(z - (start + s[:, None] * delta), axis=1)
    best = int(np.argmin(dist))
    return float((idx[best] + s[best]) % n), float(dist[best])


def point_at(template: FloatArray, phase: float) -> FloatArray:
    """Linear interpolation along a cyclic polyline at a fractional index."""
    n = len(template)
    phase %= n
    k = int(math.floor(phase))
    s = phase - k
    return np.asarray((1.0 - s) * template[k] + s * template[(k + 1) % n])


def _locator(record: CycleRecord) -> FloatArray:
    return open_cycle(record.representative_path)


def _table(decoder: Decoder, record: CycleRecord) -> FloatArray:
    return decoder.template_for(record.class_id, record.representative_path)


def bootstrap_forward(
    state: MAIState, z_t: FloatArray, retrieved: CycleRecord | None, hint: float | None = None
) -> FloatArray:
    """Predict z_{t+1} by advancing one step along the retrieved cycle from z_t's phase.

    The phase is read off the stored path and the prediction off the decoder's
    table for that class.

    Raises:
        NoRetrieval: If nothing was retrieved; callers fall back to decoder-only prediction
    """
    if retrieved is None:
        raise NoRetrieval("no cycle to continue along")
    table = _table(state.decoder, retrieved)
    phase, _ = phase_of(_locator(retrieved), z_t, hint)
    return state.scaffold.apply(point_at(table, phase + 1.0), table.mean(axis=0))


def retrieval_inverse(
    state: MAIState, z_next: FloatArray, context: CycleRecord | None = None, hint: float | None = None
) -> FloatArray:
    """Step backward along a stored cycle: the template point one step before z_next.

    The scaffold correction is undone first, so the result lives on the stored path.

    Raises:
        NoRetrieval: If the library is empty and no context was given
    """
    if context is None:
        if len(state.library) == 0:
            raise NoRetrieval("library is empty")
        context = min(
            state.library.records,
            key=lambda r: (phase_of(_locator(r), z_next)[1], r.class_id),
        )
    locator = _locator(context)
    center = _table(state.decoder, context).mean(axis=0)
    sc = state.scaffold
    raw = center + (z_next - sc.offset - center) / np.where(sc.gain != 0, sc.gain, 1.0)
    phase, _ = phase_of(locator, raw, hint)
    return point_at(locator, phase - 1.0)


def decoder_forward(state: MAIState, z_t: FloatArray) -> FloatArray:
    """Decoder-only one-step prediction, used when no cycle is retrieved."""
    return state.decoder.predict(z_t)


def fast_adapt(
    state: MAIState,
    residual: FloatArray,
    point: FloatArray | None = None,
    center: FloatArray | None = None,
    class_id: ClassId = "",
    phase: float = 0.0,
) -> MAIState:
    """Step only the scaffold against the squared residual; slow parameters are untouched."""
    residual = np.asarray(residual, dtype=float)
    if not np.any(residual):
        return state
    if point is None or center is None:
        point = center = np.zeros_like(residual)
    state.scaffold.step(residual, point, center, state.config.eta_fast, class_id, phase)
    return state


@dataclass
class DecodeTrace:
    residuals: list[float]
    classes: list[ClassId]
    predictions: FloatArray
    from_scratch: bool


def decode_steps(
    state: MAIState, states: FloatArray, retrieved: Sequence[CycleRecord], adapt: bool = True
) -> DecodeTrace:
    """Predict each next state and adapt the scaffold on the residual.

    A state is located on each retrieved record's stored path and the
    prediction is read one step further along the decoder's table for that
    class. The record nearest the current state is used, and switching to
    another needs a margin of ``switch_margin``. With nothing retrieved an
    affine predictor is fit from scratch as the episode unfolds.
    """
    cfg = state.config
    dim = states.shape[1]
    residuals: list[float] = []
    classes: list[ClassId] = []
    predictions = np.empty((max(len(states) - 1, 0), dim))

    if not retrieved:
        scratch = OnlineAffine(dim)
        for t in range(len(states) - 1):
            pred = scratch.predict(states[t])
            scratch.add(states[t], states[t + 1])
            r = pred - states[t + 1]
            predictions[t] = pred
            residuals.append(float(r @ r))
            classes.append("")
        return DecodeTrace(residuals, classes, predictions, True)

    locators = {r.class_id: _locator(r) for r in retrieved}
    tables = {r.class_id: _table(state.decoder, r) for r in retrieved}
    centers = {cid: table.mean(axis=0) for cid, table in tables.items()}
    hints: dict[ClassId, float | None] = {cid: None for cid in locators}
    active: ClassId | None = None
    for t in range(len(states) - 1):
        z, z_next = states[t], states[t + 1]
        located = {cid: phase_of(path, z, hints[cid]) for cid, path in locators.items()}
        best = min(located, key=lambda cid: (located[cid][1], cid))
        if active is None or located[best][1] < located[active][1] - cfg.switch_margin:
            active = best
        phase = located[active][0] + 1.0
        point = point_at(tables[active], phase)
        pred = state.scaffold.apply(point, centers[active])
        r = pred - z_next
        if adapt:
            fast_adapt(state, r, point, centers[active], active, phase)
        for cid, (ph, _) in located.items():
            hints[cid] = ph + 1.0
        predictions[t] = pred
        residuals.append(float(r @ r))
        classes.append(active)
    return DecodeTrace(residuals, classes, predictions, False)


@dataclass
class ClosureResult:
    library: CycleLibrary
    admitted: list[ClassId]
    falsified: list[ClassId]
    graph: StateGraph
    diagram: PersistenceDiagram
    tau: float


def closure_test(state: MAIState, tr: LatentTrajectory) -> ClosureResult:
    """Find the persistent loops of a trajectory and check them against the library.

    Builds the binned state graph, reduces its flag filtration, keeps the H1 bars
    that survive tau and proposes them for admission; stored classes that no
    longer persist are reported as falsified.
    """
    cfg = state.config
    graph = build_state_graph(tr, tr.time_bin, cfg.knn)
    diagram = reduce(build_graph_filtration(graph.graph))
    tau = cfg.tau if cfg.tau_mode == "fixed" else elbow_tau(diagram, 1, default=cfg.tau)
    bars = [b for b in pers_tau(diagram, tau) if b.dim == 1]
    library, admitted = admit(state.library, bars, tr, state.episode_counter, tau)
    falsified = falsify(library, tau)
    logger.debug(f"Closure test: {len(bars)} bars above tau={tau:.3f}, admitted {admitted}")
    if falsified:
        logger.debug(f"Closure test: falsified {falsified}")
    return ClosureResult(library, admitted, falsified, graph, diagram, tau)


def slow_consolidate(state: MAIState, closure_norm: int = 0) -> MAIState:
    """Fold the episode's consistent residuals into the decoder and reset the scaffold.

    Each class's prediction table moves against its mean residual per phase
    bin, damped when the episode failed to close, so over episodes an entry
    settles on the mean next state seen from that phase. The affine readout then
    steps toward the one-step map replayed from all tables. The encoder is held fixed so
    stored representatives keep their latent frame.
    """
    cfg = state.config
    decoder = state.decoder
    records = {r.class_id: r for r in state.library.records}
    if records:
        weight = cfg.eta_slow / (1.0 + cfg.lambda_r * closure_norm)
        prototypes = {cid: decoder.template_for(cid, rec.representative_path) for cid, rec in records.items()}
        by_bin: dict[tuple[ClassId, int], list[FloatArray]] = {}
        for entry in state.scaffold.residual_history:
            if entry.class_id in prototypes:
                n = len(prototypes[entry.class_id])
                by_bin.setdefault((entry.class_id, round(entry.phase) % n), []).append(entry.residual)
        folded = {cid: proto.copy() for cid, proto in prototypes.items()}
        for (cid, k), residuals in by_bin.items():
            folded[cid][k] -= weight * np.mean(residuals, axis=0)

        x = np.vstack([p for p in folded.values()])
        y = np.vstack([np.roll(p, -1, axis=0) for p in folded.values()])
        w_star, b_star = fit_affine(x, y)
        decoder = Decoder(
            prototypes=folded,
            weights=decoder.weights + cfg.eta_slow * (w_star - decoder.weights),
            bias=decoder.bias + cfg.eta_slow * (b_star - decoder.bias),
        )
    state.decoder = decoder
    state.scaffold.reset()
    return state


def closure_regularizer(state: MAIState, closure_norm: int) -> float:
    """lambda_R * R plus lambda_P times exp(-lifetime) summed over stored classes."""
    cfg = state.config
    penalty = sum(0.0 if math.isinf(r.lifetime) else math.exp(-r.lifetime) for r in state.library.records)
    return cfg.lambda_r * closure_norm + cfg.lambda_p * penalty


def stability_penalty(state: MAIState, ep: Episode, seed: int, max_scale: float = H3_VR_SCALE) -> float:
    """Bottleneck distance between the H1 diagrams of an episode and a reordering of it."""
    if not ep.closed:
        return 0.0
    enc = state.encoder_for(ep.modality)
    base = reduce(build_vr(encode(enc, ep).states, 2, max_scale))
    variant = reduce(build_vr(encode(enc, permute(ep, seed)).states, 2, max_scale))
    return bottleneck(base, variant, 1)


def run_episode(state: MAIState, ep: Episode, with_stability: bool = False) -> tuple[MAIState, EpisodeReport]:
    """One pass of retrieve, predict and adapt, closure test, and consolidation.

    Returns:
        The updated state and the episode's report
    """
    cfg = state.config
    tr = encode(state.encoder_for(ep.modality), ep, cfg.bin)
    state.scaffold.reset()

    retrieved: list[CycleRecord] = []
    if cfg.use_retrieval and len(state.library) > 0:
        retrieved = [rec for rec, _ in retrieve(tr, state.library, cfg.k, DtwAligner(cfg.dtw_band))]
    if not retrieved:
        logger.debug(f"Episode {state.episode_counter}: nothing retrieved, predicting from scratch")
    trace = decode_steps(state, tr.states, retrieved)
    hits = sorted(set(trace.classes) - {""})
    state.library = state.library.with_hits(hits)

    closure = closure_test(state, tr)
    state.library = update_memory(closure.library, closure.admitted, closure.falsified)
    norm = residual_boundary_norm(closure.graph, tr)
    try:
        inner = inner_steps_to_target(trace.residuals, cfg.target_residual, cfg.target_window)
    except TargetUnreachable:
        inner = len(trace.residuals)

    report = EpisodeReport(
        episode=state.episode_counter,
        loop_class=ep.loop_class,
        residual_series=trace.residuals,
        step_classes=trace.classes,
        residual_boundary_norm=norm,
        admitted=closure.admitted,
        falsified=closure.falsified,
        retrieval_hits=hits,
        inner_steps_used=inner,
        phi_size_after=len(state.library),
        closure_regularizer=closure_regularizer(state, norm),
        stability_penalty=stability_penalty(state, ep, state.episode_counter) if with_stability else 0.0,
        from_scratch=trace.from_scratch,
        closed=ep.closed,
    )
    state = slow_consolidate(state, norm)
    state.recent.append(report)
    report.entropy_proxy = entropy_proxy(list(state.recent))
    state.episode_counter += 1
    return state, report


@dataclass(frozen=True)
class GapEstimate:
    amortized: float
    oracle: float

    @property
    def epsilon(self) -> float:
        return self.amortized - self.oracle


def amortized_predictions(state: MAIState, ep: Episode) -> tuple[FloatArray, DecodeTrace]:
    """Decode an episode from memory alone, with an untouched scaffold and no state change."""
    tr = encode(state.encoder_for(ep.modality), ep, state.config.bin)
    retrieved: list[CycleRecord] = []
    if state.config.use_retrieval and len(state.library) > 0:
        aligner = DtwAligner(state.config.dtw_band)
        retrieved = [rec for rec, _ in retrieve(tr, state.library, state.config.k, aligner)]
    frozen = replace(state, scaffold=Scaffold(dim=tr.states.shape[1], frozen=True))
    return tr.states, decode_steps(frozen, tr.states, retrieved, adapt=False)


def amortized_loss(state: MAIState, ep: Episode) -> float:
    """Mean squared one-step residual of a memory-only decode of the episode."""
    _, trace = amortized_predictions(state, ep)
    return float(np.mean(trace.residuals))


def amortization_gap(
    state: MAIState, episodes: Sequence[Episode], min_episodes: int = MIN_GAP_EPISODES
) -> GapEstimate:
    """Mean amortized loss against the mean loss of a direct fit to each episode alone.

    Raises:
        InsufficientEpisodes: With fewer than min_episodes held-out episodes
    """
    if len(episodes) < min_episodes:
        raise InsufficientEpisodes(f"need {min_episodes} held-out episodes, got {len(episodes)}")
    amortized = [amortized_loss(state, ep) for ep in episodes]
    oracle = [oracle_loss(encode(state.encoder_for(ep.modality), ep).states) for ep in episodes]
    return GapEstimate(float(np.mean(amortized)), float(np.mean(oracle)))


def decode_class(state: MAIState, states: FloatArray, max_cost: float = MATCH_COST) -> CycleRecord | None:
    """Best-aligned stored record, or None when nothing aligns within max_cost."""
    if len(state.library) == 0:
        return None
    (record, cost), *_ = retrieve(states, state.library, 1, DtwAligner(state.config.dtw_band))
    return record if cost <= max_cost else None
