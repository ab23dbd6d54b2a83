"""The cycle library: admission, falsification, retrieval and cross-agent intersection."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace
from functools import cached_property

import networkx as nx
import numpy as np

from src.mai.config import ANCHOR_MAX_SCALE, LANDMARK_CAP, RETRIEVAL_K, SEEN_CAP, TAU
from src.mai.persistence import Bar
from src.mai.tasks import LatentTrajectory
from src.mai.types import Aligner, ClassId, FloatArray, NoSharedAnchor, UnknownClassId

from .alignment import DtwAligner
from .anchor import AnchoredCycle, LandmarkAnchor, maxmin_landmarks

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CycleRecord:
    """A stored loop class with the latent path used to decode it."""

    class_id: ClassId
    representative_path: FloatArray
    lifetime: float
    dim: int = 1
    modality_tags: frozenset[str] = frozenset()
    hit_count: int = 0
    created_episode: int = 0
    label: str = ""  # ground-truth loop label of the source episode, for evaluation only

    @property
    def centroid(self) -> FloatArray:
        return np.asarray(self.representative_path[:-1].mean(axis=0))


@dataclass(frozen=True, eq=False)
class CycleLibrary:
    """Persistent content set plus the latent states its landmark anchor is fit on.

    ``pending`` holds records proposed by ``admit`` that ``update_memory`` has
    not yet merged. ``alignment`` maps this library's latent frame into a shared
    frame named ``frame``.
    """

    records: tuple[CycleRecord, ...] = ()
    seen: FloatArray = field(default_factory=lambda: np.empty((0, 0)))
    next_id: int = 1
    pending: tuple[CycleRecord, ...] = ()
    frame: str = "native"
    alignment: FloatArray | None = None
    landmark_cap: int = LANDMARK_CAP
    anchor_scale: float = ANCHOR_MAX_SCALE
    seen_cap: int = SEEN_CAP

    def __len__(self) -> int:
        return len(self.records)

    def class_ids(self) -> list[ClassId]:
        return [r.class_id for r in self.records]

    def get(self, class_id: ClassId) -> CycleRecord:
        for r in self.records:
            if r.class_id == class_id:
                return r
        raise UnknownClassId(class_id)

    @cached_property
    def landmark_anchor(self) -> LandmarkAnchor | None:
        if self.seen.size == 0:
            return None
        return LandmarkAnchor.from_states(self.seen, self.landmark_cap, self.anchor_scale)

    def observe(self, states: FloatArray) -> CycleLibrary:
        """Library whose anchor also covers the given latent states.

        Only a max-min subsample of ``seen_cap`` states is kept.
        """
        states = np.asarray(states, dtype=float)
        seen = states if self.seen.size == 0 else np.vstack([self.seen, states])
        if len(seen) > self.seen_cap:
            seen = maxmin_landmarks(seen, self.seen_cap)
        return replace(self, seen=seen)

    def with_hits(self, class_ids: Iterable[ClassId]) -> CycleLibrary:
        hits = set(class_ids)
        records = tuple(
            replace(r, hit_count=r.hit_count + 1) if r.class_id in hits else r for r in self.records
        )
        return replace(self, records=records)


def _members(node: int, time_bin: int, steps: int) -> range:
    return range(node * time_bin, min((node + 1) * time_bin, steps))


def path_for_bar(bar: Bar, tr: LatentTrajectory) -> FloatArray | None:
    """Latent path traced by a bar's representative cycle over the binned state graph.

    The cycle's nodes are walked along an Eulerian circuit oriented forward in
    time, each node contributing its member states in time order.
    """
    graph = nx.Graph([s.vertices for s in bar.representative.terms])
    if graph.number_of_edges() < 3:
        return None
    component = max(nx.connected_components(graph), key=lambda c: (len(c), -min(c)))
    if len(component) < graph.number_of_nodes():
        logger.debug(f"Representative splits into pieces; keeping the one with {len(component)} nodes")
    sub = graph.subgraph(component)
    if not nx.is_eulerian(sub):
        return None
    nodes = [u for u, _ in nx.eulerian_circuit(sub, source=min(component))]
    forward = sum(1 for a, b in zip(nodes, nodes[1:], strict=False) if b > a)
    if forward < (len(nodes) - 1) / 2:
        nodes = [nodes[0], *reversed(nodes[1:])]
    steps = len(tr.states)
    order = [t for node in nodes for t in _members(node, tr.time_bin, steps)]
    path = tr.states[order]
    return np.vstack([path, path[:1]])


def _anchored(anchor: LandmarkAnchor, paths: Sequence[FloatArray]) -> list[AnchoredCycle | None]:
    return [anchor.cycle_for_path(p) for p in paths]


def admit(
    lib: CycleLibrary, bars: Sequence[Bar], tr: LatentTrajectory, episode_id: int, tau: float = TAU
) -> tuple[CycleLibrary, list[ClassId]]:
    """Propose a record for every bar whose loop is new to the library.

    A bar's representative is mapped to a closed landmark walk; it is admitted
    when it survives tau in the anchored complex and is independent of the
    stored classes and of the bars admitted before it.

    Returns:
        The library with its anchor refit on the trajectory and the new records
        pending, and the proposed class ids
    """
    lib = lib.observe(tr.states)
    anchor = lib.landmark_anchor
    assert anchor is not None

    candidates: list[tuple[Bar, FloatArray, AnchoredCycle]] = []
    for bar in bars:
        if bar.dim < 1:
            continue
        path = path_for_bar(bar, tr)
        if path is None:
            continue
        cycle = anchor.cycle_for_path(path)
        if cycle is None or anchor.bounds(cycle, tau):
            continue
        candidates.append((bar, path, cycle))
    if not candidates:
        return lib, []

    stored = [c for c in _anchored(anchor, [r.representative_path for r in lib.records]) if c is not None]
    # A difference of two distinct chains never bounds strictly before its own birth,
    # so with tau = 0 only boundary-free linear independence is left to test.
    scale = max(c.birth for c in [*stored, *(c for _, _, c in candidates)]) + tau if tau > 0 else 0.0
    span = anchor.span(scale)
    for c in stored:
        span.add(c.chain)

    proposed: list[CycleRecord] = []
    next_id = lib.next_id
    for bar, path, cycle in candidates:
        if not span.add(cycle.chain):
            continue
        proposed.append(
            CycleRecord(
                class_id=f"c{next_id}",
                representative_path=path,
                lifetime=bar.lifetime,
                dim=bar.dim,
                modality_tags=frozenset({tr.modality}),
                created_episode=episode_id,
                label=tr.loop_class,
            )
        )
        next_id += 1
    logger.debug(f"Episode {episode_id}: {len(candidates)} candidate loops, {len(proposed)} new")
    return replace(lib, pending=tuple(proposed), next_id=next_id), [r.class_id for r in proposed]


def falsify(lib: CycleLibrary, tau: float = TAU) -> list[ClassId]:
    """Class ids whose loop now dies within tau in the library's current anchored complex.

    The diagram a class is re-evaluated against is that of the anchored complex
    itself, which ``admit`` refits on the new episode's states. It is read through
    the anchor's reduced boundary rather than passed in, so a class is checked
    against exactly the complex its chain lives in.
    """
    anchor = lib.landmark_anchor
    if tau <= 0 or anchor is None:
        return []
    out: list[ClassId] = []
    for record in lib.records:
        cycle = anchor.cycle_for_path(record.representative_path)
        if cycle is not None and anchor.bounds(cycle, tau):
            logger.debug(f"Falsified {record.class_id}: bounds within {tau} of birth {cycle.birth:.3f}")
            out.append(record.class_id)
    return out


def update_memory(
    lib: CycleLibrary, admitted: Iterable[ClassId], falsified: Iterable[ClassId]
) -> CycleLibrary:
    """Merge admitted records and drop falsified ones.

    Raises:
        UnknownClassId: If an id is neither stored nor pending
    """
    pending = {r.class_id: r for r in lib.pending}
    stored = {r.class_id for r in lib.records}
    admitted, falsified = list(admitted), set(falsified)
    for cid in admitted:
        if cid not in pending and cid not in stored:
            raise UnknownClassId(cid)
    for cid in falsified:
        if cid not in pending and cid not in stored:
            raise UnknownClassId(cid)
    records = [*lib.records, *(pending[c] for c in admitted if c in pending and c not in stored)]
    records = [r for r in records if r.class_id not in falsified]
    return replace(lib, records=tuple(records), pending=())


def retrieve(
    tr: LatentTrajectory | FloatArray,
    lib: CycleLibrary,
    k: int = RETRIEVAL_K,
    aligner: Aligner | None = None,
) -> list[tuple[CycleRecord, float]]:
    """The k records with lowest alignment cost, ascending, ties broken by class id."""
    if k < 1:
        raise ValueError("k must be at least 1")
    aligner = aligner or DtwAligner()
    states = tr.states if isinstance(tr, LatentTrajectory) else np.asarray(tr)
    scored = [(r, aligner.cost(states, r.representative_path)) for r in lib.records]
    scored.sort(key=lambda rc: (rc[1], rc[0].class_id))
    return scored[:k]


def _to_shared(lib: CycleLibrary, path: FloatArray) -> FloatArray:
    return path if lib.alignment is None else path @ lib.alignment


def intersect(libs: Sequence[CycleLibrary], tau: float = TAU) -> list[tuple[ClassId, ...]]:
    """Groups of records, one per library, that carry the same class in a shared frame.

    Each record joins at most one group.

    Raises:
        NoSharedAnchor: If the libraries use different frames and one lacks an alignment map
    """
    if len(libs) < 2:
        raise ValueError("intersection needs at least two libraries")
    frames = {lib.frame for lib in libs}
    if len(frames) > 1 and any(lib.alignment is None for lib in libs):
        raise NoSharedAnchor(f"libraries live in frames {sorted(frames)} without an alignment map")
    if any(len(lib) == 0 for lib in libs):
        return []

    paths = [[_to_shared(lib, r.representative_path) for r in lib.records] for lib in libs]
    shared = np.vstack([p for group in paths for p in group])
    anchor = LandmarkAnchor.from_states(shared, libs[0].landmark_cap, libs[0].anchor_scale)
    cycles = [_anchored(anchor, group) for group in paths]

    groups: list[tuple[ClassId, ...]] = []
    used: list[set[int]] = [set() for _ in libs[1:]]
    for i, first in enumerate(cycles[0]):
        if first is None or anchor.bounds(first, tau):
            continue
        picks: list[int] = []
        for others, taken in zip(cycles[1:], used, strict=True):
            match = None
            for j, other in enumerate(others):
                if j in taken or other is None or anchor.bounds(other, tau):
                    continue
                span = anchor.span(max(first.birth, other.birth) + tau)
                span.add(first.chain)
                if span.contains(other.chain):
                    match = j
                    break
            if match is None:
                break
            picks.append(match)
        if len(picks) == len(libs) - 1:
            for taken, j in zip(used, picks, strict=True):
                taken.add(j)
            members = [lib.records[j].class_id for lib, j in zip(libs[1:], picks, strict=True)]
            groups.append((libs[0].records[i].class_id, *members))
    logger.debug(f"Intersection of {len(libs)} libraries: {len(groups)} shared classes")
    return groups
