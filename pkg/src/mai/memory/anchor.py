"""Landmark-anchored complex for comparing cycle classes across episodes.

Classes found in different episodes live in different filtrations. Paths are
snapped to a shared landmark set and compared as 1-chains of one Vietoris-Rips
complex built on those landmarks.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np
from scipy.spatial.distance import cdist

from src.mai.chaincore import Chain
from src.mai.config import ANCHOR_MAX_SCALE, LANDMARK_CAP
from src.mai.persistence import CycleSpan, Filtration, ReducedBoundary, build_vr, reduce_boundary
from src.mai.types import EmptyInput, FloatArray

logger = logging.getLogger(__name__)


def maxmin_landmarks(points: FloatArray, cap: int = LANDMARK_CAP) -> FloatArray:
    """Greedy max-min subsample starting from the first point."""
    if len(points) == 0:
        raise EmptyInput("no states to pick landmarks from")
    chosen = [0]
    nearest = cdist(points[:1], points)[0]
    while len(chosen) < min(cap, len(points)):
        nxt = int(np.argmax(nearest))
        if nearest[nxt] == 0.0:
            break
        chosen.append(nxt)
        nearest = np.minimum(nearest, cdist(points[nxt : nxt + 1], points)[0])
    return points[chosen]


@dataclass(frozen=True)
class AnchoredCycle:
    chain: Chain
    birth: float


@dataclass(frozen=True, eq=False)
class LandmarkAnchor:
    """Vietoris-Rips complex on a landmark set, reduced once and queried many times."""

    landmarks: FloatArray
    max_scale: float = ANCHOR_MAX_SCALE

    @classmethod
    def from_states(
        cls, states: FloatArray, cap: int = LANDMARK_CAP, max_scale: float = ANCHOR_MAX_SCALE
    ) -> LandmarkAnchor:
        return cls(maxmin_landmarks(np.asarray(states, dtype=float), cap), max_scale)

    @cached_property
    def filtration(self) -> Filtration:
        return build_vr(self.landmarks, 2, self.max_scale)

    @cached_property
    def reduced(self) -> ReducedBoundary:
        return reduce_boundary(self.filtration)

    @cached_property
    def skeleton(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.landmarks)))
        for simplex, birth in self.filtration.entries:
            if simplex.dim == 1:
                graph.add_edge(*simplex.vertices, weight=birth)
        return graph

    def snap(self, path: FloatArray) -> list[int]:
        """Nearest landmark per point with consecutive repeats removed."""
        idx = np.argmin(cdist(np.atleast_2d(path), self.landmarks), axis=1)
        out: list[int] = []
        for i in idx.tolist():
            if not out or out[-1] != i:
                out.append(i)
        return out

    def cycle_for_path(self, path: FloatArray) -> AnchoredCycle | None:
        """Closed landmark walk following a path, or None when the walk leaves the complex.

        Consecutive landmarks are joined directly when adjacent and by a
        shortest path in the 1-skeleton otherwise.
        """
        hops = self.snap(path)
        if len(hops) < 2:
            return AnchoredCycle(Chain(1), 0.0)
        hops.append(hops[0])
        walk = [hops[0]]
        for a, b in zip(hops, hops[1:], strict=False):
            if a == b:
                continue
            if self.skeleton.has_edge(a, b):
                walk.append(b)
                continue
            try:
                walk.extend(nx.shortest_path(self.skeleton, a, b, weight="weight")[1:])
            except nx.NetworkXNoPath:
                logger.debug(f"Landmarks {a} and {b} are disconnected below scale {self.max_scale}")
                return None
        chain = Chain.edge_path(walk)
        births = self.filtration.birth_of
        birth = max((births[s] for s in chain.terms), default=0.0)
        return AnchoredCycle(chain, birth)

    def span(self, scale: float) -> CycleSpan:
        """Span of boundaries born strictly before scale, ready to take more cycles."""
        return CycleSpan(self.reduced, self.filtration.cutoff(scale, strict=True))

    def bounds(self, cycle: AnchoredCycle, tau: float) -> bool:
        """True iff the cycle dies within tau of its birth in the anchored complex."""
        if cycle.chain.is_zero():
            return True
        cutoff = self.filtration.cutoff(cycle.birth + tau, strict=True)
        return self.reduced.is_boundary_below(cycle.chain, cutoff)
