"""Binned latent state graph used to read loops out of a trajectory."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import networkx as nx
import numpy as np
from scipy.spatial.distance import cdist

from src.mai.config import BIN_WIDTH, KNN
from src.mai.types import FloatArray

from .encoder import LatentTrajectory

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StateGraph:
    """Bin centroids as nodes; temporal path edges plus optional nearest-neighbor edges."""

    graph: nx.Graph
    centroids: FloatArray
    members: tuple[tuple[int, ...], ...]

    @property
    def n_nodes(self) -> int:
        return len(self.centroids)

    def snap(self, states: FloatArray) -> np.ndarray:
        """Index of the nearest centroid for each state."""
        return np.argmin(cdist(np.atleast_2d(states), self.centroids), axis=1)

    def temporal_edges(self) -> list[tuple[int, int]]:
        return [(i, i + 1) for i in range(self.n_nodes - 1)]


def build_state_graph(tr: LatentTrajectory, bin: int = BIN_WIDTH, knn: int = KNN) -> StateGraph:  # noqa: A002
    """Bin a trajectory in time and connect the bin centroids.

    Args:
        tr: Latent trajectory
        bin: Steps per bin
        knn: Nearest neighbours added per node in latent space

    Returns:
        StateGraph whose edge weights are centroid distances
    """
    if bin < 1:
        raise ValueError("bin must be at least 1")
    states = np.asarray(tr.states, dtype=float)
    members = tuple(tuple(range(s, min(s + bin, len(states)))) for s in range(0, len(states), bin))
    centroids = np.array([states[list(m)].mean(axis=0) for m in members])
    dist = cdist(centroids, centroids)

    graph = nx.Graph()
    graph.add_nodes_from(range(len(centroids)))
    for i in range(len(centroids) - 1):
        graph.add_edge(i, i + 1, weight=float(dist[i, i + 1]), kind="temporal")
    if knn > 0 and len(centroids) > 1:
        masked = dist + np.diag(np.full(len(centroids), np.inf))
        for i, row in enumerate(masked):
            for j in np.argsort(row, kind="stable")[: min(knn, len(centroids) - 1)]:
                if not graph.has_edge(i, int(j)):
                    graph.add_edge(i, int(j), weight=float(dist[i, j]), kind="knn")
    logger.debug(f"State graph: {graph.number_of_nodes()} nodes, {graph.number_of_edges()} edges")
    return StateGraph(graph, centroids, members)
