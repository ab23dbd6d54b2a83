"""Filtrations, barcodes with representatives, and the bottleneck distance."""

from .bottleneck import bottleneck
from .diagram import Bar, PersistenceDiagram, diagram_to_csv, elbow_tau, pers_tau
from .filtration import Filtration, build_graph_filtration, build_vr
from .reduction import CycleSpan, ReducedBoundary, reduce, reduce_boundary

__all__ = [
    "Bar",
    "CycleSpan",
    "Filtration",
    "PersistenceDiagram",
    "ReducedBoundary",
    "bottleneck",
    "build_graph_filtration",
    "build_vr",
    "diagram_to_csv",
    "elbow_tau",
    "pers_tau",
    "reduce",
    "reduce_boundary",
]
