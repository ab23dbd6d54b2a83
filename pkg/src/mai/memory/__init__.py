"""The cycle library, its landmark anchor, alignment and the fast scaffold."""

from .alignment import DtwAligner, align_cost, dtw, is_closed, open_cycle, subsequence_cost
from .anchor import AnchoredCycle, LandmarkAnchor, maxmin_landmarks
from .library import (
    CycleLibrary,
    CycleRecord,
    admit,
    falsify,
    intersect,
    path_for_bar,
    retrieve,
    update_memory,
)
from .scaffold import ResidualEntry, Scaffold
from .snapshot import library_from_dict, library_to_dict, load_library, save_library

__all__ = [
    "AnchoredCycle",
    "CycleLibrary",
    "CycleRecord",
    "DtwAligner",
    "LandmarkAnchor",
    "ResidualEntry",
    "Scaffold",
    "admit",
    "align_cost",
    "dtw",
    "falsify",
    "intersect",
    "is_closed",
    "library_from_dict",
    "library_to_dict",
    "load_library",
    "maxmin_landmarks",
    "open_cycle",
    "path_for_bar",
    "retrieve",
    "save_library",
    "subsequence_cost",
    "update_memory",
]
