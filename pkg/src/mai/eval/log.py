"""Experiment logs and hypothesis verdicts."""

from __future__ import annotations

import json
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.mai.engine import EpisodeReport


@dataclass
class ExperimentLog:
    """Episode reports of one run, in execution order.

    ``evaluations`` holds, for each finished epoch, the mean amortized residual
    of every held-out episode decoded with the memory of that moment.
    """

    seed: int
    episodes_per_epoch: int
    config: dict[str, Any] = field(default_factory=dict)
    reports: list[EpisodeReport] = field(default_factory=list)
    evaluations: list[list[float]] = field(default_factory=list)

    def append(self, report: EpisodeReport) -> None:
        self.reports.append(report)

    def epochs(self) -> list[list[EpisodeReport]]:
        size = max(self.episodes_per_epoch, 1)
        return [self.reports[i : i + size] for i in range(0, len(self.reports), size)]

    def phi_sizes(self) -> list[int]:
        return [r.phi_size_after for r in self.reports]

    def epoch_medians(self) -> list[float]:
        """Median over each epoch of the per-episode mean residual.

        Held-out evaluations are used when the run recorded them, otherwise the
        training episodes of each epoch.
        """
        scored = [losses for losses in self.evaluations if losses]
        if scored:
            return [float(np.median(losses)) for losses in scored]
        return [float(np.median([r.residual_mean for r in epoch])) for epoch in self.epochs() if epoch]


@dataclass
class Verdict:
    """Outcome of one hypothesis or ablation check with the series behind it."""

    hypothesis: str
    passed: bool
    statistic: float
    detail: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not math.isfinite(self.statistic):
            self.detail.setdefault("raw_statistic", str(self.statistic))
            self.statistic = float(np.nan_to_num(self.statistic, posinf=1e308, neginf=-1e308))

    def to_dict(self) -> dict[str, Any]:
        return {
            "hypothesis": self.hypothesis,
            "pass": self.passed,
            "statistic": self.statistic,
            "detail": self.detail,
        }


def verdicts_to_json(verdicts: Sequence[Verdict]) -> str:
    return json.dumps([v.to_dict() for v in verdicts], indent=2, default=float) + "\n"


def verdict_table(verdicts: Sequence[Verdict]) -> str:
    """Fixed-width summary, one row per verdict."""
    rows = [f"{'check':<8}{'result':<8}{'statistic':>14}"]
    for v in verdicts:
        rows.append(f"{v.hypothesis:<8}{'PASS' if v.passed else 'FAIL':<8}{v.statistic:>14.6g}")
    return "\n".join(rows) + "\n"
