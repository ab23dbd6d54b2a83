"""Per-episode reports and their newline-delimited JSON and CSV forms."""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from src.mai.types import ClassId

AGGREGATE_COLUMNS = [
    "episode",
    "phi_size",
    "residual_median",
    "R",
    "admissions",
    "falsifications",
    "inner_steps",
    "entropy_proxy",
]


@dataclass
class EpisodeReport:
    """What one episode did to the residuals and to the library."""

    episode: int
    loop_class: str
    residual_series: list[float]
    step_classes: list[ClassId]
    residual_boundary_norm: int
    admitted: list[ClassId] = field(default_factory=list)
    falsified: list[ClassId] = field(default_factory=list)
    retrieval_hits: list[ClassId] = field(default_factory=list)
    inner_steps_used: int = 0
    phi_size_after: int = 0
    entropy_proxy: float = 0.0
    closure_regularizer: float = 0.0
    stability_penalty: float = 0.0
    from_scratch: bool = False
    closed: bool = True
    coherence: float = 0.0

    @property
    def residual_mean(self) -> float:
        return float(np.mean(self.residual_series)) if self.residual_series else 0.0

    @property
    def residual_median(self) -> float:
        return float(np.median(self.residual_series)) if self.residual_series else 0.0

    def check(self) -> None:
        """Raise ValueError unless every magnitude is finite and nonnegative."""
        values = [
            *self.residual_series,
            self.residual_boundary_norm,
            self.inner_steps_used,
            self.phi_size_after,
            self.entropy_proxy,
            self.closure_regularizer,
            self.stability_penalty,
            self.coherence,
        ]
        bad = [v for v in values if not math.isfinite(v) or v < 0]
        if bad:
            raise ValueError(f"episode {self.episode} report has invalid magnitudes {bad[:3]}")

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["residual_median"] = self.residual_median
        return out

    def aggregate_row(self) -> list[str]:
        return [
            str(self.episode),
            str(self.phi_size_after),
            f"{self.residual_median:.10g}",
            str(self.residual_boundary_norm),
            str(len(self.admitted)),
            str(len(self.falsified)),
            str(self.inner_steps_used),
            f"{self.entropy_proxy:.10g}",
        ]


def reports_to_ndjson(reports: Iterable[EpisodeReport]) -> str:
    return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in reports)


def reports_to_csv(reports: Sequence[EpisodeReport]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(AGGREGATE_COLUMNS)
    writer.writerows(r.aggregate_row() for r in reports)
    return out.getvalue()


def write_reports(
    reports: Sequence[EpisodeReport], out_dir: Path, stem: str = "episodes"
) -> tuple[Path, Path]:
    """Write ``<stem>.ndjson`` and ``<stem>.csv`` into out_dir."""
    out_dir.mkdir(parents=True, exist_ok=True)
    ndjson_path = out_dir / f"{stem}.ndjson"
    csv_path = out_dir / f"{stem}.csv"
    ndjson_path.write_text(reports_to_ndjson(reports))
    csv_path.write_text(reports_to_csv(reports))
    return ndjson_path, csv_path
