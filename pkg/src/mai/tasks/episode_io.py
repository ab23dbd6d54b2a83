"""Episode files: one CSV row per step with a JSON header sidecar."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from src.mai.types import ParseError

from .generators import Episode


def header_path(path: Path) -> Path:
    return path.with_suffix(".json")


def write_episode(ep: Episode, path: Path) -> None:
    """Write observations to ``path`` and the episode header next to it."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i}" for i in range(ep.obs_dim)])
        writer.writerows([[repr(float(v)) for v in row] for row in ep.observations])
    header = {
        "shape": ep.loop_class,
        "T": ep.steps,
        "jitter": ep.jitter,
        "seed": ep.permutation_seed,
        "modality": ep.modality,
        "permuted": ep.permuted,
        "closed": ep.closed,
        "agent": ep.agent,
    }
    header_path(path).write_text(json.dumps(header, indent=2) + "\n")


def read_points(path: Path) -> np.ndarray:
    """Read a numeric CSV, skipping a non-numeric header row.

    Raises:
        ParseError: If a row is not numeric or rows differ in width
    """
    rows: list[list[float]] = []
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                rows.append([float(cell) for cell in row])
            except ValueError as e:
                if lineno == 1:
                    continue
                raise ParseError(f"non-numeric value: {e}", lineno) from e
            if len(rows[-1]) != len(rows[0]):
                raise ParseError(f"expected {len(rows[0])} columns, got {len(rows[-1])}", lineno)
    return np.array(rows, dtype=float) if rows else np.empty((0, 0))


def read_episode(path: Path) -> Episode:
    """Load an episode written by write_episode."""
    header = json.loads(header_path(path).read_text())
    return Episode(
        observations=read_points(path),
        modality=header["modality"],
        loop_class=header["shape"],
        permutation_seed=int(header["seed"]),
        jitter=float(header["jitter"]),
        permuted=bool(header.get("permuted", False)),
        closed=bool(header.get("closed", True)),
        agent=header.get("agent", ""),
    )
