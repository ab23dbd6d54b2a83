"""JSON snapshots of a cycle library."""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np

from src.mai.config import CONFIG_SCHEMA_VERSION
from src.mai.types import ParseError

from .library import CycleLibrary, CycleRecord

logger = logging.getLogger(__name__)


def _lifetime_out(value: float) -> float | str:
    return "inf" if math.isinf(value) else value


def library_to_dict(lib: CycleLibrary) -> dict[str, Any]:
    return {
        "schema_version": CONFIG_SCHEMA_VERSION,
        "next_id": lib.next_id,
        "frame": lib.frame,
        "seen": lib.seen.tolist(),
        "records": [
            {
                "class_id": r.class_id,
                "representative_path": r.representative_path.tolist(),
                "lifetime": _lifetime_out(r.lifetime),
                "dim": r.dim,
                "modality_tags": sorted(r.modality_tags),
                "hit_count": r.hit_count,
                "created_episode": r.created_episode,
                "label": r.label,
            }
            for r in lib.records
        ],
    }


def library_from_dict(data: dict[str, Any]) -> CycleLibrary:
    """Rebuild a library from its snapshot document.

    Raises:
        ParseError: If the document is missing fields or has the wrong schema version
    """
    if data.get("schema_version") != CONFIG_SCHEMA_VERSION:
        raise ParseError(f"unsupported library schema version {data.get('schema_version')!r}")
    try:
        records = tuple(
            CycleRecord(
                class_id=r["class_id"],
                representative_path=np.asarray(r["representative_path"], dtype=float),
                lifetime=float(r["lifetime"]),
                dim=int(r["dim"]),
                modality_tags=frozenset(r.get("modality_tags", [])),
                hit_count=int(r.get("hit_count", 0)),
                created_episode=int(r.get("created_episode", 0)),
                label=r.get("label", ""),
            )
            for r in data["records"]
        )
        seen = np.asarray(data.get("seen", []), dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed library snapshot: {e}") from e
    return CycleLibrary(
        records=records,
        seen=seen if seen.size else np.empty((0, 0)),
        next_id=int(data.get("next_id", len(records) + 1)),
        frame=data.get("frame", "native"),
    )


def save_library(lib: CycleLibrary, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(library_to_dict(lib)) + "\n")
    logger.debug(f"Saved {len(lib)} records to {path}")


def load_library(path: Path) -> CycleLibrary:
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"library snapshot is not JSON: {e.msg}", e.lineno) from e
    return library_from_dict(data)
