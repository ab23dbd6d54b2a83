"""Run configuration: one strict JSON document per experiment."""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from src.mai.config import CONFIG_SCHEMA_VERSION
from src.mai.engine import EngineConfig
from src.mai.eval import ABLATIONS, ALL_CHECKS, TaskSpec
from src.mai.types import ConfigError, UnknownAblation

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = {"schema_version", "seed", "engine", "task", "out_dir", "library_path", "ablation", "checks"}
TUPLE_FIELDS = {"shapes", "learner_shapes"}
BUNDLED_DIR = Path(__file__).parent / "configs"


@dataclass(frozen=True)
class RunConfig:
    """Engine and task settings plus where a run writes its outputs."""

    seed: int
    engine: EngineConfig = field(default_factory=EngineConfig)
    task: TaskSpec = field(default_factory=TaskSpec)
    out_dir: Path = Path("runs")
    library_path: Path | None = None
    ablation: str | None = None
    checks: tuple[str, ...] = ALL_CHECKS

    def with_overrides(
        self,
        seed: int | None = None,
        out_dir: Path | None = None,
        library_path: Path | None = None,
        tau: float | None = None,
    ) -> RunConfig:
        """Apply command-line overrides; the engine seed always follows the run seed."""
        cfg = self
        if seed is not None:
            cfg = replace(cfg, seed=seed, engine=replace(cfg.engine, seed=seed))
        if out_dir is not None:
            cfg = replace(cfg, out_dir=out_dir)
        if library_path is not None:
            cfg = replace(cfg, library_path=library_path)
        if tau is not None:
            cfg = replace(cfg, engine=replace(cfg.engine, tau=tau))
        return cfg

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": CONFIG_SCHEMA_VERSION,
            "seed": self.seed,
            "engine": asdict(self.engine),
            "task": {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self.task).items()},
            "out_dir": str(self.out_dir),
            "library_path": str(self.library_path) if self.library_path else None,
            "ablation": self.ablation,
            "checks": list(self.checks),
        }


def _section(cls: type, raw: Any, name: str) -> Any:
    if not isinstance(raw, dict):
        raise ConfigError(name, "must be an object")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"{name}.{unknown[0]}", "unknown key")
    values = {k: tuple(v) if k in TUPLE_FIELDS and v is not None else v for k, v in raw.items()}
    try:
        return cls(**values)
    except TypeError as e:
        raise ConfigError(name, str(e)) from e


def parse_run_config(raw: Any) -> RunConfig:
    """Validate a decoded JSON document.

    Raises:
        ConfigError: Naming the first missing, unknown or invalid field
    """
    if not isinstance(raw, dict):
        raise ConfigError("config", "top level must be an object")
    unknown = sorted(set(raw) - TOP_LEVEL_KEYS)
    if unknown:
        raise ConfigError(unknown[0], "unknown key")
    if raw.get("schema_version") != CONFIG_SCHEMA_VERSION:
        raise ConfigError("schema_version", f"must be {CONFIG_SCHEMA_VERSION}")
    if "seed" not in raw:
        raise ConfigError("seed", "is required")
    seed = raw["seed"]
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError("seed", "must be a nonnegative integer")

    engine_raw = raw.get("engine", {})
    if not isinstance(engine_raw, dict):
        raise ConfigError("engine", "must be an object")
    engine = _section(EngineConfig, {**engine_raw, "seed": seed}, "engine")
    task = _section(TaskSpec, raw.get("task", {}), "task")

    ablation = raw.get("ablation")
    if ablation is not None and ablation not in ABLATIONS:
        raise UnknownAblation(f"unknown ablation {ablation!r}, expected one of {sorted(ABLATIONS)}")
    checks = tuple(raw.get("checks", ALL_CHECKS))
    bad = [c for c in checks if c not in ALL_CHECKS]
    if bad:
        raise ConfigError("checks", f"unknown check {bad[0]!r}")

    library = raw.get("library_path")
    return RunConfig(
        seed=seed,
        engine=engine,
        task=task,
        out_dir=Path(raw.get("out_dir", "runs")),
        library_path=Path(library) if library else None,
        ablation=ablation,
        checks=checks,
    )


def load_run_config(path: str | Path) -> RunConfig:
    """Read a run configuration, falling back to the bundled configs by file name.

    Raises:
        ConfigError: If the file is missing, not JSON, or fails validation
    """
    path = Path(path)
    if not path.exists() and (BUNDLED_DIR / path.name).exists():
        path = BUNDLED_DIR / path.name
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ConfigError("config", f"no such file {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError("config", f"invalid JSON at line {e.lineno}: {e.msg}") from e
    logger.debug(f"Loaded run config {path}")
    return parse_run_config(raw)
