"""Paired ablation arms: the baseline and one single-field change, run side by side."""

from __future__ import annotations

import asyncio
import logging
from dataclasses import dataclass, replace
from typing import Any

import numpy as np

from src.mai.config import A2_RATIO, A4_FRACTION, H5_RATIO
from src.mai.engine import EngineConfig
from src.mai.types import UnknownAblation

from .hypotheses import adaptation_ratios, check_h2
from .log import Verdict
from .runner import ExperimentRunner, RunResult, TaskSpec

logger = logging.getLogger(__name__)

# id -> (config section, field, arm value)
ABLATIONS: dict[str, tuple[str, str, Any]] = {
    "A1": ("task", "closed", False),
    "A2": ("engine", "tau", 0.0),
    "A3": ("engine", "use_retrieval", False),
    "A4": ("task", "scramble", True),
    "A5": ("engine", "freeze_scaffold", True),
}

A3_TOLERANCE = 0.1


@dataclass
class AblationResult:
    ablation: str
    verdict: Verdict
    baseline: RunResult
    arm: RunResult


def ablation_arm(ablation: str, config: EngineConfig, task: TaskSpec) -> tuple[EngineConfig, TaskSpec]:
    """Baseline configuration with the ablation's one field replaced.

    Raises:
        UnknownAblation: If the id is not in ABLATIONS
    """
    if ablation not in ABLATIONS:
        raise UnknownAblation(f"unknown ablation {ablation!r}, expected one of {sorted(ABLATIONS)}")
    section, name, value = ABLATIONS[ablation]
    if section == "engine":
        return replace(config, **{name: value}), task
    return config, replace(task, **{name: value})


def _judge_a1(base: RunResult, arm: RunResult) -> Verdict:
    admissions = sum(len(r.admitted) for r in arm.log.reports)
    norms = [r.residual_boundary_norm for r in arm.log.reports]
    mean_norm = float(np.mean(norms)) if norms else 0.0
    detail = {"admissions": admissions, "norms": norms}
    return Verdict("A1", admissions == 0 and mean_norm > 0, mean_norm, detail)


def _judge_a2(base: RunResult, arm: RunResult) -> Verdict:
    base_size, arm_size = len(base.state.library), len(arm.state.library)
    ratio = arm_size / max(base_size, 1)
    detail = {"baseline_sizes": base.log.phi_sizes(), "arm_sizes": arm.log.phi_sizes(), "threshold": A2_RATIO}
    return Verdict("A2", ratio >= A2_RATIO, ratio, detail)


def _stored_ratio(result: RunResult) -> float:
    ratios, _ = adaptation_ratios(result.state, result.held_out)
    return float(np.median(ratios)) if ratios else 1.0


def _judge_a3(base: RunResult, arm: RunResult) -> Verdict:
    base_ratio, arm_ratio = _stored_ratio(base), _stored_ratio(arm)
    base_loss = float(np.mean([r.residual_mean for r in base.log.reports]))
    arm_loss = float(np.mean([r.residual_mean for r in arm.log.reports]))
    passed = abs(arm_ratio - 1.0) <= A3_TOLERANCE and arm_loss > base_loss
    detail = {
        "baseline_h5_ratio": base_ratio,
        "arm_h5_ratio": arm_ratio,
        "baseline_loss": base_loss,
        "arm_loss": arm_loss,
        "h5_threshold": H5_RATIO,
    }
    return Verdict("A3", passed, arm_ratio, detail)


def _judge_a4(base: RunResult, arm: RunResult) -> Verdict:
    n = max(len(base.held_out_classes), 1)
    baseline = base.held_out_classes or [None]
    changed = [
        cls != baseline[i % n] or cls is None or not closed
        for i, (cls, closed) in enumerate(zip(arm.held_out_classes, arm.held_out_closed, strict=True))
    ]
    fraction = float(np.mean(changed)) if changed else 0.0
    detail = {"changed": changed, "baseline_classes": base.held_out_classes, "threshold": A4_FRACTION}
    return Verdict("A4", fraction >= A4_FRACTION, fraction, detail)


def _judge_a5(base: RunResult, arm: RunResult) -> Verdict:
    h2 = check_h2(arm.log)
    detail = {"arm_h2": h2.to_dict(), "baseline_medians": base.log.epoch_medians()}
    return Verdict("A5", not h2.passed, h2.statistic, detail)


JUDGES = {"A1": _judge_a1, "A2": _judge_a2, "A3": _judge_a3, "A4": _judge_a4, "A5": _judge_a5}


async def run_ablation_async(
    ablation: str, config: EngineConfig, task: TaskSpec, seed: int
) -> AblationResult:
    """Run baseline and arm concurrently and judge the arm against its expectation.

    Raises:
        UnknownAblation: If the id is not in ABLATIONS
    """
    arm_config, arm_task = ablation_arm(ablation, config, task)
    section, name, value = ABLATIONS[ablation]
    logger.debug(f"Ablation {ablation}: {section}.{name}={value!r}, seed={seed}")
    base, arm = await asyncio.gather(
        ExperimentRunner(config, task, seed).run(),
        ExperimentRunner(arm_config, arm_task, seed).run(),
    )
    verdict = JUDGES[ablation](base, arm)
    verdict.detail["field"] = f"{section}.{name}"
    return AblationResult(ablation, verdict, base, arm)


def run_ablation(ablation: str, config: EngineConfig, task: TaskSpec, seed: int) -> AblationResult:
    """Synchronous convenience wrapper around run_ablation_async."""
    return asyncio.run(run_ablation_async(ablation, config, task, seed))
