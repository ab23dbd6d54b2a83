"""Hypothesis checks, ablations and the experiment runner."""

from .ablations import ABLATIONS, AblationResult, ablation_arm, run_ablation, run_ablation_async
from .hypotheses import (
    adaptation_ratios,
    check_h1,
    check_h2,
    check_h3,
    check_h4,
    check_h5,
    h1_from_sizes,
    h2_from_medians,
    window_coherence,
)
from .log import ExperimentLog, Verdict, verdict_table, verdicts_to_json
from .runner import (
    ALL_CHECKS,
    ExperimentRunner,
    RunResult,
    TaskSpec,
    create_default_runner,
    evaluate,
    make_episode,
    run_experiment,
    schedule,
    subseed,
)

__all__ = [
    "ABLATIONS",
    "ALL_CHECKS",
    "AblationResult",
    "ExperimentLog",
    "ExperimentRunner",
    "RunResult",
    "TaskSpec",
    "Verdict",
    "ablation_arm",
    "adaptation_ratios",
    "check_h1",
    "check_h2",
    "check_h3",
    "check_h4",
    "check_h5",
    "create_default_runner",
    "evaluate",
    "h1_from_sizes",
    "h2_from_medians",
    "make_episode",
    "run_ablation",
    "run_ablation_async",
    "run_experiment",
    "schedule",
    "subseed",
    "verdict_table",
    "verdicts_to_json",
    "window_coherence",
]
