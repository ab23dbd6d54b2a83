"""Memory-amortized inference: persistent cycle memory for looped trajectories."""

from .engine import EngineConfig, MAIState, new_state, run_episode
from .eval import ExperimentRunner, TaskSpec, create_default_runner, run_experiment

__all__ = [
    "EngineConfig",
    "ExperimentRunner",
    "MAIState",
    "TaskSpec",
    "create_default_runner",
    "new_state",
    "run_episode",
    "run_experiment",
]
