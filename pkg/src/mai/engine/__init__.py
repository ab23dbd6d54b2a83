"""The amortized-inference episode loop, its state, metrics and reports."""

from .engine import (
    ClosureResult,
    DecodeTrace,
    GapEstimate,
    amortization_gap,
    amortized_loss,
    amortized_predictions,
    bootstrap_forward,
    closure_regularizer,
    closure_test,
    decode_class,
    decode_steps,
    decoder_forward,
    fast_adapt,
    phase_of,
    point_at,
    retrieval_inverse,
    run_episode,
    slow_consolidate,
    stability_penalty,
)
from .metrics import (
    contraction_fit,
    entropy_proxy,
    histogram_entropy,
    inner_steps_to_target,
    residual_boundary_norm,
)
from .oracle import OnlineAffine, fit_affine, oracle_loss
from .reports import EpisodeReport, reports_to_csv, reports_to_ndjson, write_reports
from .state import Decoder, EngineConfig, MAIState, new_state

__all__ = [
    "ClosureResult",
    "DecodeTrace",
    "Decoder",
    "EngineConfig",
    "EpisodeReport",
    "GapEstimate",
    "MAIState",
    "OnlineAffine",
    "amortization_gap",
    "amortized_loss",
    "amortized_predictions",
    "bootstrap_forward",
    "closure_regularizer",
    "closure_test",
    "contraction_fit",
    "decode_class",
    "decode_steps",
    "decoder_forward",
    "entropy_proxy",
    "fast_adapt",
    "fit_affine",
    "histogram_entropy",
    "inner_steps_to_target",
    "new_state",
    "oracle_loss",
    "phase_of",
    "point_at",
    "reports_to_csv",
    "reports_to_ndjson",
    "residual_boundary_norm",
    "retrieval_inverse",
    "run_episode",
    "slow_consolidate",
    "stability_penalty",
    "write_reports",
]
