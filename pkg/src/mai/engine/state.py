"""Engine configuration, the slow decoder and the per-agent engine state."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from src.mai.config import (
    ANCHOR_MAX_SCALE,
    BIN_WIDTH,
    DTW_BAND,
    ETA_FAST,
    ENTROPY_WINDOW,
    ETA_SLOW,
    GAMMA_TARGET,
    KNN,
    LAMBDA_P,
    LAMBDA_R,
    LANDMARK_CAP,
    LATENT_DIM,
    RETRIEVAL_K,
    SWITCH_MARGIN,
    TARGET_RESIDUAL,
    TARGET_WINDOW,
    TAU,
    TAU_MODE,
)
from src.mai.memory import CycleLibrary, Scaffold, open_cycle
from src.mai.tasks import Encoder
from src.mai.types import ClassId, ConfigError, FloatArray

from .reports import EpisodeReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EngineConfig:
    """Hyperparameters of one engine; ablation arms replace exactly one field."""

    tau: float = TAU
    k: int = RETRIEVAL_K
    eta_fast: float = ETA_FAST
    eta_slow: float = ETA_SLOW
    lambda_r: float = LAMBDA_R
    lambda_p: float = LAMBDA_P
    gamma_target: float = GAMMA_TARGET
    bin: int = BIN_WIDTH
    knn: int = KNN
    seed: int = 0
    tau_mode: str = TAU_MODE
    use_retrieval: bool = True
    freeze_scaffold: bool = False
    dtw_band: int | None = DTW_BAND
    landmark_cap: int = LANDMARK_CAP
    anchor_scale: float = ANCHOR_MAX_SCALE
    target_residual: float = TARGET_RESIDUAL
    target_window: int = TARGET_WINDOW
    switch_margin: float = SWITCH_MARGIN

    def __post_init__(self) -> None:
        if self.tau < 0:
            raise ConfigError("tau", "must be nonnegative")
        if self.k < 1:
            raise ConfigError("k", "must be at least 1")
        if self.eta_fast <= 0:
            raise ConfigError("eta_fast", "must be positive")
        if self.eta_slow <= 0:
            raise ConfigError("eta_slow", "must be positive")
        if self.bin < 1:
            raise ConfigError("bin", "must be at least 1")
        if self.knn < 0:
            raise ConfigError("knn", "must be nonnegative")
        if self.tau_mode not in ("fixed", "elbow"):
            raise ConfigError("tau_mode", f"expected 'fixed' or 'elbow', got {self.tau_mode!r}")


@dataclass(frozen=True, eq=False)
class Decoder:
    """Slow readout: per-class prediction tables plus an affine one-step predictor.

    A table has one entry per point of the class's stored path and starts as a
    copy of it. The affine part serves decoder-only prediction when nothing is
    retrieved.
    """

    prototypes: dict[ClassId, FloatArray] = field(default_factory=dict)
    weights: FloatArray = field(default_factory=lambda: np.eye(LATENT_DIM))
    bias: FloatArray = field(default_factory=lambda: np.zeros(LATENT_DIM))

    def template_for(self, class_id: ClassId, fallback: FloatArray) -> FloatArray:
        proto = self.prototypes.get(class_id)
        return proto if proto is not None else open_cycle(np.asarray(fallback, dtype=float))

    def predict(self, z: FloatArray) -> FloatArray:
        return np.asarray(self.weights @ z + self.bias)

    def with_prototype(self, class_id: ClassId, proto: FloatArray) -> Decoder:
        return replace(self, prototypes={**self.prototypes, class_id: proto})


@dataclass(eq=False)
class MAIState:
    """Everything one agent carries between episodes.

    Encoders are keyed by modality; the scaffold is the only fast component.
    """

    encoders: dict[str, Encoder]
    decoder: Decoder
    library: CycleLibrary
    scaffold: Scaffold
    config: EngineConfig = field(default_factory=EngineConfig)
    episode_counter: int = 0
    recent: deque[EpisodeReport] = field(default_factory=lambda: deque(maxlen=ENTROPY_WINDOW))

    @property
    def encoder(self) -> Encoder:
        return self.encoders.get("A") or next(iter(self.encoders.values()))

    def encoder_for(self, modality: str) -> Encoder:
        return self.encoders.get(modality, self.encoder)


def new_state(
    config: EngineConfig | None = None,
    encoders: dict[str, Encoder] | None = None,
    library: CycleLibrary | None = None,
) -> MAIState:
    """Fresh engine state with an identity encoder and an empty library unless given."""
    config = config or EngineConfig()
    encoders = encoders or {"A": Encoder.identity()}
    dim = next(iter(encoders.values())).latent_dim
    if library is None:
        library = CycleLibrary(landmark_cap=config.landmark_cap, anchor_scale=config.anchor_scale)
    return MAIState(
        encoders=dict(encoders),
        decoder=Decoder(weights=np.eye(dim), bias=np.zeros(dim)),
        library=library,
        scaffold=Scaffold(dim=dim, frozen=config.freeze_scaffold),
        config=config,
    )
