"""Leaky linear encoder with a spectral-norm bound."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lstsq, orthogonal_procrustes

from src.mai.config import BIN_WIDTH, ENCODER_LEAK, LATENT_DIM, LIPSCHITZ_BOUND
from src.mai.types import DimensionMismatch, FloatArray

from .generators import Episode

logger = logging.getLogger(__name__)


def spectral_clip(weights: FloatArray, bound: float) -> FloatArray:
    """Clip singular values so the operator norm is at most bound."""
    u, s, vt = np.linalg.svd(weights, full_matrices=False)
    return (u * np.minimum(s, bound)) @ vt


@dataclass(frozen=True, eq=False)
class LatentTrajectory:
    states: FloatArray
    time_bin: int = BIN_WIDTH
    loop_class: str = ""
    modality: str = "A"
    closed: bool = True

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True, eq=False)
class Encoder:
    """z_t = leak * z_{t-1} + W x_t, with W clipped to the Lipschitz bound."""

    weights: FloatArray
    leak: float = ENCODER_LEAK
    lipschitz_bound: float = LIPSCHITZ_BOUND

    def __post_init__(self) -> None:
        if not 0.0 <= self.leak < 1.0:
            raise ValueError(f"leak must lie in [0, 1), got {self.leak}")
        if self.lipschitz_bound <= 0:
            raise ValueError("lipschitz_bound must be positive")
        w = np.atleast_2d(np.asarray(self.weights, dtype=float))
        object.__setattr__(self, "weights", spectral_clip(w, self.lipschitz_bound))

    @classmethod
    def identity(cls, dim: int = LATENT_DIM) -> Encoder:
        return cls(np.eye(dim), leak=0.0, lipschitz_bound=1.0)

    @classmethod
    def for_map(cls, mixing: FloatArray, rotation: FloatArray | None = None) -> Encoder:
        """Invert an orthonormal-column mixing map, optionally in a rotated latent frame."""
        w = mixing.T if rotation is None else rotation @ mixing.T
        return cls(w, leak=0.0)

    @property
    def latent_dim(self) -> int:
        return int(self.weights.shape[0])

    @property
    def obs_dim(self) -> int:
        return int(self.weights.shape[1])

    def step(self, z_prev: FloatArray, x: FloatArray) -> FloatArray:
        return self.leak * z_prev + self.weights @ x

    def rotated(self, rotation: FloatArray) -> Encoder:
        """Encoder whose latents are the row-vector latents right-multiplied by rotation."""
        return Encoder(rotation.T @ self.weights, self.leak, self.lipschitz_bound)

    def calibrated(self, states: FloatArray, target_rms: float) -> Encoder:
        """Rescale so the RMS radius of states about their mean matches target_rms."""
        centered = states - states.mean(axis=0)
        rms = float(np.sqrt(np.mean(np.sum(centered**2, axis=1))))
        if rms == 0.0:
            return self
        return Encoder(self.weights * (target_rms / rms), self.leak, self.lipschitz_bound)


def encode(e: Encoder, ep: Episode, time_bin: int = BIN_WIDTH) -> LatentTrajectory:
    """Run the encoder over an episode from z_0 = 0.

    Raises:
        DimensionMismatch: If the episode's observation width differs from the encoder's
    """
    if ep.obs_dim != e.obs_dim:
        raise DimensionMismatch(f"encoder expects {e.obs_dim}-d observations, episode has {ep.obs_dim}")
    if e.leak == 0.0:
        states = ep.observations @ e.weights.T
    else:
        states = np.empty((ep.steps, e.latent_dim))
        z = np.zeros(e.latent_dim)
        for t, x in enumerate(ep.observations):
            z = e.step(z, x)
            states[t] = z
    return LatentTrajectory(states, time_bin, ep.loop_class, ep.modality, ep.closed)


def fit_encoder(
    observations: FloatArray, target_states: FloatArray, bound: float = LIPSCHITZ_BOUND
) -> Encoder:
    """Least-squares encoder mapping paired observations onto target latents."""
    if len(observations) != len(target_states):
        raise DimensionMismatch("paired observations and latents differ in length")
    solution, *_ = lstsq(observations, target_states)
    logger.debug(f"Fit encoder {solution.shape[1]}x{solution.shape[0]} on {len(observations)} pairs")
    return Encoder(solution.T, leak=0.0, lipschitz_bound=bound)


def procrustes_rotation(source: FloatArray, target: FloatArray) -> FloatArray:
    """Orthogonal map R minimizing ||source @ R - target|| over shared samples."""
    rotation, _ = orthogonal_procrustes(source, target)
    return np.asarray(rotation)
