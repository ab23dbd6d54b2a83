"""Synthetic episode generators for looped navigation, cross-modal and social tasks."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.stats import ortho_group

from src.mai.config import (
    AGENT_MAPS,
    LATENT_DIM,
    MICRO_SEGMENT,
    MIN_EPISODE_STEPS,
    MIXING_SEED,
    MODALITY_DIMS,
    OPEN_LOOP_FRACTION,
)
from src.mai.types import ConfigError, FloatArray

from .shapes import sample_loop

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Episode:
    """An observation sequence with its ground-truth loop label."""

    observations: FloatArray
    modality: str
    loop_class: str
    permutation_seed: int
    jitter: float
    permuted: bool = False
    closed: bool = True
    agent: str = ""
    class_preserving: bool = True
    meta: dict[str, float] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if len(self.observations) < MIN_EPISODE_STEPS:
            raise ValueError(f"episodes need at least {MIN_EPISODE_STEPS} steps")
        if self.jitter < 0:
            raise ValueError("jitter must be nonnegative")

    @property
    def steps(self) -> int:
        return len(self.observations)

    @property
    def obs_dim(self) -> int:
        return int(self.observations.shape[1])


def _with_velocity(points: FloatArray, closed: bool) -> FloatArray:
    """Append first-difference channels; a closed loop wraps around its distinct samples."""
    if closed:
        distinct = points[:-1]
        diff = distinct - np.roll(distinct, 1, axis=0)
        diff = np.vstack([diff, diff[:1]])
    else:
        diff = np.diff(points, axis=0, prepend=points[:1])
        diff[0] = diff[1]
    return np.hstack([points, diff])


def permute_rows(obs: FloatArray, rng: np.random.Generator, segment: int = MICRO_SEGMENT) -> FloatArray:
    """Reorder micro-event segments of a closed sequence and re-close it.

    Segment blocks are rotated cyclically and the interior rows of each segment
    are shuffled; segment endpoints stay fixed.
    """
    distinct = obs[:-1]
    n = len(distinct)
    starts = list(range(0, n, segment))
    shift = int(rng.integers(len(starts)))
    order: list[int] = []
    for k in range(len(starts)):
        start = starts[(k + shift) % len(starts)]
        block = list(range(start, min(start + segment, n)))
        if len(block) > 2:
            interior = block[1:-1]
            block = [block[0], *rng.permutation(interior).tolist(), block[-1]]
        order.extend(block)
    permuted = distinct[order]
    return np.vstack([permuted, permuted[:1]])


def scramble(ep: Episode, seed: int) -> Episode:
    """Class-breaking control: shuffle every step globally."""
    rng = np.random.default_rng([seed, 2])
    obs = ep.observations[rng.permutation(ep.steps)]
    return replace(ep, observations=obs, permutation_seed=seed, permuted=True, class_preserving=False)


def permute(ep: Episode, seed: int) -> Episode:
    """Class-preserving reordering of a closed episode."""
    if not ep.closed:
        raise ValueError("only closed episodes admit class-preserving permutations")
    rng = np.random.default_rng([seed, 1])
    return replace(ep, observations=permute_rows(ep.observations, rng), permutation_seed=seed, permuted=True)


def _latent_observations(
    shape: str,
    steps: int,
    jitter: float,
    seed: int,
    closed: bool,
    scale: float = 1.0,
    shift: tuple[float, float] = (0.0, 0.0),
) -> FloatArray:
    points = sample_loop(shape, steps, closed=closed, fraction=OPEN_LOOP_FRACTION, scale=scale, shift=shift)
    obs = _with_velocity(points, closed)
    if jitter > 0:
        rng = np.random.default_rng([seed, 0])
        noise = rng.normal(scale=jitter, size=obs.shape)
        obs = obs + noise
        if closed:
            obs[-1] = obs[0]
    return obs


def gen_t1(
    shape: str,
    steps: int,
    jitter: float,
    permute_steps: bool,
    seed: int,
    closed: bool = True,
    scale: float = 1.0,
    shift: tuple[float, float] = (0.0, 0.0),
) -> Episode:
    """Looped navigation episode: loop position plus velocity channels.

    Args:
        shape: Loop id, ``circle`` or ``figure8``
        steps: Number of time steps
        jitter: Standard deviation of the observation noise
        permute_steps: Apply a class-preserving segment permutation; needs a closed loop
        seed: Seed for noise and permutation
        closed: Sample the full loop; False traverses only part of it
        scale: Loop scale, used for homologous novel loops
        shift: Loop offset, used for homologous novel loops

    Raises:
        UnknownShape: If the shape is not registered
        ConfigError: If a permutation is asked of an open loop
    """
    if steps < MIN_EPISODE_STEPS:
        raise ValueError(f"episodes need at least {MIN_EPISODE_STEPS} steps")
    if permute_steps and not closed:
        raise ConfigError("permute", "class-preserving permutations need a closed loop")
    obs = _latent_observations(shape, steps, jitter, seed, closed, scale, shift)
    ep = Episode(obs, "A", shape, seed, jitter, closed=closed, meta={"scale": scale})
    if permute_steps:
        ep = permute(ep, seed)
    logger.debug(f"Generated T1 {shape} episode seed={seed} permuted={ep.permuted} closed={closed}")
    return ep


def observation_map(obs_dim: int, seed: int) -> FloatArray:
    """Fixed orthonormal-column mixing matrix of shape (obs_dim, LATENT_DIM)."""
    if obs_dim < LATENT_DIM:
        raise ValueError(f"obs_dim {obs_dim} cannot carry a {LATENT_DIM}-d latent loop")
    return np.asarray(ortho_group.rvs(obs_dim, random_state=seed))[:, :LATENT_DIM]


def modality_map(modality: str) -> FloatArray:
    return observation_map(MODALITY_DIMS[modality], MIXING_SEED + sorted(MODALITY_DIMS).index(modality))


def agent_map(agent: str) -> FloatArray:
    return observation_map(MODALITY_DIMS["A"], AGENT_MAPS[agent])


def render(ep: Episode, mixing: FloatArray, modality: str, agent: str = "") -> Episode:
    """Push a latent-coordinate episode through a mixing matrix."""
    return replace(ep, observations=ep.observations @ mixing.T, modality=modality, agent=agent)


def gen_t2(shape: str, steps: int, seed: int, jitter: float = 0.0) -> tuple[Episode, Episode]:
    """Cross-modal pair: one latent loop seen through modality A and modality B."""
    base = gen_t1(shape, steps, jitter, False, seed)
    return render(base, modality_map("A"), "A"), render(base, modality_map("B"), "B")


def gen_t3(
    shape: str, steps: int, seed: int, learner_shape: str | None = None, jitter: float = 0.0
) -> tuple[Episode, Episode]:
    """Social pair: mentor and learner observe a loop through their own mixing maps."""
    mentor = gen_t1(shape, steps, jitter, False, seed)
    learner = mentor if learner_shape in (None, shape) else gen_t1(learner_shape, steps, jitter, False, seed)
    return (
        render(mentor, agent_map("mentor"), "A", agent="mentor"),
        render(learner, agent_map("learner"), "A", agent="learner"),
    )
