"""Task suite generators, the latent encoder and the binned state graph."""

from .encoder import Encoder, LatentTrajectory, encode, fit_encoder, procrustes_rotation, spectral_clip
from .episode_io import read_episode, read_points, write_episode
from .generators import (
    Episode,
    agent_map,
    gen_t1,
    gen_t2,
    gen_t3,
    modality_map,
    observation_map,
    permute,
    render,
    scramble,
)
from .shapes import expected_betti1, sample_loop
from .state_graph import StateGraph, build_state_graph

__all__ = [
    "Encoder",
    "Episode",
    "LatentTrajectory",
    "StateGraph",
    "agent_map",
    "build_state_graph",
    "encode",
    "expected_betti1",
    "fit_encoder",
    "gen_t1",
    "gen_t2",
    "gen_t3",
    "modality_map",
    "observation_map",
    "permute",
    "procrustes_rotation",
    "read_episode",
    "read_points",
    "render",
    "sample_loop",
    "scramble",
    "spectral_clip",
    "write_episode",
]
