"""Fixtures shared with the unit suite."""

from tests.unit.mai.conftest import circle_episode, trained_state

__all__ = ["circle_episode", "trained_state"]
