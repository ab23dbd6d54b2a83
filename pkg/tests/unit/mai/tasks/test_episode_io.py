"""Tests for episode files."""

import json
from pathlib import Path

import numpy as np
import pytest

from src.mai.tasks import Episode, read_episode, read_points, write_episode
from src.mai.types import ParseError


class TestEpisodeIo:
    """Tests for write_episode, read_episode and read_points."""

    def test_header_sidecar(self, tmp_path: Path, circle_episode: Episode) -> None:
        path = tmp_path / "ep.csv"
        write_episode(circle_episode, path)
        header = json.loads((tmp_path / "ep.json").read_text())
        assert header["shape"] == "circle"
        assert header["T"] == 64
        assert header["closed"] is True

    def test_read_back(self, tmp_path: Path, circle_episode: Episode) -> None:
        path = tmp_path / "ep.csv"
        write_episode(circle_episode, path)
        loaded = read_episode(path)
        np.testing.assert_array_equal(loaded.observations, circle_episode.observations)
        assert loaded.loop_class == circle_episode.loop_class

    def test_read_points_skips_header(self, tmp_path: Path) -> None:
        path = tmp_path / "pts.csv"
        path.write_text("x,y\n0,1\n2,3\n")
        np.testing.assert_array_equal(read_points(path), [[0.0, 1.0], [2.0, 3.0]])

    def test_read_points_bad_value(self, tmp_path: Path) -> None:
        path = tmp_path / "pts.csv"
        path.write_text("0,1\n2,oops\n")
        with pytest.raises(ParseError) as exc:
            read_points(path)
        assert exc.value.line == 2

    def test_read_points_ragged(self, tmp_path: Path) -> None:
        path = tmp_path / "pts.csv"
        path.write_text("0,1\n2\n")
        with pytest.raises(ParseError):
            read_points(path)

    def test_empty_file(self, tmp_path: Path) -> None:
        path = tmp_path / "pts.csv"
        path.write_text("")
        assert read_points(path).size == 0
