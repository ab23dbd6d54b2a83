"""Tests for library snapshots."""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from src.mai.memory import (
    CycleLibrary,
    CycleRecord,
    library_from_dict,
    library_to_dict,
    load_library,
    save_library,
)
from src.mai.types import ParseError


@pytest.fixture
def library() -> CycleLibrary:
    path = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    records = (
        CycleRecord("c1", path, 0.8, modality_tags=frozenset({"A"}), label="circle"),
        CycleRecord("c2", path * 2, math.inf, hit_count=3, created_episode=4),
    )
    return CycleLibrary(records=records, next_id=3, frame="mentor")


class TestSnapshot:
    """Tests for save_library and load_library."""

    def test_infinite_lifetime_written_as_text(self, library: CycleLibrary) -> None:
        data = library_to_dict(library)
        assert data["records"][1]["lifetime"] == "inf"
        assert data["schema_version"] == 1

    def test_save_and_load(self, tmp_path: Path, library: CycleLibrary) -> None:
        path = tmp_path / "lib" / "phi.json"
        save_library(library, path)
        loaded = load_library(path)
        assert loaded.class_ids() == ["c1", "c2"]
        assert loaded.next_id == 3
        assert loaded.frame == "mentor"
        assert math.isinf(loaded.get("c2").lifetime)
        assert loaded.get("c2").hit_count == 3
        assert loaded.get("c1").label == "circle"
        expected = library.get("c1").representative_path
        np.testing.assert_array_equal(loaded.get("c1").representative_path, expected)

    def test_wrong_version(self, library: CycleLibrary) -> None:
        data = library_to_dict(library)
        data["schema_version"] = 2
        with pytest.raises(ParseError):
            library_from_dict(data)

    def test_missing_field(self) -> None:
        with pytest.raises(ParseError):
            library_from_dict({"schema_version": 1, "records": [{"class_id": "c1"}]})

    def test_not_json(self, tmp_path: Path) -> None:
        path = tmp_path / "phi.json"
        path.write_text("{not json")
        with pytest.raises(ParseError):
            load_library(path)

    def test_document_is_plain_json(self, tmp_path: Path, library: CycleLibrary) -> None:
        path = tmp_path / "phi.json"
        save_library(library, path)
        assert json.loads(path.read_text())["next_id"] == 3
