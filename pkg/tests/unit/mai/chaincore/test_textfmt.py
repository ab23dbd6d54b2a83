"""Tests for the chain and complex text format."""

from pathlib import Path

import pytest

from src.mai.chaincore import Chain, betti, format_chain, load_complex, parse_chain, parse_complex
from src.mai.types import ParseError


class TestTextFormat:
    """Tests for format_chain, parse_chain and parse_complex."""

    def test_format_then_parse(self) -> None:
        c = Chain.edge_path([0, 1, 2, 0])
        assert format_chain(c) == "1: 0 1 ; 0 2 ; 1 2"
        assert parse_chain(format_chain(c)) == c

    def test_missing_colon(self) -> None:
        with pytest.raises(ParseError):
            parse_chain("1 0 1")

    def test_dimension_mismatch_reports_line(self) -> None:
        """The error names the offending line."""
        text = "# comment\n1: 0 1\n1: 0 1 2\n"
        with pytest.raises(ParseError) as exc:
            parse_complex(text)
        assert exc.value.line == 3

    def test_empty_complex(self) -> None:
        with pytest.raises(ParseError):
            parse_complex("# nothing\n\n")

    def test_load_complex(self, tmp_path: Path) -> None:
        path = tmp_path / "triangle.txt"
        path.write_text("1: 0 1 ; 1 2 ; 0 2\n")
        k = load_complex(path)
        assert betti(k, 1) == 1
