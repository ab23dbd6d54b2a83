"""Debug text format for chains and complexes: ``k: v0 v1 ... ; v0 v1 ...``."""

from pathlib import Path

from src.mai.types import ParseError

from .chain import Chain
from .complex import SimplicialComplex
from .simplex import Simplex


def format_chain(c: Chain) -> str:
    """Render a chain with its simplices in sorted order."""
    body = " ; ".join(str(s) for s in sorted(c.terms))
    return f"{c.dim}: {body}".rstrip()


def parse_chain(text: str, line: int | None = None) -> Chain:
    """Parse one chain line.

    Raises:
        ParseError: If the dimension header or a simplex is malformed
    """
    head, sep, body = text.partition(":")
    if not sep:
        raise ParseError(f"missing ':' in {text!r}", line)
    try:
        dim = int(head.strip())
    except ValueError as e:
        raise ParseError(f"bad dimension {head.strip()!r}", line) from e
    simplices = []
    for part in body.split(";"):
        if not part.strip():
            continue
        try:
            s = Simplex.of(*(int(tok) for tok in part.split()))
        except ValueError as e:
            raise ParseError(f"bad simplex {part.strip()!r}: {e}", line) from e
        if s.dim != dim:
            raise ParseError(f"simplex {s} has dimension {s.dim}, header says {dim}", line)
        simplices.append(s)
    return Chain.from_simplices(dim, simplices)


def parse_complex(text: str) -> SimplicialComplex:
    """Parse a complex given as chain lines; the face closure of all terms is taken.

    Blank lines and lines starting with '#' are skipped.
    """
    simplices: list[Simplex] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        simplices.extend(parse_chain(stripped, lineno).terms)
    if not simplices:
        raise ParseError("complex file holds no simplices")
    try:
        return SimplicialComplex.closure_of(simplices)
    except ValueError as e:
        raise ParseError(str(e)) from e


def load_complex(path: Path) -> SimplicialComplex:
    return parse_complex(path.read_text(encoding="utf-8"))
