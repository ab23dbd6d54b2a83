"""Chain-complex arithmetic over the two-element field."""

from .chain import Chain, boundary, is_cycle
from .complex import SimplicialComplex, betti, class_equal, gf2_rank, gf2_solvable, is_boundary
from .simplex import Simplex
from .textfmt import format_chain, load_complex, parse_chain, parse_complex

__all__ = [
    "Chain",
    "Simplex",
    "SimplicialComplex",
    "betti",
    "boundary",
    "class_equal",
    "format_chain",
    "gf2_rank",
    "gf2_solvable",
    "is_boundary",
    "is_cycle",
    "load_complex",
    "parse_chain",
    "parse_complex",
]
