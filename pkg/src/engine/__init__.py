"""icover engine - shortest solid covers of indeterminate strings and partial words"""

from .cover_engine import odot_prefix_solve, simple_solve
from .fpt_solver import fpt_solve_general, fpt_solve_partial
from .istring import Alphabet, IString, format_istring, parse_istring
from .lcp_index import LcpIndex, build_index
from .oracle import brute_shortest_cover, is_cover

__all__ = [
    "Alphabet",
    "IString",
    "LcpIndex",
    "brute_shortest_cover",
    "build_index",
    "format_istring",
    "fpt_solve_general",
    "fpt_solve_partial",
    "is_cover",
    "odot_prefix_solve",
    "parse_istring",
    "simple_solve",
]
