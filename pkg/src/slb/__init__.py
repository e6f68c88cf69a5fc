"""Surface-link bordism toolkit.

Movies of oriented n-component surface-links, their double and triple
linking numbers, the bordism invariant H, normal forms built from Hopf
2-links with and without beads, and independent numerical oracles.
"""

from .bordism import (
    BordismClass,
    GeneratorSpec,
    NormalForm,
    G_decompose,
    add,
    canonicalize_triples,
    negate,
)
from .catalog import build_S_ij, build_S_ijk, catalog_entries, realize, trivial_link
from .invariants import InvariantReport, check_relations, compute_H, dlk, tlk
from .movie_core import (
    Movie,
    MovieError,
    parse_movie,
    print_movie,
    split_union,
    validate_movie,
)
from .trace import extract_double_curves, extract_triple_points, pushoff_framing, sheet_normal

__all__ = [
    "BordismClass",
    "GeneratorSpec",
    "NormalForm",
    "G_decompose",
    "add",
    "canonicalize_triples",
    "negate",
    "build_S_ij",
    "build_S_ijk",
    "catalog_entries",
    "realize",
    "trivial_link",
    "InvariantReport",
    "check_relations",
    "compute_H",
    "dlk",
    "tlk",
    "Movie",
    "MovieError",
    "parse_movie",
    "print_movie",
    "split_union",
    "validate_movie",
    "extract_double_curves",
    "extract_triple_points",
    "pushoff_framing",
    "sheet_normal",
]
