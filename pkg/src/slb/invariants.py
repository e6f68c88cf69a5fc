"""Double and triple linking numbers of a movie, and the bordism invariant H.

Dlk(i, j) is the mod-2 linking number of the type-(i, j) double curves
with their diagonal push-off; cross-circle linking terms contribute twice,
so it reduces to the sum of per-circle push-off framings mod 2.

Tlk(i, j, k) is the signed count of triple points whose (top, middle,
bottom) sheets come from components (i, j, k).

H packages Tlk(i,j,k), Tlk(j,k,i) for i<j<k and Dlk(i,j) for i<j into a
class in Z^{n(n-1)(n-2)/3} + Z2^{n(n-1)/2}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, permutations

from .bordism import BordismClass, RelationViolation, canonicalize_triples
from .movie_core import MovieError
from .trace import extract_double_curves, extract_triple_points, pushoff_framing


class IndexError_(MovieError):
    pass


@dataclass(frozen=True)
class InvariantReport:
    n: int
    dlk: tuple  # ((i, j), bit) for i < j
    tlk: tuple  # ((i, j, k), value) for all ordered distinct triples
    relations_ok: bool
    violations: tuple = ()

    def dlk_map(self):
        return dict(self.dlk)

    def tlk_map(self):
        return dict(self.tlk)

    def to_json(self):
        return json.dumps(
            {
                "n": self.n,
                "dlk": {f"{i},{j}": v for (i, j), v in self.dlk},
                "tlk": {f"{i},{j},{k}": v for (i, j, k), v in self.tlk},
                "relations_ok": self.relations_ok,
                "violations": list(self.violations),
            },
            sort_keys=True,
        )


def _framings_by_type(movie):
    table = {}
    for curve in extract_double_curves(movie):
        i, j = curve.curve_type
        if i == j or not curve.closed:
            continue
        table.setdefault((i, j), 0)
        table[(i, j)] += pushoff_framing(curve)
    return table


def _tlk_table(movie):
    table = {}
    for tp in extract_triple_points(movie):
        table.setdefault(tp.triple_type, 0)
        table[tp.triple_type] += tp.sign
    return table


def dlk(movie, i, j):
    """Mod-2 push-off linking of the type-(i, j) double curves."""
    if i == j:
        raise IndexError_("dlk needs two distinct components")
    if not (1 <= i <= movie.n and 1 <= j <= movie.n):
        raise IndexError_("component index out of range")
    return _framings_by_type(movie).get((i, j), 0) % 2


def tlk(movie, i, j, k):
    """Signed count of type-(i, j, k) triple points."""
    if len({i, j, k}) != 3:
        raise IndexError_("tlk needs three distinct components")
    for x in (i, j, k):
        if not (1 <= x <= movie.n):
            raise IndexError_("component index out of range")
    return _tlk_table(movie).get((i, j, k), 0)


def _full_tables(movie):
    n = movie.n
    fr = _framings_by_type(movie)
    tl = _tlk_table(movie)
    dlk_all = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                dlk_all[(i, j)] = fr.get((i, j), 0) % 2
    tlk_all = {}
    for trip in permutations(range(1, n + 1), 3):
        tlk_all[trip] = tl.get(trip, 0)
    return dlk_all, tlk_all


def _relation_violations(n, dlk_all, tlk_all):
    bad = []
    for i, j in combinations(range(1, n + 1), 2):
        if dlk_all[(i, j)] != dlk_all[(j, i)]:
            bad.append(f"dlk({i},{j}) != dlk({j},{i})")
    for i, j, k in permutations(range(1, n + 1), 3):
        if tlk_all[(i, j, k)] != -tlk_all[(k, j, i)]:
            bad.append(f"tlk({i},{j},{k}) != -tlk({k},{j},{i})")
    for i, j, k in combinations(range(1, n + 1), 3):
        s = tlk_all[(i, j, k)] + tlk_all[(j, k, i)] + tlk_all[(k, i, j)]
        if s != 0:
            bad.append(f"cyclic sum for ({i},{j},{k}) is {s}")
    return bad


def check_relations(movie):
    """Evaluate the symmetry, antisymmetry and cyclic-sum identities."""
    dlk_all, tlk_all = _full_tables(movie)
    bad = _relation_violations(movie.n, dlk_all, tlk_all)
    n = movie.n
    return InvariantReport(
        n=n,
        dlk=tuple(sorted(((i, j), dlk_all[(i, j)]) for i, j in combinations(range(1, n + 1), 2))),
        tlk=tuple(sorted(tlk_all.items())),
        relations_ok=not bad,
        violations=tuple(bad),
    )


def compute_H(movie):
    """The full bordism invariant of a validated movie.

    A relation violation is an error (the identities hold for every
    surface-link, so a violation means bad input or a bug upstream).
    """
    dlk_all, tlk_all = _full_tables(movie)
    bad = _relation_violations(movie.n, dlk_all, tlk_all)
    if bad:
        raise RelationViolation("; ".join(bad))
    n = movie.n
    triples = canonicalize_triples(tlk_all, n)
    doubles = {(i, j): dlk_all[(i, j)] for i, j in combinations(range(1, n + 1), 2)}
    return BordismClass.from_dicts(n, triples, doubles)
