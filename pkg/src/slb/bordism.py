"""The bordism group of n-component surface-links and its normal forms.

The group is A = Z^{n(n-1)(n-2)/3} + Z2^{n(n-1)/2} with basis
{e_ijk, e'_ijk | i<j<k} and {f_ij | i<j}: e_ijk is the unit in the
Tlk(i,j,k) slot, e'_ijk in the Tlk(j,k,i) slot, f_ij in the Dlk(i,j)
slot.  G maps e_ijk to a Hopf 2-link with a bead [S_(i,j,k)], e'_ijk to
-[S_(i,k,j)], and f_ij to a twisted Hopf 2-link [S_(i,j)]; negative
multiples are realized by reversing the bead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .movie_core import MovieError


class RelationViolation(MovieError):
    pass


class SizeMismatch(MovieError):
    pass


@dataclass(frozen=True)
class BordismClass:
    n: int
    triple_coords: tuple  # ((i,j,k), (e, e_prime)) sorted, i<j<k
    double_coords: tuple  # ((i,j), bit) sorted, i<j

    @staticmethod
    def from_dicts(n, triples=None, doubles=None):
        triples = triples or {}
        doubles = doubles or {}
        tc = []
        for i, j, k in combinations(range(1, n + 1), 3):
            e, ep = triples.get((i, j, k), (0, 0))
            tc.append(((i, j, k), (int(e), int(ep))))
        dc = []
        for i, j in combinations(range(1, n + 1), 2):
            dc.append(((i, j), int(doubles.get((i, j), 0)) % 2))
        return BordismClass(n=n, triple_coords=tuple(tc), double_coords=tuple(dc))

    @staticmethod
    def zero(n):
        return BordismClass.from_dicts(n)

    def triples(self):
        return dict(self.triple_coords)

    def doubles(self):
        return dict(self.double_coords)

    def is_zero(self):
        return all(v == (0, 0) for _, v in self.triple_coords) and all(
            b == 0 for _, b in self.double_coords
        )

    def to_json(self):
        return json.dumps(
            {
                "n": self.n,
                "e": {f"{i},{j},{k}": v[0] for (i, j, k), v in self.triple_coords},
                "e_prime": {f"{i},{j},{k}": v[1] for (i, j, k), v in self.triple_coords},
                "f": {f"{i},{j}": b for (i, j), b in self.double_coords},
            },
            sort_keys=True,
        )

    @staticmethod
    def from_json(text):
        data = json.loads(text)
        n = int(data["n"])
        triples = {}
        for key, val in data.get("e", {}).items():
            i, j, k = (int(x) for x in key.split(","))
            triples[(i, j, k)] = (int(val), triples.get((i, j, k), (0, 0))[1])
        for key, val in data.get("e_prime", {}).items():
            i, j, k = (int(x) for x in key.split(","))
            e, _ = triples.get((i, j, k), (0, 0))
            triples[(i, j, k)] = (e, int(val))
        doubles = {}
        for key, val in data.get("f", {}).items():
            i, j = (int(x) for x in key.split(","))
            doubles[(i, j)] = int(val)
        return BordismClass.from_dicts(n, triples, doubles)


def basis_e(n, i, j, k):
    return BordismClass.from_dicts(n, {(i, j, k): (1, 0)})


def basis_e_prime(n, i, j, k):
    return BordismClass.from_dicts(n, {(i, j, k): (0, 1)})


def basis_f(n, i, j):
    return BordismClass.from_dicts(n, {}, {(i, j): 1})


def add(a, b):
    """Coordinatewise sum; the split union realizes it geometrically."""
    if a.n != b.n:
        raise SizeMismatch(f"rank mismatch: n={a.n} vs n={b.n}")
    ta, tb = a.triples(), b.triples()
    da, db = a.doubles(), b.doubles()
    triples = {
        key: (ta[key][0] + tb[key][0], ta[key][1] + tb[key][1]) for key in ta
    }
    doubles = {key: (da[key] + db[key]) % 2 for key in da}
    return BordismClass.from_dicts(a.n, triples, doubles)


def negate(a):
    """Mirror class: integer coordinates negate, Z2 coordinates are fixed."""
    triples = {key: (-e, -ep) for key, (e, ep) in a.triples().items()}
    return BordismClass.from_dicts(a.n, triples, a.doubles())


def rank_shape(n):
    """(free rank, number of order-two summands)."""
    return (n * (n - 1) * (n - 2) // 3, n * (n - 1) // 2)


def canonicalize_triples(raw, n):
    """Check the antisymmetry and cyclic identities on a full table of
    ordered-triple values and project to the (e, e') coordinates.

    raw maps every ordered triple of distinct indices in 1..n to an int.
    """
    for i, j, k in combinations(range(1, n + 1), 3):
        orderings = [(i, j, k), (j, k, i), (k, i, j), (k, j, i), (j, i, k), (i, k, j)]
        for t in orderings:
            if t not in raw:
                raise RelationViolation(f"missing ordered triple {t}")
        for a, b, c in orderings[:3]:
            if raw[(a, b, c)] != -raw[(c, b, a)]:
                raise RelationViolation(
                    f"antisymmetry fails on ({a},{b},{c}): "
                    f"{raw[(a, b, c)]} vs -{raw[(c, b, a)]}"
                )
        s = raw[(i, j, k)] + raw[(j, k, i)] + raw[(k, i, j)]
        if s != 0:
            raise RelationViolation(f"cyclic sum on ({i},{j},{k}) is {s}, not 0")
    return {
        (i, j, k): (raw[(i, j, k)], raw[(j, k, i)])
        for i, j, k in combinations(range(1, n + 1), 3)
    }


# ---------------------------------------------------------------------------
# normal forms


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str  # "S_ij" | "S_ijk" | "S_minus_ijk"
    indices: tuple
    multiplicity: int

    def __post_init__(self):
        if self.kind not in ("S_ij", "S_ijk", "S_minus_ijk"):
            raise ValueError(f"unknown generator kind {self.kind}")
        want = 2 if self.kind == "S_ij" else 3
        if len(self.indices) != want or len(set(self.indices)) != want:
            raise ValueError(f"bad indices {self.indices} for {self.kind}")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")

    def pretty(self):
        idx = ",".join(str(i) for i in self.indices)
        name = {"S_ij": "S", "S_ijk": "S", "S_minus_ijk": "S-"}[self.kind]
        return f"{name}({idx}) x {self.multiplicity}"


@dataclass(frozen=True)
class NormalForm:
    n: int
    generators: tuple

    def pretty(self):
        if not self.generators:
            return "(trivial link)"
        return "\n".join(g.pretty() for g in self.generators)


def G_decompose(a):
    """Normal form of a class: one catalog generator family per basis slot.

    e_ijk > 0 gives copies of S_(i,j,k); e_ijk < 0 bead-reversed copies;
    e'_ijk > 0 gives bead-reversed S_(i,k,j); e'_ijk < 0 plain S_(i,k,j);
    f_ij = 1 gives one twisted Hopf 2-link S_(i,j).
    """
    gens = []
    for (i, j, k), (e, ep) in a.triple_coords:
        if e > 0:
            gens.append(GeneratorSpec("S_ijk", (i, j, k), e))
        elif e < 0:
            gens.append(GeneratorSpec("S_minus_ijk", (i, j, k), -e))
        if ep > 0:
            gens.append(GeneratorSpec("S_minus_ijk", (i, k, j), ep))
        elif ep < 0:
            gens.append(GeneratorSpec("S_ijk", (i, k, j), -ep))
    for (i, j), bit in a.double_coords:
        if bit:
            gens.append(GeneratorSpec("S_ij", (i, j), 1))
    return NormalForm(n=a.n, generators=tuple(gens))


def random_class(rng, n, triple_bound=3):
    """Uniform class with triple coordinates in [-bound, bound]."""
    triples = {}
    for i, j, k in combinations(range(1, n + 1), 3):
        triples[(i, j, k)] = (
            rng.randint(-triple_bound, triple_bound),
            rng.randint(-triple_bound, triple_bound),
        )
    doubles = {}
    for i, j in combinations(range(1, n + 1), 2):
        doubles[(i, j)] = rng.randint(0, 1)
    return BordismClass.from_dicts(n, triples, doubles)
