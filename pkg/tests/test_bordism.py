import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from slb.bordism import (
    BordismClass,
    G_decompose,
    GeneratorSpec,
    NormalForm,
    RelationViolation,
    SizeMismatch,
    add,
    basis_e,
    basis_e_prime,
    basis_f,
    canonicalize_triples,
    negate,
    random_class,
    rank_shape,
)


def test_group_identities():
    rng = random.Random(2)
    z = BordismClass.zero(4)
    for _ in range(10):
        a = random_class(rng, 4)
        assert add(a, z) == a
        assert add(a, negate(a)).is_zero()
    f = basis_f(2, 1, 2)
    assert add(f, f).is_zero()  # order two
    e = basis_e(3, 1, 2, 3)
    assert add(e, negate(e)).is_zero()
    assert negate(z) == z
    assert negate(f) == f
    assert negate(e).triples()[(1, 2, 3)] == (-1, 0)


def test_add_rejects_mismatched_rank():
    with pytest.raises(SizeMismatch):
        add(BordismClass.zero(3), BordismClass.zero(4))


def test_rank_shape_counts_basis():
    for n in range(1, 7):
        free, torsion = rank_shape(n)
        triples = len(list(combinations(range(1, n + 1), 3)))
        pairs = len(list(combinations(range(1, n + 1), 2)))
        assert free == 2 * triples  # e and e' per unordered triple
        assert torsion == pairs
        assert free == n * (n - 1) * (n - 2) // 3
        assert torsion == n * (n - 1) // 2


def _raw_from_pair(n, value_of):
    """Build a full ordered-triple table from values on i<j<k pairs obeying
    the antisymmetry and cyclic identities."""
    raw = {}
    for i, j, k in combinations(range(1, n + 1), 3):
        a, b = value_of((i, j, k))
        c = -a - b
        raw[(i, j, k)] = a
        raw[(j, k, i)] = b
        raw[(k, i, j)] = c
        raw[(k, j, i)] = -a
        raw[(i, k, j)] = -b
        raw[(j, i, k)] = -c
    return raw


def test_canonicalize_forced_value():
    # raw(1,2,3)=2, raw(2,3,1)=-5 forces raw(3,1,2)=3
    raw = _raw_from_pair(3, lambda t: (2, -5))
    assert raw[(3, 1, 2)] == 3
    coords = canonicalize_triples(raw, 3)
    assert coords[(1, 2, 3)] == (2, -5)
    raw[(3, 1, 2)] = 4  # break the cyclic identity
    raw[(2, 1, 3)] = -4
    with pytest.raises(RelationViolation):
        canonicalize_triples(raw, 3)


def test_canonicalize_all_zero():
    raw = {t: 0 for t in permutations(range(1, 5), 3)}
    coords = canonicalize_triples(raw, 4)
    assert all(v == (0, 0) for v in coords.values())


def test_canonicalize_detects_antisymmetry_break():
    raw = _raw_from_pair(3, lambda t: (1, 0))
    raw[(3, 2, 1)] = 5
    with pytest.raises(RelationViolation, match="antisymmetry"):
        canonicalize_triples(raw, 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5), st.integers(0, 2**30), st.integers(-4, 4), st.integers(-4, 4))
def test_canonicalize_accepts_consistent_tables(n, seed, a0, b0):
    rng = random.Random(seed)
    vals = {}
    raw = _raw_from_pair(
        n, lambda t: vals.setdefault(t, (rng.randint(-4, 4), rng.randint(-4, 4)))
    )
    coords = canonicalize_triples(raw, n)
    for t, (e, ep) in coords.items():
        assert raw[t] == e


def test_G_decompose_basis_images():
    nf = G_decompose(basis_e(3, 1, 2, 3))
    assert nf.generators == (GeneratorSpec("S_ijk", (1, 2, 3), 1),)
    nf = G_decompose(basis_e_prime(3, 1, 2, 3))
    assert nf.generators == (GeneratorSpec("S_minus_ijk", (1, 3, 2), 1),)
    nf = G_decompose(basis_f(3, 1, 3))
    assert nf.generators == (GeneratorSpec("S_ij", (1, 3), 1),)
    assert G_decompose(BordismClass.zero(4)).generators == ()


def test_G_decompose_negative_multiples():
    a = BordismClass.from_dicts(3, {(1, 2, 3): (-2, -1)})
    kinds = sorted(g.pretty() for g in G_decompose(a).generators)
    assert kinds == ["S(1,3,2) x 1", "S-(1,2,3) x 2"]


def test_normal_form_reduced():
    rng = random.Random(9)
    for _ in range(20):
        a = random_class(rng, 5)
        nf = G_decompose(a)
        seen = set()
        for g in nf.generators:
            key = (g.kind, g.indices)
            assert key not in seen
            seen.add(key)
            if g.kind == "S_ij":
                assert g.multiplicity == 1
            # no simultaneous plus and minus on the same indices
            other = "S_minus_ijk" if g.kind == "S_ijk" else "S_ijk"
            assert (other, g.indices) not in seen


def test_class_json_round_trip():
    rng = random.Random(4)
    for _ in range(10):
        a = random_class(rng, 4)
        assert BordismClass.from_json(a.to_json()) == a


def test_generator_spec_validation():
    with pytest.raises(ValueError):
        GeneratorSpec("S_ij", (1, 1), 1)
    with pytest.raises(ValueError):
        GeneratorSpec("S_ijk", (1, 2), 1)
    with pytest.raises(ValueError):
        GeneratorSpec("S_ij", (1, 2), 0)
    with pytest.raises(ValueError):
        GeneratorSpec("bogus", (1, 2), 1)
