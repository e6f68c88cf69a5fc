import random
from itertools import permutations

import pytest

from slb.bordism import (
    BordismClass,
    G_decompose,
    GeneratorSpec,
    NormalForm,
    add,
    basis_e,
    basis_f,
    negate,
    random_class,
)
from slb.catalog import (
    CatalogError,
    build_S_ij,
    build_S_ijk,
    catalog_entries,
    expected_tlk_table,
    realize,
    trivial_link,
)
from slb.invariants import check_relations, compute_H
from slb.movie_core import split_union, validate_movie


def test_trivial_link_is_zero():
    for n in (1, 3):
        m = trivial_link(n)
        assert validate_movie(m).ok
        assert compute_H(m).is_zero()
    assert compute_H(split_union(trivial_link(2), trivial_link(2))).is_zero()


def test_trivial_link_rejects_bad_n():
    with pytest.raises(CatalogError):
        trivial_link(0)


def test_build_S_ij_values():
    h = compute_H(build_S_ij(2, 1, 2))
    assert h == basis_f(2, 1, 2)
    h = compute_H(build_S_ij(3, 1, 3))
    assert h.doubles() == {(1, 2): 0, (1, 3): 1, (2, 3): 0}
    assert all(v == (0, 0) for v in h.triples().values())


def test_build_S_ij_rejects_bad_indices():
    with pytest.raises(CatalogError):
        build_S_ij(2, 2, 1)
    with pytest.raises(CatalogError):
        build_S_ij(2, 1, 3)


def test_build_S_ijk_full_table():
    m = build_S_ijk(3, 1, 2, 3)
    r = check_relations(m)
    assert r.tlk_map() == {
        **{t: 0 for t in permutations((1, 2, 3), 3)},
        **expected_tlk_table(1, 2, 3),
    }
    assert all(v == 0 for v in r.dlk_map().values())


def test_build_S_ijk_rejects_bad_indices():
    with pytest.raises(CatalogError):
        build_S_ijk(3, 1, 2, 2)
    with pytest.raises(CatalogError):
        build_S_ijk(3, 1, 2, 4)
    with pytest.raises(CatalogError):
        build_S_ijk(3, 1, 2, 3, bead_sign=0)


def test_bead_reversal_negates():
    for i, j, k in permutations((1, 2, 3), 3):
        hp = compute_H(build_S_ijk(3, i, j, k, 1))
        hm = compute_H(build_S_ijk(3, i, j, k, -1))
        assert hm == negate(hp)


def test_order_two():
    m = build_S_ij(2, 1, 2)
    assert compute_H(split_union(m, m)).is_zero()


def test_catalog_entries_reproduce_expectations():
    for e in catalog_entries(3):
        assert validate_movie(e.movie).ok
        assert check_relations(e.movie) == e.expected_invariants, e.spec


def test_index_equivariance():
    """Relabeling components permutes the invariants accordingly."""
    base = check_relations(build_S_ijk(4, 1, 2, 3)).tlk_map()
    for perm in [(2, 3, 4), (4, 1, 3), (3, 4, 1)]:
        i, j, k = perm
        got = check_relations(build_S_ijk(4, i, j, k)).tlk_map()
        want = {t: 0 for t in got}
        want.update(expected_tlk_table(i, j, k))
        assert got == want
    assert compute_H(build_S_ij(4, 2, 4)).doubles()[(2, 4)] == 1


def test_standard_vs_twisted_dichotomy():
    """The torus pair inside the beaded generator has Dlk 0; the twisted
    generator has Dlk 1."""
    assert compute_H(build_S_ijk(3, 1, 2, 3)).doubles()[(1, 2)] == 0
    assert compute_H(build_S_ij(2, 1, 2)).doubles()[(1, 2)] == 1


def test_realize_empty_is_trivial():
    nf = NormalForm(n=3, generators=())
    assert compute_H(realize(nf)).is_zero()


def test_realize_singletons():
    nf = NormalForm(n=2, generators=(GeneratorSpec("S_ij", (1, 2), 1),))
    assert compute_H(realize(nf)) == basis_f(2, 1, 2)
    nf = NormalForm(
        n=3,
        generators=(
            GeneratorSpec("S_ijk", (1, 2, 3), 1),
            GeneratorSpec("S_ij", (1, 2), 1),
        ),
    )
    assert compute_H(realize(nf)) == add(basis_e(3, 1, 2, 3), basis_f(3, 1, 2))


def test_round_trip_small():
    rng = random.Random(13)
    for _ in range(10):
        n = rng.randint(2, 4)
        a = random_class(rng, n, triple_bound=2)
        assert compute_H(realize(G_decompose(a))) == a


def test_realized_movies_are_valid():
    rng = random.Random(17)
    a = random_class(rng, 3, triple_bound=1)
    m = realize(G_decompose(a))
    assert validate_movie(m).ok
