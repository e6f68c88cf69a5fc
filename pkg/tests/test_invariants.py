import random

import pytest

from slb.bordism import BordismClass, RelationViolation, add, basis_f, negate
from slb.catalog import build_S_ij, build_S_ijk, catalog_entries, trivial_link
from slb.invariants import IndexError_, check_relations, compute_H, dlk, tlk
from slb.movie_core import reverse_orientations, split_union
from helpers import random_generator_movie


def test_dlk_examples():
    assert dlk(build_S_ij(2, 1, 2), 1, 2) == 1
    assert dlk(build_S_ijk(3, 1, 2, 3), 1, 2) == 0  # standard pair
    assert dlk(trivial_link(2), 1, 2) == 0


def test_dlk_rejects_equal_indices():
    with pytest.raises(IndexError_):
        dlk(trivial_link(2), 1, 1)


def test_tlk_table_of_beaded_generator():
    m = build_S_ijk(3, 1, 2, 3)
    assert tlk(m, 1, 2, 3) == 1
    assert tlk(m, 2, 3, 1) == 0
    assert tlk(m, 3, 1, 2) == -1
    assert tlk(m, 3, 2, 1) == -1
    assert tlk(m, 1, 3, 2) == 0
    assert tlk(m, 2, 1, 3) == 1


def test_tlk_rejects_repeated_index():
    with pytest.raises(IndexError_):
        tlk(build_S_ijk(3, 1, 2, 3), 1, 1, 2)


def test_tlk_zero_without_r3():
    m = build_S_ij(3, 1, 2)
    for i, j, k in [(1, 2, 3), (2, 3, 1), (3, 1, 2)]:
        assert tlk(m, i, j, k) == 0


def test_compute_H_twisted_pair():
    h = compute_H(build_S_ij(2, 1, 2))
    assert h == basis_f(2, 1, 2)
    assert h.triple_coords == ()


def test_compute_H_additive():
    rng = random.Random(5)
    for _ in range(8):
        m1 = random_generator_movie(rng, 4)
        m2 = random_generator_movie(rng, 4)
        assert compute_H(split_union(m1, m2)) == add(compute_H(m1), compute_H(m2))


def test_relations_on_catalog():
    for e in catalog_entries(3):
        assert check_relations(e.movie).relations_ok


def test_relations_report_values():
    r = check_relations(build_S_ijk(3, 1, 2, 3))
    t = r.tlk_map()
    assert t[(1, 2, 3)] == 1 and t[(3, 2, 1)] == -1  # antisymmetry instance
    assert t[(1, 2, 3)] + t[(2, 3, 1)] + t[(3, 1, 2)] == 0  # cyclic instance
    assert r.relations_ok


def test_reversing_all_orientations_negates_tlk_fixes_dlk():
    m = build_S_ijk(3, 1, 2, 3)
    r = check_relations(m)
    rr = check_relations(reverse_orientations(m))
    assert rr.dlk == r.dlk
    assert rr.tlk_map() == {t: -v for t, v in r.tlk}
    m = build_S_ij(2, 1, 2)
    assert check_relations(reverse_orientations(m)).dlk_map() == {(1, 2): 1}


def test_report_json_shape():
    r = check_relations(build_S_ij(2, 1, 2))
    import json

    data = json.loads(r.to_json())
    assert data["n"] == 2
    assert data["dlk"] == {"1,2": 1}
    assert data["relations_ok"] is True
