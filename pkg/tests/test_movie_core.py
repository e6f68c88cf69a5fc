import random
from dataclasses import replace
from fractions import Fraction as F

import pytest

from slb.bordism import add
from slb.catalog import build_S_ij, build_S_ijk, trivial_link
from slb.invariants import compute_H
from slb.movie_core import (
    Inconsistent,
    NonGeneric,
    OpenSurface,
    ParseError,
    ValidationFailure,
    make_still,
    parse_movie,
    print_movie,
    split_union,
    validate_movie,
)
from helpers import kink_movie, random_generator_movie


ALL_CATALOG = [
    trivial_link(2),
    build_S_ij(2, 1, 2),
    build_S_ijk(3, 1, 2, 3, 1),
    build_S_ijk(3, 1, 2, 3, -1),
    kink_movie(),
]


@pytest.mark.parametrize("idx", range(len(ALL_CATALOG)))
def test_print_parse_round_trip(idx):
    movie = ALL_CATALOG[idx]
    text = print_movie(movie)
    again = parse_movie(text)
    assert again == movie
    assert print_movie(again) == text


def test_parse_no_stills():
    with pytest.raises(ParseError, match="no stills"):
        parse_movie("n=1\n")


def test_parse_syntax_error_has_line():
    with pytest.raises(ParseError, match="line 3"):
        parse_movie("n=1\nstill t=0\nwhat is this\n")


def test_parse_non_rational_coordinate():
    bad = "n=1\nstill t=0\nstrand K comp=1 pts=(0,0;1,zz;1,1) dir=(1,0)\n"
    with pytest.raises(ParseError):
        parse_movie(bad)


def test_parse_dangling_identifier():
    bad = (
        "n=1\nstill t=0\n"
        "strand K comp=1 pts=(0,0;4,0;4,4;0,4) dir=(1,0)\n"
        "cross c over=K under=MISSING at=(1,1) odir=(1,0) udir=(0,1) ovel=(0,0) uvel=(0,0)\n"
    )
    with pytest.raises(ParseError, match="dangling"):
        parse_movie(bad)


def test_parse_crossing_lifetime_violated():
    # crossing c appears in stills 0 and 2 but not 1
    strand = "strand K comp=1 pts=(0,0;6,0;6,3;2,3;2,1;4,1;4,4;0,4) dir=(1,0)\n"
    cross = "cross c over=K under=K at=(4,3) odir=(0,1) udir=(-1,0) ovel=(0,0) uvel=(0,0)\n"
    plain = "strand K comp=1 pts=(0,0;5,0;5,3;0,3) dir=(1,0)\n"
    text = (
        "n=1\n"
        "still t=0\n" + strand + cross +
        "still t=1\n" + plain +
        "still t=2\n" + strand + cross
    )
    with pytest.raises(ParseError, match="lifetime violated"):
        parse_movie(text)


@pytest.mark.parametrize("idx", range(len(ALL_CATALOG)))
def test_validate_accepts_catalog(idx):
    report = validate_movie(ALL_CATALOG[idx])
    assert report.ok


def _mutate_crossing_position(movie):
    st = movie.stills[len(movie.stills) // 2]
    assert st.crossings
    c = st.crossings[0]
    bad = replace(c, at=(c.at[0] + F(1, 7), c.at[1]))
    news = make_still(st.time, st.strands, (bad,) + st.crossings[1:])
    stills = tuple(news if s.time == st.time else s for s in movie.stills)
    return replace(movie, stills=stills)


def _mutate_swap_over_under(movie):
    st = movie.stills[len(movie.stills) // 2]
    c = st.crossings[0]
    bad = replace(c, over=c.under, under=c.over)
    news = make_still(st.time, st.strands, (bad,) + st.crossings[1:])
    stills = tuple(news if s.time == st.time else s for s in movie.stills)
    return replace(movie, stills=stills)


def _mutate_drop_event(movie):
    return replace(movie, events=movie.events[:-1])


def _mutate_nonempty_last_still(movie):
    first_strand = None
    for st in movie.stills:
        if st.strands:
            first_strand = st.strands[0]
            break
    last = movie.stills[-1]
    news = make_still(last.time, (first_strand,), ())
    return replace(movie, stills=movie.stills[:-1] + (news,))


def _mutate_r3_heights(movie):
    events = []
    for ev in movie.events:
        if ev.kind == "R3":
            ev = replace(ev, top=ev.bot, bot=ev.top)
        events.append(ev)
    return replace(movie, events=tuple(events))


def _mutate_r3_parallel(movie):
    events = []
    for ev in movie.events:
        if ev.kind == "R3":
            ev = replace(
                ev,
                top=replace(ev.top, dir=ev.mid.dir, vel=ev.mid.vel),
                bot=replace(ev.bot, dir=ev.mid.dir, vel=ev.mid.vel),
            )
        events.append(ev)
    return replace(movie, events=tuple(events))


def _mutate_component_label(movie):
    for idx, st in enumerate(movie.stills):
        if st.strands:
            s = st.strands[0]
            bad = replace(s, component=(s.component % movie.n) + 1)
            news = make_still(st.time, (bad,) + st.strands[1:], st.crossings)
            stills = movie.stills[:idx] + (news,) + movie.stills[idx + 1 :]
            return replace(movie, stills=stills)
    raise AssertionError("no strand to mutate")


def _mutate_event_time_collision(movie):
    evs = list(movie.events)
    evs[1] = replace(evs[1], time=evs[0].time)
    return replace(movie, events=tuple(evs))


MUTATIONS = [
    _mutate_crossing_position,
    _mutate_swap_over_under,
    _mutate_drop_event,
    _mutate_nonempty_last_still,
    _mutate_r3_heights,
    _mutate_r3_parallel,
    _mutate_component_label,
    _mutate_event_time_collision,
]


@pytest.mark.parametrize("mutate", MUTATIONS)
def test_validator_rejects_mutations(mutate):
    movie = build_S_ijk(3, 1, 2, 3)
    bad = mutate(movie)
    with pytest.raises((Inconsistent, NonGeneric, OpenSurface, ValidationFailure)):
        validate_movie(bad)


def test_split_union_component_mismatch():
    with pytest.raises(ValidationFailure, match="mismatch"):
        split_union(trivial_link(2), trivial_link(3))


def test_split_union_trivial_identity():
    m = build_S_ij(2, 1, 2)
    u = split_union(trivial_link(2), m)
    assert compute_H(u) == compute_H(m)


def test_split_union_is_valid_movie():
    u = split_union(build_S_ij(2, 1, 2), trivial_link(2))
    assert validate_movie(u).ok


def test_split_union_additive_and_associative():
    rng = random.Random(11)
    for _ in range(6):
        a = random_generator_movie(rng, 4)
        b = random_generator_movie(rng, 4)
        c = random_generator_movie(rng, 4)
        left = split_union(split_union(a, b), c)
        right = split_union(a, split_union(b, c))
        ha = add(add(compute_H(a), compute_H(b)), compute_H(c))
        assert compute_H(left) == ha == compute_H(right)
        # same combinatorics up to identifier relabeling
        assert [e.kind for e in left.events] == [e.kind for e in right.events]
        assert len(left.stills) == len(right.stills)
