"""Shared fixtures: a kinked-sphere movie, random catalog picks, transforms."""

from fractions import Fraction as F

from slb.catalog import _Poly, _assemble, _ln, build_S_ij, build_S_ijk
from slb.movie_core import Crossing, Movie, SheetRecord, Strand, make_still
from dataclasses import replace


def kink_movie():
    """One unknotted sphere that grows a kink and absorbs it again:
    an R1Plus/R1Minus pair whose trace is one open (1,1) double curve."""
    rect = (
        _ln("l0", (0, 0), (1, 0)),
        _ln("l1", (5, 0), (0, 1)),
        _ln("l2", (0, 3), (-1, 0)),
        _ln("l3", (0, 0), (0, -1)),
    )
    kinked = (
        _ln("l0", (0, 0), (1, 0)),
        _ln("l1", (5, 0), (0, 1)),
        _ln("l2", (0, 3), (-1, 0)),
        _ln("l3", (2, 0), (0, -1)),
        _ln("l4", (0, 1), (1, 0)),
        _ln("l5", (4, 0), (0, 1)),
        _ln("l6", (0, 4), (-1, 0)),
        _ln("l7", (0, 0), (0, -1)),
    )
    ck = [("ck", ("K", "l5"), ("K", "l2"))]
    kfs = [
        (F(0), {}, []),
        (F(1), {"K": _Poly(1, rect)}, []),
        (F(2), {"K": _Poly(1, kinked)}, ck),
        (F(3), {"K": _Poly(1, rect)}, []),
        (F(4), {}, []),
    ]
    evs = [
        dict(kind="Birth", time=F(1, 2), strand="K"),
        dict(kind="R1Plus", time=F(3, 2), cross=("ck",), at=(4, 3)),
        dict(kind="R1Minus", time=F(5, 2), cross=("ck",), at=(4, 3)),
        dict(kind="Death", time=F(7, 2), strand="K"),
    ]
    return _assemble(1, kfs, evs, set())


def random_generator_movie(rng, n):
    """Uniform pick from the generator family on n components."""
    kind = rng.choice(["S_ij", "S_ijk", "S_minus_ijk"])
    if kind == "S_ij" or n < 3:
        i, j = sorted(rng.sample(range(1, n + 1), 2))
        return build_S_ij(n, i, j)
    i, j, k = rng.sample(range(1, n + 1), 3)
    return build_S_ijk(n, i, j, k, bead_sign=1 if kind == "S_ijk" else -1)


def scale_movie(movie, factor):
    """Uniform rational rescaling of all planar coordinates."""
    f = F(factor)
    sc = lambda p: (f * p[0], f * p[1])
    stills = []
    for st in movie.stills:
        strands = [
            Strand(id=s.id, component=s.component, dir=sc(s.dir),
                   vertices=tuple(sc(p) for p in s.vertices))
            for s in st.strands
        ]
        crossings = [
            Crossing(id=c.id, over=c.over, under=c.under, at=sc(c.at),
                     odir=sc(c.odir), udir=sc(c.udir), ovel=sc(c.ovel), uvel=sc(c.uvel))
            for c in st.crossings
        ]
        stills.append(make_still(st.time, strands, crossings))
    events = []
    for ev in movie.events:
        kw = {}
        if ev.at is not None:
            kw["at"] = sc(ev.at)
        for slot in ("top", "mid", "bot"):
            sh = getattr(ev, slot)
            if sh is not None:
                kw[slot] = SheetRecord(component=sh.component, dir=sc(sh.dir), vel=sc(sh.vel))
        events.append(replace(ev, **kw) if kw else ev)
    return Movie(n=movie.n, stills=tuple(stills), events=tuple(events),
                 component_orientations=movie.component_orientations)
