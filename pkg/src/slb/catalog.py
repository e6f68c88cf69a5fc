"""Parametric movie builders for the generator family.

The builders emit validated movies for:

* the trivial n-component link (one birth/death sphere per component);
* the twisted Hopf 2-link S_(i,j) on components i, j;
* the standard Hopf 2-link with a meridian bead, S_(i,j,k) and its
  bead-reversed mate.

All three share a core presentation of a pair of nested hexagonal
"tori" A (component i) and B (component j):

    birth B, grow to a long band; birth A inside the band; A pokes
    through B's two long strands (two R2 moves) producing the four
    crossings q1,q2 (B over A) and p1,p2 (A over B); A widens so the
    clasps separate; saddles split both into a left pair and a right
    pair.  The teardown runs the same script backwards.

The twisted generator rotates the right-hand pair rigidly through 360
degrees (four 90-degree keyframes), which gives both double curves one
full unit of push-off framing.  The beaded generator instead sweeps a
tall thin rectangle S (component k, oriented so its right edge is the
over sheet) across the right-hand clasp; the sweep performs exactly
four R3 moves, one for each triple-point type carrying a nonzero count.

Geometry is organized around boundary *lines*: each polygon keyframe is
an ordered list of directed lines, vertices are consecutive-line
intersections, and every crossing is the intersection of two named
lines.  Lines only translate (or pivot about a crossing) between
keyframes, so all crossing motion is exactly linear.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F

from .bordism import GeneratorSpec
from .movie_core import (
    Event,
    Movie,
    MovieError,
    SheetRecord,
    Strand,
    Crossing,
    cross2,
    dot2,
    make_still,
    split_union_many,
    validate_movie,
    vsub,
)


class CatalogError(MovieError):
    pass


# ---------------------------------------------------------------------------
# line-based polygon keyframes


def _line_meet(l1, l2):
    (_, p1, d1), (_, p2, d2) = l1, l2
    den = cross2(d1, d2)
    if den == 0:
        raise CatalogError(f"parallel boundary lines {l1[0]}/{l2[0]}")
    t = cross2(vsub(p2, p1), d2) / den
    return (p1[0] + t * d1[0], p1[1] + t * d1[1])


def _poly_from_lines(lines):
    m = len(lines)
    verts = []
    for k in range(m):
        verts.append(_line_meet(lines[k - 1], lines[k]))
    for k in range(m):
        edge = vsub(verts[(k + 1) % m], verts[k])
        d = lines[k][2]
        if cross2(edge, d) != 0 or dot2(edge, d) <= 0:
            raise CatalogError(f"line {lines[k][0]} disagrees with traversal")
    return tuple(verts)


def _ln(name, anchor, direction):
    return (name, (F(anchor[0]), F(anchor[1])), (F(direction[0]), F(direction[1])))


@dataclass
class _Poly:
    comp: int
    lines: tuple

    def line(self, name):
        for l in self.lines:
            if l[0] == name:
                return l
        raise CatalogError(f"no boundary line {name}")


def _assemble(n, keyframes, events, converging, orientations=None):
    """Build a Movie from keyframe tables.

    keyframes: [(time, {sid: _Poly}, [(cid, (osid, oline), (usid, uline))])]
    events:    [dict] with kind/time plus kind-specific fields
    converging: crossing-id pairs whose death event absorbs them at a point
    """
    # pass 1: geometry
    frames = []
    for time, polys, crosses in keyframes:
        verts = {sid: _poly_from_lines(p.lines) for sid, p in polys.items()}
        cpos = {}
        cdir = {}
        for cid, (osid, oline), (usid, uline) in crosses:
            lo = polys[osid].line(oline)
            lu = polys[usid].line(uline)
            cpos[cid] = _line_meet(lo, lu)
            cdir[cid] = (lo[2], lu[2])
        frames.append((F(time), polys, verts, crosses, cpos, cdir))

    kill_event = {}
    for ev in events:
        if ev["kind"] in ("R2Minus", "R1Minus"):
            for cid in ev["cross"]:
                kill_event[cid] = ev

    stills = []
    for m, (time, polys, verts, crosses, cpos, cdir) in enumerate(frames):
        strands = [
            Strand(id=sid, component=p.comp, dir=p.lines[0][2], vertices=verts[sid])
            for sid, p in polys.items()
        ]
        crossings = []
        for cid, (osid, oline), (usid, uline) in crosses:
            pos = cpos[cid]
            vel = (F(0), F(0))
            nxt = frames[m + 1] if m + 1 < len(frames) else None
            if nxt is not None and cid in nxt[4]:
                dt = nxt[0] - time
                vel = ((nxt[4][cid][0] - pos[0]) / dt, (nxt[4][cid][1] - pos[1]) / dt)
            elif cid in kill_event:
                ev = kill_event[cid]
                if time < ev["time"] and (nxt is None or ev["time"] < nxt[0]):
                    if tuple(sorted(ev["cross"])) in converging:
                        dt = F(ev["time"]) - time
                        at = ev["at"]
                        vel = ((F(at[0]) - pos[0]) / dt, (F(at[1]) - pos[1]) / dt)
            crossings.append(
                Crossing(
                    id=cid,
                    over=osid,
                    under=usid,
                    at=pos,
                    odir=cdir[cid][0],
                    udir=cdir[cid][1],
                    ovel=vel,
                    uvel=vel,
                )
            )
        stills.append(make_still(time, strands, crossings))

    ev_objs = []
    for ev in sorted(events, key=lambda e: e["time"]):
        t = F(ev["time"])
        prev = None
        for fr in frames:
            if fr[0] < t:
                prev = fr
        kind = ev["kind"]
        kw = dict(kind=kind, time=t)
        if kind in ("Birth", "Death"):
            kw["strands"] = (ev["strand"],)
        elif kind in ("SaddleSplit", "SaddleMerge"):
            kw["strands"] = tuple(ev["before"])
            kw["strands_after"] = tuple(ev["after"])
        if "cross" in ev:
            kw["crossings"] = tuple(ev["cross"])
        if "at" in ev:
            kw["at"] = (F(ev["at"][0]), F(ev["at"][1]))
        if kind == "R3":
            polys = prev[1]
            recs = {}
            for slot in ("top", "mid", "bot"):
                sid, lname, vel = ev[slot]
                line = polys[sid].line(lname)
                recs[slot] = SheetRecord(
                    component=polys[sid].comp,
                    dir=line[2],
                    vel=(F(vel[0]), F(vel[1])),
                )
            kw.update(top=recs["top"], mid=recs["mid"], bot=recs["bot"], moving=ev["moving"])
        ev_objs.append(Event(**kw))

    if orientations is None:
        orientations = (1,) * n
    return Movie(
        n=n,
        stills=tuple(stills),
        events=tuple(ev_objs),
        component_orientations=tuple(orientations),
    )


# ---------------------------------------------------------------------------
# the shared torus-pair script


def _a_lines(tip, yb, yt, lr, ur):
    """A's six boundary lines; lr and ur given as (anchor, dir)."""
    return (
        _ln("ll", tip, (2, -3)),
        _ln("bot", (0, yb), (1, 0)),
        _ln("lr", lr[0], lr[1]),
        _ln("ur", ur[0], ur[1]),
        _ln("top", (0, yt), (-1, 0)),
        _ln("ul", tip, (-2, -3)),
    )


def _b_lines(tip_l, tip_r):
    return (
        _ln("bll", tip_l, (1, -1)),
        _ln("bbot", (0, -2), (1, 0)),
        _ln("blr", tip_r, (1, 1)),
        _ln("bur", tip_r, (-1, 1)),
        _ln("btop", (0, 2), (-1, 0)),
        _ln("bul", tip_l, (-1, -1)),
    )


def _al_lines():
    return (
        _ln("ll", (5, 0), (2, -3)),
        _ln("bot", (0, F(-21, 10)), (1, 0)),
        _ln("lr", (F(25, 2), 0), (5, 7)),
        _ln("ur", (F(25, 2), 0), (-5, 7)),
        _ln("top", (0, F(21, 10)), (-1, 0)),
        _ln("ul", (5, 0), (-2, -3)),
    )


def _ar_lines():
    return (
        _ln("ll", (14, 0), (5, -7)),
        _ln("bot", (0, F(-21, 10)), (1, 0)),
        _ln("lr", (F(323, 15), -2), (1, 2)),
        _ln("ur", (21, 2), (-1, 1)),
        _ln("top", (0, F(21, 10)), (-1, 0)),
        _ln("ul", (14, 0), (-5, -7)),
    )


def _bl_lines():
    return (
        _ln("bll", (1, 0), (1, -1)),
        _ln("bbot", (0, -2), (1, 0)),
        _ln("blr", (12, 0), (1, 2)),
        _ln("bur", (12, 0), (-1, 2)),
        _ln("btop", (0, 2), (-1, 0)),
        _ln("bul", (1, 0), (-1, -1)),
    )


def _br_lines():
    return (
        _ln("bll", (F(157, 10), 0), (1, -1)),
        _ln("bbot", (0, -2), (1, 0)),
        _ln("blr", (25, 0), (1, 1)),
        _ln("bur", (25, 0), (-1, 1)),
        _ln("btop", (0, 2), (-1, 0)),
        _ln("bul", (F(157, 10), 0), (-1, -1)),
    )


def _s_lines(x_left, x_right, h, reversed_=False):
    if not reversed_:
        return (
            _ln("sl", (x_left, 0), (0, 1)),
            _ln("stop", (0, h), (1, 0)),
            _ln("sr", (x_right, 0), (0, -1)),
            _ln("sbot", (0, -h), (-1, 0)),
        )
    return (
        _ln("sbot", (0, -h), (1, 0)),
        _ln("sr", (x_right, 0), (0, 1)),
        _ln("stop", (0, h), (-1, 0)),
        _ln("sl", (x_left, 0), (0, -1)),
    )


# named A-keyframes
_A_SMALL = lambda: _a_lines((11, 0), F(-3, 2), F(3, 2), ((14, 0), (2, 5)), ((14, 0), (-2, 3)))
_A_POKE_TOP = lambda: _a_lines((11, 0), F(-3, 2), F(21, 10), ((14, 0), (2, 5)), ((14, 0), (-2, 3)))
_A_POKE_BOTH = lambda: _a_lines((11, 0), F(-21, 10), F(21, 10), ((14, 0), (2, 5)), ((14, 0), (-2, 3)))
_A_PIVOTED = lambda: _a_lines(
    (11, 0), F(-21, 10), F(21, 10), ((F(66, 5), -2), (1, 2)), ((F(38, 3), 2), (-1, 1))
)
_A_WIDE_L = lambda: _a_lines(
    (5, 0), F(-21, 10), F(21, 10), ((F(66, 5), -2), (1, 2)), ((F(38, 3), 2), (-1, 1))
)
_A_STAGE = lambda: _a_lines(
    (5, 0), F(-21, 10), F(21, 10), ((F(323, 15), -2), (1, 2)), ((21, 2), (-1, 1))
)

_B_SMALL = lambda: _b_lines((9, 0), (15, 0))
_B_STAGE = lambda: _b_lines((1, 0), (25, 0))


def _rot90(center, lines):
    cx, cy = F(center[0]), F(center[1])
    out = []
    for name, (px, py), (dx, dy) in lines:
        out.append((name, (cx - (py - cy), cy + (px - cx)), (-dy, dx)))
    return tuple(out)


def _rot_poly(poly, center, times):
    lines = poly.lines
    for _ in range(times % 4):
        lines = _rot90(center, lines)
    return _Poly(comp=poly.comp, lines=lines)


def _pair_script(ci, cj, ck=None, bead_sign=1, twisted=False):
    """Keyframe/event script for the shared torus pair.

    ci, cj: components of A and B.  ck set: run the bead sweep
    (standard pair); twisted: run the 360-degree rotation instead.
    """
    A = lambda lines: _Poly(ci, lines)
    B = lambda lines: _Poly(cj, lines)

    q1 = lambda bs, as_: ("q1", (bs, "btop"), (as_, "ul"))
    q2 = lambda bs, as_: ("q2", (bs, "btop"), (as_, "ur"))
    p1 = lambda as_, bs: ("p1", (as_, "ll"), (bs, "bbot"))
    p2 = lambda as_, bs: ("p2", (as_, "lr"), (bs, "bbot"))

    kfs = []
    evs = []
    conv = set()

    def still(t, polys, crosses=()):
        kfs.append((F(t), polys, list(crosses)))

    def event(t, kind, **kw):
        evs.append(dict(kind=kind, time=F(t), **kw))

    # --- setup
    still(0, {})
    event(F(1, 2), "Birth", strand="B")
    still(1, {"B": B(_B_SMALL())})
    still(2, {"B": B(_B_STAGE())})
    event(F(5, 2), "Birth", strand="A")
    qq = [q1("B", "A"), q2("B", "A")]
    pp = [p1("A", "B"), p2("A", "B")]
    still(3, {"B": B(_B_STAGE()), "A": A(_A_SMALL())})
    event(F(7, 2), "R2Plus", cross=("q1", "q2"), at=(F(25, 2), 2))
    still(4, {"B": B(_B_STAGE()), "A": A(_A_POKE_TOP())}, qq)
    event(F(9, 2), "R2Plus", cross=("p1", "p2"), at=(F(383, 30), -2))
    still(5, {"B": B(_B_STAGE()), "A": A(_A_POKE_BOTH())}, qq + pp)
    still(6, {"B": B(_B_STAGE()), "A": A(_A_PIVOTED())}, qq + pp)
    still(7, {"B": B(_B_STAGE()), "A": A(_A_WIDE_L())}, qq + pp)
    still(8, {"B": B(_B_STAGE()), "A": A(_A_STAGE())}, qq + pp)
    event(F(17, 2), "SaddleSplit", before=("B",), after=("BL", "BR"))
    mid_cross = [q1("BL", "A"), q2("BR", "A"), p1("A", "BL"), p2("A", "BR")]
    still(
        9,
        {"A": A(_A_STAGE()), "BL": B(_bl_lines()), "BR": B(_br_lines())},
        mid_cross,
    )
    event(F(19, 2), "SaddleSplit", before=("A",), after=("AL", "AR"))
    mid_polys = lambda: {
        "AL": A(_al_lines()),
        "AR": A(_ar_lines()),
        "BL": B(_bl_lines()),
        "BR": B(_br_lines()),
    }
    mid_cross = [q1("BL", "AL"), q2("BR", "AR"), p1("AL", "BL"), p2("AR", "BR")]
    still(10, mid_polys(), mid_cross)

    clock = F(10)

    if twisted:
        center = (19, 0)
        for step in (1, 2, 3, 4):
            clock += 1
            polys = mid_polys()
            polys["AR"] = _rot_poly(polys["AR"], center, step)
            polys["BR"] = _rot_poly(polys["BR"], center, step)
            still(clock, polys, mid_cross)

    if ck is not None:
        clock = _bead_sweep(kfs, evs, conv, mid_polys, mid_cross, ck, bead_sign, clock)

    # --- teardown (reverse of setup)
    t0 = clock
    event(t0 + F(1, 2), "SaddleMerge", before=("AL", "AR"), after=("A2",))
    qq = [q1("BL", "A2"), q2("BR", "A2")]
    pp = [p1("A2", "BL"), p2("A2", "BR")]
    still(t0 + 1, {"A2": A(_A_STAGE()), "BL": B(_bl_lines()), "BR": B(_br_lines())}, qq + pp)
    event(t0 + F(3, 2), "SaddleMerge", before=("BL", "BR"), after=("B2",))
    qq = [q1("B2", "A2"), q2("B2", "A2")]
    pp = [p1("A2", "B2"), p2("A2", "B2")]
    still(t0 + 2, {"A2": A(_A_STAGE()), "B2": B(_B_STAGE())}, qq + pp)
    narrowed_l = _a_lines(
        (11, 0), F(-21, 10), F(21, 10), ((F(323, 15), -2), (1, 2)), ((21, 2), (-1, 1))
    )
    still(t0 + 3, {"A2": A(narrowed_l), "B2": B(_B_STAGE())}, qq + pp)
    still(t0 + 4, {"A2": A(_A_PIVOTED()), "B2": B(_B_STAGE())}, qq + pp)
    still(t0 + 5, {"A2": A(_A_POKE_BOTH()), "B2": B(_B_STAGE())}, qq + pp)
    event(t0 + F(11, 2), "R2Minus", cross=("p1", "p2"), at=(F(383, 30), -2))
    still(t0 + 6, {"A2": A(_A_POKE_TOP()), "B2": B(_B_STAGE())}, qq)
    event(t0 + F(13, 2), "R2Minus", cross=("q1", "q2"), at=(F(25, 2), 2))
    still(t0 + 7, {"A2": A(_A_SMALL()), "B2": B(_B_STAGE())})
    event(t0 + F(15, 2), "Death", strand="A2")
    still(t0 + 8, {"B2": B(_B_STAGE())})
    still(t0 + 9, {"B2": B(_B_SMALL())})
    event(t0 + F(19, 2), "Death", strand="B2")
    still(t0 + 10, {})

    return kfs, evs, conv


def _bead_sweep(kfs, evs, conv, mid_polys, mid_cross, ck, bead_sign, clock):
    """Sweep the bead rectangle S rightward across the right-hand clasp.

    A little state machine: "moments" are the events plus the vertex
    passages where a riding crossing changes edges; stills are emitted at
    the midpoints between consecutive moments so no still ever places a
    crossing exactly on a polygon vertex.
    """
    S = lambda xl, xr, h: _Poly(ck, _s_lines(xl, xr, h, reversed_=bead_sign < 0))

    evs.append(dict(kind="Birth", time=clock + F(1, 2), strand="S"))
    polys = mid_polys()
    polys["S"] = S(F(67, 5), F(69, 5), F(1, 2))
    kfs.append((clock + 1, polys, list(mid_cross)))
    start_x = F(69, 5)
    t_base = clock + 2 - start_x  # sweep clock: time = right-edge x + t_base

    # which strand each sigma crossing pierces and which side of S it is on
    side = {
        "sa_ru": ("AR", "sr"),
        "sa_rl": ("AR", "sr"),
        "sa_lu": ("AR", "sl"),
        "sa_ll": ("AR", "sl"),
        "sb_ru": ("BR", "sr"),
        "sb_rl": ("BR", "sr"),
        "sb_lu": ("BR", "sl"),
        "sb_ll": ("BR", "sl"),
    }
    edge_of = {}  # alive sigma crossings -> current edge name

    X = F
    T7 = X(157, 10)
    moments = [
        (X(14), "R2Plus", dict(cross=("sa_ru", "sa_rl"), at=(14, 0),
                               edges={"sa_ru": "ul", "sa_rl": "ll"})),
        (X(144, 10), "R2Plus", dict(cross=("sa_lu", "sa_ll"), at=(14, 0),
                                    edges={"sa_lu": "ul", "sa_ll": "ll"})),
        (X(155, 10), "pass", dict(edges={"sa_ru": "top", "sa_rl": "bot"})),
        (T7, "R2Plus", dict(cross=("sb_ru", "sb_rl"), at=(T7, 0),
                            edges={"sb_ru": "bul", "sb_rl": "bll"})),
        (X(159, 10), "pass", dict(edges={"sa_lu": "top", "sa_ll": "bot"})),
        (X(161, 10), "R2Plus", dict(cross=("sb_lu", "sb_ll"), at=(T7, 0),
                                    edges={"sb_lu": "bul", "sb_ll": "bll"})),
        (X(177, 10), "pass", dict(edges={"sb_ru": "btop", "sb_rl": "bbot"})),
        (X(181, 10), "pass", dict(edges={"sb_lu": "btop", "sb_ll": "bbot"})),
        (X(209, 10), "pass", dict(edges={"sa_ru": "ur"})),
        (X(21), "R3", dict(cross=("sa_ru", "sb_ru", "q2"), at=(21, 2),
                           top=("S", "sr", (1, 0)), mid=("BR", "btop", (0, 0)),
                           bot=("AR", "ur", (0, 0)), moving="top")),
        (X(213, 10), "pass", dict(edges={"sa_lu": "ur"})),
        (X(214, 10), "R3", dict(cross=("sa_lu", "sb_lu", "q2"), at=(21, 2),
                                top=("BR", "btop", (0, 0)), mid=("AR", "ur", (0, 0)),
                                bot=("S", "sl", (1, 0)), moving="bot")),
        (F(1289, 60), "pass", dict(edges={"sa_rl": "lr"})),
        (F(323, 15), "R3", dict(cross=("sa_rl", "sb_rl", "p2"), at=(F(323, 15), -2),
                                top=("S", "sr", (1, 0)), mid=("AR", "lr", (0, 0)),
                                bot=("BR", "bbot", (0, 0)), moving="top")),
        (F(1313, 60), "pass", dict(edges={"sa_ll": "lr"})),
        (F(329, 15), "R3", dict(cross=("sa_ll", "sb_ll", "p2"), at=(F(323, 15), -2),
                                top=("AR", "lr", (0, 0)), mid=("BR", "bbot", (0, 0)),
                                bot=("S", "sl", (1, 0)), moving="bot")),
        (F(1021, 45), "R2Minus", dict(cross=("sa_ru", "sa_rl"),
                                      at=(F(1021, 45), F(14, 45)))),
        (X(23), "pass", dict(edges={"sb_ru": "bur", "sb_rl": "blr"})),
        (F(1039, 45), "R2Minus", dict(cross=("sa_lu", "sa_ll"),
                                      at=(F(1021, 45), F(14, 45)))),
        (X(234, 10), "pass", dict(edges={"sb_lu": "bur", "sb_ll": "blr"})),
        (X(25), "R2Minus", dict(cross=("sb_ru", "sb_rl"), at=(25, 0))),
        (X(254, 10), "R2Minus", dict(cross=("sb_lu", "sb_ll"), at=(25, 0))),
    ]
    end_x = X(258, 10)

    def emit_still(x_right):
        polys = mid_polys()
        polys["S"] = S(x_right - F(2, 5), x_right, 4)
        crosses = list(mid_cross)
        for cid, edge in sorted(edge_of.items()):
            strand, s_edge = side[cid]
            if s_edge == "sr":  # right edge of S is the over sheet
                crosses.append((cid, ("S", "sr"), (strand, edge)))
            else:
                crosses.append((cid, (strand, edge), ("S", "sl")))
        kfs.append((t_base + x_right, polys, crosses))

    emit_still(start_x)
    for idx, (x, kind, data) in enumerate(moments):
        if kind == "pass":
            edge_of.update(data["edges"])
        elif kind == "R2Plus":
            evs.append(dict(kind="R2Plus", time=t_base + x,
                            cross=data["cross"], at=data["at"]))
            edge_of.update(data["edges"])
        elif kind == "R2Minus":
            evs.append(dict(kind="R2Minus", time=t_base + x,
                            cross=data["cross"], at=data["at"]))
            conv.add(tuple(sorted(data["cross"])))
            for cid in data["cross"]:
                del edge_of[cid]
        elif kind == "R3":
            evs.append(dict(kind="R3", time=t_base + x, **data))
        nxt = moments[idx + 1][0] if idx + 1 < len(moments) else end_x
        emit_still((x + nxt) / 2)

    clock = t_base + end_x
    polys = mid_polys()
    polys["S"] = S(end_x - F(2, 5), end_x, F(1, 2))
    kfs.append((clock + 1, polys, list(mid_cross)))
    evs.append(dict(kind="Death", time=clock + F(3, 2), strand="S"))
    kfs.append((clock + 2, mid_polys(), list(mid_cross)))
    return clock + 2


# ---------------------------------------------------------------------------
# public builders


def _relabel(template_roles, roles, n):
    return {template_roles[r]: roles[r] for r in roles}


_template_cache = {}


def _build_template(kind):
    """Movies are geometrically identical for all index choices; build one
    template per kind on components (1, 2[, 3]) and relabel afterwards."""
    if kind in _template_cache:
        return _template_cache[kind]
    if kind == "S_ij":
        kfs, evs, conv = _pair_script(1, 2, twisted=True)
        movie = _assemble(2, kfs, evs, conv)
    elif kind == "S_ijk":
        kfs, evs, conv = _pair_script(1, 2, ck=3, bead_sign=1)
        movie = _assemble(3, kfs, evs, conv)
    elif kind == "S_minus_ijk":
        kfs, evs, conv = _pair_script(1, 2, ck=3, bead_sign=-1)
        movie = _assemble(3, kfs, evs, conv)
    else:
        raise CatalogError(f"unknown template {kind}")
    validate_movie(movie)
    _template_cache[kind] = movie
    return movie


def relabel_components(movie, mapping, n):
    """Renumber components by a partial injection {old: new}."""
    def comp(c):
        return mapping.get(c, c)

    stills = []
    for st in movie.stills:
        strands = [
            Strand(id=s.id, component=comp(s.component), dir=s.dir, vertices=s.vertices)
            for s in st.strands
        ]
        stills.append(make_still(st.time, strands, st.crossings))
    events = []
    for ev in movie.events:
        kw = {}
        for slot in ("top", "mid", "bot"):
            sh = getattr(ev, slot)
            if sh is not None:
                kw[slot] = SheetRecord(component=comp(sh.component), dir=sh.dir, vel=sh.vel)
        if kw:
            from dataclasses import replace

            events.append(replace(ev, **kw))
        else:
            events.append(ev)
    return Movie(
        n=n,
        stills=tuple(stills),
        events=tuple(events),
        component_orientations=(1,) * n,
    )


def trivial_link(n):
    """n unknotted, unlinked spheres: one birth and one death each."""
    if n < 1:
        raise CatalogError("need at least one component")
    kfs = [(F(0), {}, [])]
    evs = []
    clock = F(0)
    for c in range(1, n + 1):
        sid = f"T{c}"
        evs.append(dict(kind="Birth", time=clock + F(1, 2), strand=sid))
        kfs.append((clock + 1, {sid: _Poly(c, _B_SMALL())}, []))
        evs.append(dict(kind="Death", time=clock + F(3, 2), strand=sid))
        kfs.append((clock + 2, {}, []))
        clock += 2
    movie = _assemble(n, kfs, evs, set())
    validate_movie(movie)
    return movie


def build_S_ij(n, i, j):
    """Twisted Hopf 2-link on components i < j (other components empty)."""
    if not (1 <= i < j <= n):
        raise CatalogError(f"need 1 <= i < j <= n, got ({i},{j}) with n={n}")
    template = _build_template("S_ij")
    return relabel_components(template, {1: i, 2: j}, n)


def build_S_ijk(n, i, j, k, bead_sign=1):
    """Standard Hopf 2-link on components i, j with a bead on k.

    bead_sign=-1 reverses the bead's orientation (the inverse class).
    """
    if len({i, j, k}) != 3 or not all(1 <= x <= n for x in (i, j, k)):
        raise CatalogError(f"need three distinct indices in 1..{n}, got ({i},{j},{k})")
    if bead_sign not in (1, -1):
        raise CatalogError("bead_sign must be +1 or -1")
    kind = "S_ijk" if bead_sign == 1 else "S_minus_ijk"
    template = _build_template(kind)
    return relabel_components(template, {1: i, 2: j, 3: k}, n)


_generator_cache = {}


def generator_movie(spec, n):
    """Movie of a GeneratorSpec (one copy; multiplicity handled by realize)."""
    key = (spec.kind, spec.indices, n)
    movie = _generator_cache.get(key)
    if movie is None:
        if spec.kind == "S_ij":
            movie = build_S_ij(n, *spec.indices)
        elif spec.kind == "S_ijk":
            movie = build_S_ijk(n, *spec.indices, bead_sign=1)
        else:
            movie = build_S_ijk(n, *spec.indices, bead_sign=-1)
        _generator_cache[key] = movie
    return movie


def realize(nf):
    """Split union of the generator movies of a normal form."""
    movies = []
    for g in nf.generators:
        m = generator_movie(g, nf.n)
        movies.extend([m] * g.multiplicity)
    if not movies:
        return trivial_link(nf.n)
    return split_union_many(movies)


# ---------------------------------------------------------------------------
# catalog entries with their expected invariant tables


@dataclass(frozen=True)
class CatalogEntry:
    spec: GeneratorSpec
    movie: Movie
    expected_invariants: "InvariantReport"


def expected_tlk_table(i, j, k, sign=1):
    """Nonzero triple linking values of the beaded generator."""
    return {
        (i, j, k): sign,
        (j, i, k): sign,
        (k, i, j): -sign,
        (k, j, i): -sign,
    }


def _expect(n, dlk=None, tlk=None):
    from itertools import combinations, permutations

    from .invariants import InvariantReport

    dlk = dlk or {}
    tlk = tlk or {}
    return InvariantReport(
        n=n,
        dlk=tuple(sorted(((i, j), dlk.get((i, j), 0)) for i, j in combinations(range(1, n + 1), 2))),
        tlk=tuple(sorted((t, tlk.get(t, 0)) for t in permutations(range(1, n + 1), 3))),
        relations_ok=True,
    )


def catalog_entries(n):
    """All generators of the family on n components, with expected values."""
    entries = []
    from itertools import combinations, permutations

    for i, j in combinations(range(1, n + 1), 2):
        entries.append(
            CatalogEntry(
                spec=GeneratorSpec("S_ij", (i, j), 1),
                movie=build_S_ij(n, i, j),
                expected_invariants=_expect(n, dlk={(i, j): 1}),
            )
        )
    for i, j, k in permutations(range(1, n + 1), 3):
        for sign, kind in ((1, "S_ijk"), (-1, "S_minus_ijk")):
            entries.append(
                CatalogEntry(
                    spec=GeneratorSpec(kind, (i, j, k), 1),
                    movie=build_S_ijk(n, i, j, k, bead_sign=sign),
                    expected_invariants=_expect(n, tlk=expected_tlk_table(i, j, k, sign)),
                )
            )
    return entries
