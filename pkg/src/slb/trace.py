"""Singularity set of the projected surface diagram of a movie.

Forgetting the over/under height, a movie's trace projects to a surface
diagram in (x, y, t)-space.  Its double curves are the space-time traces
of the crossings; branch points are the endpoints created by R1 moves;
triple points are the R3 events.  This module extracts those objects
with exact rational geometry and computes the self-framing of a closed
double curve against its diagonal push-off.

The push-off direction at a point of a double curve is the unnormalized
sum of the two sheet orientation normals; it lies in the open cone of
directions positive on both sheets.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .movie_core import MovieError, NonGeneric, cross2, sheet_normal_exact, vsub

Rat = Fraction


class TraceError(MovieError):
    pass


def sheet_normal(strand_dir, velocity, orientation_flag):
    """Orientation normal of a moving strand's sheet in (x, y, t)-space."""
    return sheet_normal_exact(tuple(Rat(c) for c in strand_dir),
                              tuple(Rat(c) for c in velocity),
                              orientation_flag)


@dataclass(frozen=True)
class TriplePoint:
    point: tuple  # (x, y, t)
    triple_type: tuple  # (top, mid, bottom) component indices
    sign: int
    sheet_normals: tuple  # three exact 3-vectors (top, mid, bottom)


@dataclass(frozen=True)
class DoubleCurve:
    curve_type: tuple  # (over component, under component)
    polyline: tuple  # (x, y, t) vertices; closed curves do not repeat the seam
    closed: bool
    crossing_instances: tuple  # (crossing id, (t_start, t_end)) in traversal order
    endpoints: tuple  # branch points for open curves, else ()
    pushoff_dirs: tuple  # per-vertex exact 3-vectors


def _det3(a, b, c):
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def extract_triple_points(movie):
    """One signed TriplePoint per R3 event."""
    flags = movie.component_orientations
    points = []
    for ev in movie.events:
        if ev.kind != "R3":
            continue
        normals = tuple(
            sheet_normal(sh.dir, sh.vel, flags[sh.component - 1])
            for sh in (ev.top, ev.mid, ev.bot)
        )
        det = _det3(*normals)
        if det == 0:
            raise NonGeneric(f"R3@t={ev.time}: degenerate sheet normals")
        points.append(
            TriplePoint(
                point=(ev.at[0], ev.at[1], ev.time),
                triple_type=(ev.top.component, ev.mid.component, ev.bot.component),
                sign=1 if det > 0 else -1,
                sheet_normals=normals,
            )
        )
    return points


# ---------------------------------------------------------------------------
# crossing lifetimes and double-curve assembly


@dataclass
class _Lifetime:
    cid: str
    over_comp: int
    under_comp: int
    birth: tuple  # ("R2Plus", partner) | ("R1Plus", None)
    death: tuple | None
    verts: list  # (t, (x,y), field) in time order

    def polyline(self, reverse=False):
        pts = [(v[1][0], v[1][1], v[0]) for v in self.verts]
        fld = [v[2] for v in self.verts]
        if reverse:
            pts.reverse()
            fld.reverse()
        return pts, fld


_normal_memo = {}


def _normal_cached(u, v, flag):
    key = (u, v, flag)
    n = _normal_memo.get(key)
    if n is None:
        n = sheet_normal_exact(u, v, flag)
        _normal_memo[key] = n
    return n


_field_memo = {}


def _field(movie, still, c):
    flags = movie.component_orientations
    key = (
        c.odir,
        c.ovel,
        flags[still.strand(c.over).component - 1],
        c.udir,
        c.uvel,
        flags[still.strand(c.under).component - 1],
    )
    f = _field_memo.get(key)
    if f is None:
        n_over = _normal_cached(*key[:3])
        n_under = _normal_cached(*key[3:])
        f = tuple(n_over[k] + n_under[k] for k in range(3))
        _field_memo[key] = f
    return f


def _collect_lifetimes(movie):
    """Scan stills and events into per-crossing lifetimes."""
    lifetimes = {}
    events_by_time = sorted(movie.events, key=lambda e: e.time)
    ev_idx = 0
    last_field = {}
    for st in movie.stills:
        while ev_idx < len(events_by_time) and events_by_time[ev_idx].time < st.time:
            ev = events_by_time[ev_idx]
            _apply_event(movie, lifetimes, ev, last_field)
            ev_idx += 1
        for c in st.crossings:
            lt = lifetimes.get(c.id)
            if lt is None:
                # crossing present in a still with no creating event
                raise TraceError(f"crossing {c.id} has no creating event")
            fld = _field(movie, st, c)
            lt.verts.append((st.time, c.at, fld))
            last_field[c.id] = fld
            if lt.over_comp is None:
                lt.over_comp = st.strand(c.over).component
                lt.under_comp = st.strand(c.under).component
    while ev_idx < len(events_by_time):
        _apply_event(movie, lifetimes, events_by_time[ev_idx], last_field)
        ev_idx += 1
    return lifetimes


def _apply_event(movie, lifetimes, ev, last_field):
    if ev.kind == "R2Plus":
        c1, c2 = ev.crossings
        for cid, partner in ((c1, c2), (c2, c1)):
            lifetimes[cid] = _Lifetime(
                cid=cid,
                over_comp=None,
                under_comp=None,
                birth=("R2Plus", partner, ev.at, ev.time),
                death=None,
                verts=[(ev.time, ev.at, None)],
            )
    elif ev.kind == "R1Plus":
        (cid,) = ev.crossings
        lifetimes[cid] = _Lifetime(
            cid=cid,
            over_comp=None,
            under_comp=None,
            birth=("R1Plus", None, ev.at, ev.time),
            death=None,
            verts=[(ev.time, ev.at, None)],
        )
    elif ev.kind == "R2Minus":
        c1, c2 = ev.crossings
        for cid, partner in ((c1, c2), (c2, c1)):
            lt = lifetimes[cid]
            lt.death = ("R2Minus", partner, ev.at, ev.time)
            lt.verts.append((ev.time, ev.at, None))
    elif ev.kind == "R1Minus":
        (cid,) = ev.crossings
        lt = lifetimes[cid]
        lt.death = ("R1Minus", None, ev.at, ev.time)
        lt.verts.append((ev.time, ev.at, None))
    elif ev.kind == "R3":
        for cid in ev.crossings:
            lifetimes[cid].verts.append((ev.time, ev.at, None))
    # renamings across events
    for old, new in ev.corr:
        if old in lifetimes and new != old:
            lifetimes[new] = lifetimes.pop(old)
            lifetimes[new].cid = new


def _fill_fields(lt):
    """Event vertices carry no field; reuse the nearest sampled one."""
    known = [v[2] for v in lt.verts if v[2] is not None]
    if not known:
        raise TraceError(f"crossing {lt.cid} never appears in a still")
    out = []
    for k, (t, p, fld) in enumerate(lt.verts):
        if fld is None:
            fld = next(
                (lt.verts[j][2] for j in list(range(k + 1, len(lt.verts))) + list(range(k - 1, -1, -1))
                 if lt.verts[j][2] is not None),
            )
        out.append((t, p, fld))
    lt.verts = out


def extract_double_curves(movie):
    """Assemble maximal double curves from crossing lifetimes.

    R2 events glue the two paired lifetimes at the tangency vertex; R1
    events terminate a trace at a branch point; R3 events thread three
    curves through the triple point.
    """
    lifetimes = _collect_lifetimes(movie)
    for lt in lifetimes.values():
        if lt.death is None:
            raise TraceError(f"crossing {lt.cid} never dies")
        _fill_fields(lt)

    # endpoints: ('b'|'d', cid); R2 pairs join, R1 ends are branch points
    links = {}
    branch = set()
    for lt in lifetimes.values():
        for tag, rec in (("b", lt.birth), ("d", lt.death)):
            kind, partner = rec[0], rec[1]
            key = (lt.cid, tag)
            if kind in ("R2Plus", "R2Minus"):
                links[key] = (partner, tag)
            else:
                branch.add(key)

    visited = set()
    curves = []

    def walk(start_key):
        """Follow lifetimes from one endpoint; returns the chain and whether closed."""
        chain = []
        cid, tag = start_key
        while True:
            exit_tag = "d" if tag == "b" else "b"
            chain.append((cid, tag == "d"))  # reversed if entered at death
            visited.add(cid)
            key = (cid, exit_tag)
            if key in branch:
                return chain, False
            try:
                cid, tag = links[key]
            except KeyError:
                raise TraceError(
                    f"trace through {cid} neither closes nor ends at a branch point"
                )
            if cid == chain[0][0] and tag == ("b" if not chain[0][1] else "d"):
                return chain, True

    # open curves first (start from branch points), then remaining cycles
    for key in sorted(branch):
        if key[0] in visited:
            continue
        chain, closed = walk(key)
        curves.append((chain, closed))
    for cid in sorted(lifetimes):
        if cid in visited:
            continue
        chain, closed = walk((cid, "b"))
        curves.append((chain, closed))

    out = []
    for chain, closed in curves:
        pts, fld, inst = [], [], []
        over_comp = lifetimes[chain[0][0]].over_comp
        under_comp = lifetimes[chain[0][0]].under_comp
        for cid, reverse in chain:
            lt = lifetimes[cid]
            if (lt.over_comp, lt.under_comp) != (over_comp, under_comp):
                raise TraceError(
                    f"double curve mixes types {(over_comp, under_comp)} and "
                    f"{(lt.over_comp, lt.under_comp)}"
                )
            p, f = lt.polyline(reverse=reverse)
            if pts and pts[-1] == p[0]:
                # seam vertex shared by two lifetimes: both crossings' fields
                # are valid diagonal directions there; their sum stays in the
                # positive cone and avoids accidental alignment with either
                # incoming curve segment
                fld[-1] = tuple(fld[-1][k] + f[0][k] for k in range(3))
                p, f = p[1:], f[1:]
            pts += p
            fld += f
            inst.append((cid, (lt.verts[0][0], lt.verts[-1][0])))
        endpoints = ()
        if closed:
            if pts[0] == pts[-1]:
                fld[0] = tuple(fld[0][k] + fld[-1][k] for k in range(3))
                pts, fld = pts[:-1], fld[:-1]
        else:
            endpoints = (pts[0], pts[-1])
            if over_comp != under_comp:
                raise TraceError(
                    "open double curve between distinct components "
                    f"{(over_comp, under_comp)}"
                )
        out.append(
            DoubleCurve(
                curve_type=(over_comp, under_comp),
                polyline=tuple(pts),
                closed=closed,
                crossing_instances=tuple(inst),
                endpoints=endpoints,
                pushoff_dirs=tuple(fld),
            )
        )
    return out


# ---------------------------------------------------------------------------
# push-off framing: lk(c, c+) with exact signed-crossing counting


def _v3sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _v3add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _v3scale(k, a):
    return (k * a[0], k * a[1], k * a[2])


def _v3cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _v3dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


# deterministic schedule of projection directions with complement bases
_PROJECTIONS = (
    ((0, 0, 1), (1, 0, 0), (0, 1, 0)),
    ((0, 1, 0), (0, 0, 1), (1, 0, 0)),
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((1, 2, 5), (2, -1, 0), (1, 2, -1)),
    ((3, 1, 7), (1, -3, 0), (3, 1, -10)),
    ((2, 9, 4), (9, -2, 0), (2, 9, -85)),
    ((5, 3, 11), (3, -5, 0), (5, 3, -34)),
    ((7, 2, 3), (2, -7, 0), (7, 2, -53)),
)


def schedule_start():
    """Starting index of deterministic retry schedules (env SLB_SEED)."""
    try:
        return int(os.environ.get("SLB_SEED", "0"))
    except ValueError:
        return 0


class DegenerateProjection(Exception):
    pass


class CurvesTouch(Exception):
    pass


def _segments(pts, closed=True):
    n = len(pts)
    rng = range(n) if closed else range(n - 1)
    return [(pts[k], pts[(k + 1) % n]) for k in rng]


def _lk_via_projection(P, Q, d, b1, b2):
    """Signed count of P-over-Q crossings in the projection along d."""
    d = tuple(Rat(x) for x in d)
    b1 = tuple(Rat(x) for x in b1)
    b2 = tuple(Rat(x) for x in b2)
    def proj(v):
        return (_v3dot(v, b1), _v3dot(v, b2))
    def depth(v):
        return _v3dot(v, d)
    segsP = _segments(P)
    segsQ = _segments(Q)
    for a, b in segsP + segsQ:
        t = _v3sub(b, a)
        if proj(t) == (0, 0):
            raise DegenerateProjection("segment parallel to projection direction")
    total = 0
    for a0, a1 in segsP:
        pa0, pa1 = proj(a0), proj(a1)
        ra = vsub(pa1, pa0)
        for q0, q1 in segsQ:
            pq0, pq1 = proj(q0), proj(q1)
            rq = vsub(pq1, pq0)
            # cheap bbox reject
            if (
                max(pa0[0], pa1[0]) < min(pq0[0], pq1[0])
                or max(pq0[0], pq1[0]) < min(pa0[0], pa1[0])
                or max(pa0[1], pa1[1]) < min(pq0[1], pq1[1])
                or max(pq0[1], pq1[1]) < min(pa0[1], pa1[1])
            ):
                continue
            denom = cross2(ra, rq)
            ca = vsub(pq0, pa0)
            if denom == 0:
                if cross2(ca, ra) == 0:
                    raise DegenerateProjection("collinear projected segments")
                continue
            t = cross2(ca, rq) / denom
            u = cross2(ca, ra) / denom
            if t <= 0 or t >= 1 or u <= 0 or u >= 1:
                if 0 <= t <= 1 and 0 <= u <= 1:
                    raise DegenerateProjection("projected endpoint contact")
                continue
            zP = depth(a0) + t * (depth(a1) - depth(a0))
            zQ = depth(q0) + u * (depth(q1) - depth(q0))
            if zP == zQ:
                raise CurvesTouch("curves intersect in space")
            if zP > zQ:
                total += 1 if denom > 0 else -1
    return total


def linking_number_exact(P, Q, start=None):
    """Linking number of two disjoint closed polylines in R^3 (exact)."""
    if start is None:
        start = schedule_start()
    n = len(_PROJECTIONS)
    for k in range(n):
        d, b1, b2 = _PROJECTIONS[(start + k) % n]
        try:
            return _lk_via_projection(P, Q, d, b1, b2)
        except DegenerateProjection:
            continue
    raise NonGeneric("no generic projection direction in the retry schedule")


def _min_feature_gap(pts):
    """A positive rational length scale: least L-infinity gap between
    distinct vertices (cheap, exact)."""
    best = None
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            dx = abs(pts[i][0] - pts[j][0])
            dy = abs(pts[i][1] - pts[j][1])
            dz = abs(pts[i][2] - pts[j][2])
            g = max(dx, dy, dz)
            if g != 0 and (best is None or g < best):
                best = g
    if best is None:
        raise TraceError("degenerate curve: all vertices coincide")
    return best


_framing_cache = {}


def _compress_static_runs(pts, dirs):
    """Drop interior vertices of straight static runs: consecutive samples
    with the same (x, y) and the same push-off vector trace a straight
    segment in (x, y, t) whose offset is the same straight segment; the
    curve and its push-off are unchanged by removing them."""
    n = len(pts)
    keep = []
    for k in range(n):
        a, b, c = pts[k - 1], pts[k], pts[(k + 1) % n]
        if (
            a[0] == b[0] == c[0]
            and a[1] == b[1] == c[1]
            and dirs[k - 1] == dirs[k] == dirs[(k + 1) % n]
        ):
            continue
        keep.append(k)
    if len(keep) < 3:
        return pts, dirs
    return tuple(pts[k] for k in keep), tuple(dirs[k] for k in keep)


def pushoff_framing(curve):
    """lk(c, c+) for a closed double curve, c+ the diagonal push-off.

    Deterministic retry schedule: the push-off scale halves whenever the
    curves touch, and the projection direction advances through a fixed
    rational list until all genericity predicates pass.
    """
    if not curve.closed:
        raise TraceError("push-off framing needs a closed curve")
    pts, dirs = _compress_static_runs(curve.polyline, curve.pushoff_dirs)
    start = schedule_start()
    key = None
    if len(pts) >= 1:
        o = pts[0]
        key = (
            start,
            tuple((p[0] - o[0], p[1] - o[1], p[2] - o[2]) for p in pts),
            dirs,
        )
        if key in _framing_cache:
            return _framing_cache[key]
    gap = _min_feature_gap(pts)
    dmax = max(max(abs(v[0]), abs(v[1]), abs(v[2])) for v in dirs)
    if dmax == 0:
        raise TraceError("vanishing push-off field")
    eps = gap / (1024 * dmax)
    for _ in range(40):
        offset = [_v3add(p, _v3scale(eps, v)) for p, v in zip(pts, dirs)]
        try:
            val = linking_number_exact(list(pts), offset, start=start)
            if key is not None:
                _framing_cache[key] = val
            return val
        except CurvesTouch:
            eps = eps / 2
        except NonGeneric:
            eps = eps / 2
    raise NonGeneric("push-off retry schedule exhausted")
