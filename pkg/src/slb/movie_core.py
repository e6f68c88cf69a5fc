"""Movie presentations of oriented n-component surface-links.

A movie is a time-ordered sequence of link-diagram stills joined by
elementary events (births, deaths, saddles, Reidemeister moves).  Each
still is a planar diagram: closed PL strands with exact rational vertex
coordinates, plus the set of transverse crossings between them.  The
trace of a movie is a closed oriented surface in 4-space; the projection
that forgets the over/under height yields a surface diagram in
(x, y, time)-space whose singularities are extracted by the trace module.

All coordinates are exact rationals.  Equality, transversality and
orientation predicates are decided exactly; there are no tolerances
anywhere in this module.

Conventions baked into the format:

* between two consecutive stills there is at most one event;
* crossing positions move linearly between consecutive stills, at the
  velocity recorded in the earlier still (dedicated anchor stills are
  inserted wherever a velocity changes);
* the velocities stored on a crossing are effective local translation
  velocities of the two sheets, chosen so that the derived motion of the
  intersection point matches the recorded positions;
* the first and last stills are empty (the surface is closed);
* the positive frame of the sheet traced by an oriented strand is
  (strand tangent, increasing time), flipped by the per-component
  orientation flag.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from fractions import Fraction

Rat = Fraction

EVENT_KINDS = (
    "Birth",
    "Death",
    "SaddleSplit",
    "SaddleMerge",
    "R1Plus",
    "R1Minus",
    "R2Plus",
    "R2Minus",
    "R3",
)


class MovieError(Exception):
    """Base class for all structured movie errors."""


class ParseError(MovieError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        loc = "" if line is None else f" (line {line}" + ("" if col is None else f", col {col}") + ")"
        super().__init__(message + loc)


class ValidationFailure(MovieError):
    """A movie violates a structural invariant."""


class OpenSurface(ValidationFailure):
    """First or last still is nonempty."""


class Inconsistent(ValidationFailure):
    """A still pair does not match its declared event."""


class NonGeneric(ValidationFailure):
    """A degenerate configuration: zero determinant, tangency, etc."""


# ---------------------------------------------------------------------------
# exact planar geometry helpers


def vadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def vsub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def vscale(k, a):
    return (k * a[0], k * a[1])


def cross2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def dot2(a, b):
    return a[0] * b[0] + a[1] * b[1]


def seg_interior_hit(a, b, c, d):
    """Intersect open segments (a,b) and (c,d).

    Returns ``("point", p)`` for a transverse interior intersection,
    ``None`` for no intersection, and ``("degenerate", why)`` for any
    non-generic contact (endpoint touch, collinear overlap, tangency).
    """
    r = vsub(b, a)
    s = vsub(d, c)
    denom = cross2(r, s)
    ca = vsub(c, a)
    if denom == 0:
        if cross2(ca, r) != 0:
            return None
        # collinear: overlap iff the parameter intervals intersect
        rr = dot2(r, r)
        t0 = dot2(ca, r)
        t1 = dot2(vsub(d, a), r)
        lo, hi = min(t0, t1), max(t0, t1)
        if hi <= 0 or lo >= rr:
            return None
        return ("degenerate", "collinear overlap")
    t = cross2(ca, s) / denom
    u = cross2(ca, r) / denom
    if t <= 0 or t >= 1 or u <= 0 or u >= 1:
        if 0 <= t <= 1 and 0 <= u <= 1:
            return ("degenerate", "endpoint contact")
        return None
    return ("point", vadd(a, vscale(t, r)))


# ---------------------------------------------------------------------------
# data model


@dataclass(frozen=True)
class Strand:
    """One closed PL curve of a still.  ``vertices`` is implicitly closed."""

    id: str
    component: int
    dir: tuple  # tangent 2-vector at vertices[0]
    vertices: tuple  # tuple of (Rat, Rat)

    def segments(self):
        v = self.vertices
        n = len(v)
        return [(v[k], v[(k + 1) % n]) for k in range(n)]


@dataclass(frozen=True)
class Crossing:
    id: str
    over: str  # strand id of the upper sheet
    under: str
    at: tuple
    odir: tuple
    udir: tuple
    ovel: tuple
    uvel: tuple


@dataclass(frozen=True)
class Still:
    time: Rat
    strands: tuple  # sorted by id
    crossings: tuple  # sorted by id

    def strand(self, sid):
        for s in self.strands:
            if s.id == sid:
                return s
        raise KeyError(sid)

    def crossing(self, cid):
        for c in self.crossings:
            if c.id == cid:
                return c
        raise KeyError(cid)


@dataclass(frozen=True)
class SheetRecord:
    component: int
    dir: tuple
    vel: tuple


@dataclass(frozen=True)
class Event:
    kind: str
    time: Rat
    strands: tuple = ()  # Birth/Death: the strand; saddles: strands before
    strands_after: tuple = ()  # saddles: strands after
    crossings: tuple = ()  # R1: one id, R2: two ids, R3: three ids
    at: tuple | None = None
    top: SheetRecord | None = None
    mid: SheetRecord | None = None
    bot: SheetRecord | None = None
    moving: str | None = None  # R3: which sheet moves ("top"|"mid"|"bot")
    corr: tuple = ()  # (old_id, new_id) pairs; identity if omitted


@dataclass(frozen=True)
class Movie:
    n: int
    stills: tuple
    events: tuple
    component_orientations: tuple  # n flags, each +1 or -1

    def __post_init__(self):
        object.__setattr__(self, "_hash", None)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.n, self.stills, self.events, self.component_orientations))
            object.__setattr__(self, "_hash", h)
        return h


def make_still(time, strands, crossings):
    return Still(
        time=Rat(time),
        strands=tuple(sorted(strands, key=lambda s: s.id)),
        crossings=tuple(sorted(crossings, key=lambda c: c.id)),
    )


# ---------------------------------------------------------------------------
# parsing


_RAT = r"-?\d+(?:/\d+)?"
_PAIR = rf"\(\s*({_RAT})\s*,\s*({_RAT})\s*\)"
_ID = r"[A-Za-z0-9_.:-]+"

_re_n = re.compile(r"^n=(\d+)$")
_re_orient = re.compile(r"^orient=([+-]1(?:,[+-]1)*)$")
_re_still = re.compile(rf"^still\s+t=({_RAT})$")
_re_strand = re.compile(
    rf"^strand\s+({_ID})\s+comp=(\d+)\s+pts=\(([^)]*)\)\s+dir={_PAIR}$"
)
_re_cross = re.compile(
    rf"^cross\s+({_ID})\s+over=({_ID})\s+under=({_ID})\s+at={_PAIR}"
    rf"\s+odir={_PAIR}\s+udir={_PAIR}\s+ovel={_PAIR}\s+uvel={_PAIR}$"
)
_re_event = re.compile(rf"^event\s+([A-Za-z0-9]+)\s+t=({_RAT})\s*(.*)$")
_re_token = re.compile(rf"(\w+)=(\([^)]*\)|{_ID}(?:,{_ID})*|{_ID})")


def _rat(text):
    return Rat(text)


def _pair(match, i):
    return (_rat(match.group(i)), _rat(match.group(i + 1)))


def _parse_pair_text(text, line_no):
    m = re.fullmatch(rf"\(\s*({_RAT})\s*,\s*({_RAT})\s*\)", text)
    if not m:
        raise ParseError(f"expected rational pair, got {text!r}", line_no)
    return (_rat(m.group(1)), _rat(m.group(2)))


def _parse_sheet(tokens, prefix, line_no):
    try:
        comp = int(tokens[prefix + "comp"])
        d = _parse_pair_text(tokens[prefix + "dir"], line_no)
        v = _parse_pair_text(tokens[prefix + "vel"], line_no)
    except KeyError as e:
        raise ParseError(f"R3 event missing {e.args[0]}", line_no)
    return SheetRecord(component=comp, dir=d, vel=v)


def parse_movie(text):
    """Parse the `.movie` text format.  Raises ParseError on bad input."""
    n = None
    orientations = None
    stills = []
    events = []
    cur_strands = None
    cur_crossings = None
    cur_time = None

    def flush():
        nonlocal cur_strands, cur_crossings, cur_time
        if cur_time is not None:
            stills.append(make_still(cur_time, cur_strands, cur_crossings))
        cur_strands, cur_crossings, cur_time = None, None, None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            m = _re_n.match(line)
            if not m:
                raise ParseError("expected header 'n=<int>'", line_no)
            n = int(m.group(1))
            if n < 1:
                raise ParseError("component count must be >= 1", line_no)
            continue
        m = _re_orient.match(line)
        if m:
            orientations = tuple(int(t) for t in m.group(1).split(","))
            continue
        m = _re_still.match(line)
        if m:
            flush()
            cur_time = _rat(m.group(1))
            cur_strands, cur_crossings = [], []
            continue
        m = _re_strand.match(line)
        if m:
            if cur_time is None:
                raise ParseError("strand outside a still", line_no)
            pts_text = m.group(3).strip()
            pts = []
            if pts_text:
                for part in pts_text.split(";"):
                    xy = part.split(",")
                    if len(xy) != 2:
                        raise ParseError(f"bad point {part!r}", line_no)
                    try:
                        pts.append((_rat(xy[0].strip()), _rat(xy[1].strip())))
                    except (ValueError, ZeroDivisionError):
                        raise ParseError(f"non-rational coordinate {part!r}", line_no)
            if len(pts) < 3:
                raise ParseError("strand needs at least 3 vertices", line_no)
            cur_strands.append(
                Strand(id=m.group(1), component=int(m.group(2)), dir=_pair(m, 4), vertices=tuple(pts))
            )
            continue
        m = _re_cross.match(line)
        if m:
            if cur_time is None:
                raise ParseError("cross outside a still", line_no)
            g = m.groups()
            cur_crossings.append(
                Crossing(
                    id=g[0],
                    over=g[1],
                    under=g[2],
                    at=(_rat(g[3]), _rat(g[4])),
                    odir=(_rat(g[5]), _rat(g[6])),
                    udir=(_rat(g[7]), _rat(g[8])),
                    ovel=(_rat(g[9]), _rat(g[10])),
                    uvel=(_rat(g[11]), _rat(g[12])),
                )
            )
            continue
        m = _re_event.match(line)
        if m:
            flush()
            kind = m.group(1)
            if kind not in EVENT_KINDS:
                raise ParseError(f"unknown event kind {kind!r}", line_no)
            tokens = dict(_re_token.findall(m.group(3)))
            ev = dict(kind=kind, time=_rat(m.group(2)))
            if "strand" in tokens:
                ev["strands"] = tuple(tokens["strand"].split(","))
            if "before" in tokens:
                ev["strands"] = tuple(tokens["before"].split(","))
            if "after" in tokens:
                ev["strands_after"] = tuple(tokens["after"].split(","))
            if "cross" in tokens:
                ev["crossings"] = tuple(tokens["cross"].split(","))
            if "at" in tokens:
                ev["at"] = _parse_pair_text(tokens["at"], line_no)
            if kind == "R3":
                ev["top"] = _parse_sheet(tokens, "top", line_no)
                ev["mid"] = _parse_sheet(tokens, "mid", line_no)
                ev["bot"] = _parse_sheet(tokens, "bot", line_no)
                ev["moving"] = tokens.get("moving")
                if ev["moving"] not in ("top", "mid", "bot"):
                    raise ParseError("R3 needs moving=top|mid|bot", line_no)
            if "corr" in tokens:
                body = tokens["corr"].strip("()")
                pairs = []
                if body:
                    for p in body.split(","):
                        if "->" not in p:
                            raise ParseError(f"bad corr entry {p!r}", line_no)
                        a, b = p.split("->")
                        pairs.append((a.strip(), b.strip()))
                ev["corr"] = tuple(pairs)
            events.append(Event(**ev))
            continue
        raise ParseError(f"unrecognized line {line!r}", line_no)

    flush()
    if n is None:
        raise ParseError("missing header 'n=<int>'")
    if not stills:
        raise ParseError("no stills")
    if orientations is None:
        orientations = (1,) * n
    if len(orientations) != n:
        raise ParseError("orient= must list one flag per component")

    movie = Movie(
        n=n,
        stills=tuple(stills),
        events=tuple(events),
        component_orientations=orientations,
    )
    _resolve_identifiers(movie)
    return movie


def _resolve_identifiers(movie):
    """Structural resolution: referenced ids exist, lifetimes unbroken."""
    seen_times = set()
    for st in movie.stills:
        if st.time in seen_times:
            raise ParseError(f"duplicate still time {st.time}")
        seen_times.add(st.time)
        sids = {s.id for s in st.strands}
        if len(sids) != len(st.strands):
            raise ParseError(f"duplicate strand id in still t={st.time}")
        for s in st.strands:
            if not (1 <= s.component <= movie.n):
                raise ParseError(f"strand {s.id}: component {s.component} out of range")
        cids = set()
        for c in st.crossings:
            if c.id in cids:
                raise ParseError(f"duplicate crossing id {c.id} in still t={st.time}")
            cids.add(c.id)
            if c.over not in sids or c.under not in sids:
                raise ParseError(f"dangling identifier in crossing {c.id} at t={st.time}")
    times = [st.time for st in movie.stills]
    if times != sorted(times):
        raise ParseError("still times must strictly increase")
    # crossing lifetimes: each id must occupy one contiguous run of stills
    runs = {}
    for idx, st in enumerate(movie.stills):
        for c in st.crossings:
            runs.setdefault(c.id, []).append(idx)
    for cid, idxs in runs.items():
        if idxs != list(range(idxs[0], idxs[-1] + 1)):
            raise ParseError(f"crossing lifetime violated for {cid}")


# ---------------------------------------------------------------------------
# printing


def _fmt_rat(x):
    x = Rat(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_pair(p):
    return f"({_fmt_rat(p[0])},{_fmt_rat(p[1])})"


def print_movie(movie):
    """Serialize a Movie to the canonical `.movie` text."""
    out = [f"n={movie.n}"]
    if any(f != 1 for f in movie.component_orientations):
        out.append("orient=" + ",".join("+1" if f == 1 else "-1" for f in movie.component_orientations))
    items = [("still", st.time, st) for st in movie.stills]
    items += [("event", ev.time, ev) for ev in movie.events]
    items.sort(key=lambda it: (it[1], 0 if it[0] == "event" else 1))
    for kind, _, obj in items:
        if kind == "still":
            out.append(f"still t={_fmt_rat(obj.time)}")
            for s in obj.strands:
                pts = ";".join(f"{_fmt_rat(p[0])},{_fmt_rat(p[1])}" for p in s.vertices)
                out.append(f"strand {s.id} comp={s.component} pts=({pts}) dir={_fmt_pair(s.dir)}")
            for c in obj.crossings:
                out.append(
                    f"cross {c.id} over={c.over} under={c.under} at={_fmt_pair(c.at)}"
                    f" odir={_fmt_pair(c.odir)} udir={_fmt_pair(c.udir)}"
                    f" ovel={_fmt_pair(c.ovel)} uvel={_fmt_pair(c.uvel)}"
                )
        else:
            ev = obj
            parts = [f"event {ev.kind} t={_fmt_rat(ev.time)}"]
            if ev.kind in ("Birth", "Death"):
                parts.append("strand=" + ",".join(ev.strands))
            elif ev.kind in ("SaddleSplit", "SaddleMerge"):
                parts.append("before=" + ",".join(ev.strands))
                parts.append("after=" + ",".join(ev.strands_after))
            if ev.crossings:
                parts.append("cross=" + ",".join(ev.crossings))
            if ev.at is not None:
                parts.append(f"at={_fmt_pair(ev.at)}")
            if ev.kind == "R3":
                for name, sh in (("top", ev.top), ("mid", ev.mid), ("bot", ev.bot)):
                    parts.append(f"{name}comp={sh.component}")
                    parts.append(f"{name}dir={_fmt_pair(sh.dir)}")
                    parts.append(f"{name}vel={_fmt_pair(sh.vel)}")
                parts.append(f"moving={ev.moving}")
            if ev.corr:
                parts.append("corr=(" + ",".join(f"{a}->{b}" for a, b in ev.corr) + ")")
            out.append(" ".join(parts))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    n_stills: int
    n_events: int
    max_crossings: int
    notes: tuple = ()


def _crossings_along_strand(still, sid):
    """Crossings met while traversing a strand, in traversal order."""
    strand = still.strand(sid)
    segs = strand.segments()
    hits = []
    for c in still.crossings:
        if c.over != sid and c.under != sid:
            continue
        for k, (a, b) in enumerate(segs):
            r = vsub(b, a)
            w = vsub(c.at, a)
            if cross2(r, w) == 0:
                t = dot2(w, r)
                rr = dot2(r, r)
                if 0 < t < rr:
                    hits.append(((k, Rat(t, rr)), c.id))
                    # a crossing lies on exactly one open segment unless the
                    # strand crosses itself there; both slots are wanted then
                    if c.over != c.under:
                        break
    hits.sort()
    return [cid for _, cid in hits]


def _check_still_geometry(still, n):
    """Crossings are exactly the pairwise transverse intersections."""
    declared = {}
    for c in still.crossings:
        declared.setdefault(c.at, []).append(c)
        if len(declared[c.at]) > 1:
            raise NonGeneric(f"two crossings share position {c.at} at t={still.time}")
    found = {}
    strands = list(still.strands)
    for i, s in enumerate(strands):
        segs_s = s.segments()
        for j in range(i, len(strands)):
            t = strands[j]
            segs_t = t.segments()
            for a_idx, (a0, a1) in enumerate(segs_s):
                for b_idx, (b0, b1) in enumerate(segs_t):
                    if i == j:
                        if b_idx <= a_idx:
                            continue
                        gap = (b_idx - a_idx) % len(segs_s)
                        if gap == 1 or gap == len(segs_s) - 1:
                            continue  # adjacent segments share a vertex
                    hit = seg_interior_hit(a0, a1, b0, b1)
                    if hit is None:
                        continue
                    if hit[0] == "degenerate":
                        raise NonGeneric(
                            f"non-transverse contact between {s.id} and {t.id}"
                            f" at t={still.time}: {hit[1]}"
                        )
                    p = hit[1]
                    if p in found:
                        raise NonGeneric(f"three sheets through {p} at t={still.time}")
                    found[p] = (s.id, t.id)
    for p, pair in found.items():
        if p not in declared:
            raise Inconsistent(f"undeclared intersection of {pair} at {p}, t={still.time}")
        c = declared[p][0]
        if {c.over, c.under} != set(pair):
            raise Inconsistent(f"crossing {c.id} names wrong strands at t={still.time}")
    for p in declared:
        if p not in found:
            raise Inconsistent(f"declared crossing at {p} has no intersection, t={still.time}")
    # direction fields must be parallel (same sense) to actual strand tangents
    for c in still.crossings:
        for sid, d in ((c.over, c.odir), (c.under, c.udir)):
            strand = still.strand(sid)
            okdir = False
            for a, b in strand.segments():
                r = vsub(b, a)
                w = vsub(c.at, a)
                if cross2(r, w) == 0 and 0 < dot2(w, r) < dot2(r, r):
                    if cross2(r, d) == 0 and dot2(r, d) > 0:
                        okdir = True
                        break
            if not okdir:
                raise Inconsistent(f"crossing {c.id}: dir field disagrees with {sid}")


def derived_velocity(c):
    """Velocity of the intersection point of two uniformly translating lines."""
    denom = cross2(c.odir, c.udir)
    if denom == 0:
        raise NonGeneric(f"crossing {c.id}: parallel strands")
    dv = vsub(c.uvel, c.ovel)
    a = cross2(dv, vscale(Rat(-1), c.udir)) / cross2(c.odir, vscale(Rat(-1), c.udir))
    return vadd(c.ovel, vscale(a, c.odir))


def sheet_normal_exact(u, v, flag):
    """Orientation normal of the sheet swept by a strand: flag * (a x b),
    a = (u, 0), b = (v, 1).  Exact rational 3-vector, never normalized."""
    if u == (0, 0) or u[0] == 0 and u[1] == 0:
        raise NonGeneric("zero strand direction")
    f = Rat(flag)
    return (f * u[1], f * (-u[0]), f * (u[0] * v[1] - u[1] * v[0]))


def _r3_determinant(ev, flags):
    normals = []
    for sh in (ev.top, ev.mid, ev.bot):
        normals.append(sheet_normal_exact(sh.dir, sh.vel, flags[sh.component - 1]))
    a, b, c = normals
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def _changed_segments(before, after, sids):
    """Segments present on one side only, for the event's strands."""
    segs_b, segs_a = [], []
    for sid in sids:
        try:
            bs = set(before.strand(sid).segments())
        except KeyError:
            bs = set()
        try:
            as_ = set(after.strand(sid).segments())
        except KeyError:
            as_ = set()
        segs_b += sorted(bs - as_)
        segs_a += sorted(as_ - bs)
    return segs_b, segs_a


def _check_event_locality(before, after, ev, touched_sids):
    """Changed segments may not cross segments of unrelated strands."""
    segs_b, segs_a = _changed_segments(before, after, touched_sids)
    for still, segs in ((before, segs_b), (after, segs_a)):
        for s in still.strands:
            if s.id in touched_sids:
                continue
            for a0, a1 in s.segments():
                for b0, b1 in segs:
                    hit = seg_interior_hit(a0, a1, b0, b1)
                    if hit is not None and hit[0] == "point":
                        # crossings with touched strands are allowed only if
                        # they are declared in the corresponding still
                        p = hit[1]
                        if not any(c.at == p for c in still.crossings):
                            raise Inconsistent(
                                f"event {ev.kind}@t={ev.time}: strand {s.id} meets changed geometry"
                            )


def _apply_corr(ids, corr):
    m = dict(corr)
    return {m.get(i, i) for i in ids}


def validate_movie(movie):
    """Full structural validation.  Returns a ValidationReport or raises."""
    if movie.n < 1:
        raise ValidationFailure("component count must be >= 1")
    if len(movie.component_orientations) != movie.n:
        raise ValidationFailure("orientation flag count mismatch")
    if any(f not in (1, -1) for f in movie.component_orientations):
        raise ValidationFailure("orientation flags must be +1 or -1")
    stills = movie.stills
    if not stills:
        raise ValidationFailure("no stills")
    if stills[0].strands or stills[-1].strands:
        raise OpenSurface("first and last stills must be empty")

    for st in stills:
        _check_still_geometry(st, movie.n)

    # strand component labels constant across stills
    comp_of = {}
    for st in stills:
        for s in st.strands:
            if comp_of.setdefault(s.id, s.component) != s.component:
                raise Inconsistent(f"strand {s.id} changes component")
            r = vsub(s.vertices[1], s.vertices[0])
            if cross2(r, s.dir) != 0 or dot2(r, s.dir) <= 0:
                raise Inconsistent(f"strand {s.id}: dir field disagrees with geometry")

    # events sorted, at most one between consecutive stills
    ev_times = [e.time for e in movie.events]
    if ev_times != sorted(ev_times) or len(set(ev_times)) != len(ev_times):
        raise Inconsistent("event times must strictly increase")
    still_times = [st.time for st in stills]
    slot_of = {}
    for e in movie.events:
        k = None
        for i in range(len(still_times) - 1):
            if still_times[i] < e.time < still_times[i + 1]:
                k = i
                break
        if k is None:
            raise Inconsistent(f"event at t={e.time} not between stills")
        if k in slot_of:
            raise Inconsistent(f"two events between stills {k} and {k+1}")
        slot_of[k] = e

    max_crossings = 0
    for i in range(len(stills) - 1):
        before, after = stills[i], stills[i + 1]
        ev = slot_of.get(i)
        max_crossings = max(max_crossings, len(before.crossings))
        _check_interstill(movie, before, after, ev)
    return ValidationReport(
        ok=True,
        n_stills=len(stills),
        n_events=len(movie.events),
        max_crossings=max_crossings,
        notes=("validated",),
    )


def _positions_consistent(before, after, ev, keep_ids, corr):
    """Crossing positions move linearly at the derived velocity."""
    m = dict(corr)
    dt = after.time - before.time
    for cid in keep_ids:
        c0 = before.crossing(cid)
        c1 = after.crossing(m.get(cid, cid))
        w = derived_velocity(c0)
        expect = vadd(c0.at, vscale(dt, w))
        if c1.at != expect:
            raise Inconsistent(
                f"crossing {cid}: position {c1.at} at t={after.time}, expected {expect}"
            )
        if ev is not None and ev.at is not None and cid in ev.crossings and ev.kind == "R3":
            mid = vadd(c0.at, vscale(ev.time - before.time, w))
            if mid != ev.at:
                raise Inconsistent(
                    f"R3@t={ev.time}: crossing {cid} misses the triple point"
                )


def _dying_at_event_point(before, ev, cids):
    """The event point is the midpoint of the destroyed crossings at the
    event time (a single point for a vertex tangency, the middle of the
    touching segment for an edge tangency)."""
    pts = []
    for cid in cids:
        c0 = before.crossing(cid)
        w = derived_velocity(c0)
        pts.append(vadd(c0.at, vscale(ev.time - before.time, w)))
    k = Rat(1, len(pts))
    mid = (k * sum(p[0] for p in pts), k * sum(p[1] for p in pts))
    if mid != ev.at:
        raise Inconsistent(
            f"{ev.kind}@t={ev.time}: event point {ev.at} is not the tangency midpoint {mid}"
        )


def _born_at_event_point(after, ev, cids):
    """Mirror of _dying_at_event_point for created crossings."""
    pts = []
    for cid in cids:
        c1 = after.crossing(cid)
        w = derived_velocity(c1)
        pts.append(vsub(c1.at, vscale(after.time - ev.time, w)))
    k = Rat(1, len(pts))
    mid = (k * sum(p[0] for p in pts), k * sum(p[1] for p in pts))
    if mid != ev.at:
        raise Inconsistent(
            f"{ev.kind}@t={ev.time}: event point {ev.at} is not the tangency midpoint {mid}"
        )


def _check_interstill(movie, before, after, ev):
    ids_b = {c.id for c in before.crossings}
    ids_a = {c.id for c in after.crossings}
    sids_b = {s.id for s in before.strands}
    sids_a = {s.id for s in after.strands}

    if ev is None:
        if sids_b != sids_a or _apply_corr(ids_b, ()) != ids_a:
            raise Inconsistent(
                f"stills t={before.time},{after.time} differ without an event"
            )
        for c in before.crossings:
            c2 = after.crossing(c.id)
            if (c2.over, c2.under) != (c.over, c.under):
                raise Inconsistent(f"crossing {c.id} changes strands without an event")
        _positions_consistent(before, after, None, ids_b, ())
        return

    corr = ev.corr
    if ev.kind == "Birth":
        (sid,) = ev.strands
        if sids_a != sids_b | {sid} or sid in sids_b:
            raise Inconsistent(f"Birth@t={ev.time}: strand sets differ wrongly")
        if ids_a != _apply_corr(ids_b, corr):
            raise Inconsistent(f"Birth@t={ev.time}: crossings changed")
        _check_event_locality(before, after, ev, {sid})
        _positions_consistent(before, after, ev, ids_b, corr)
    elif ev.kind == "Death":
        (sid,) = ev.strands
        if sids_a != sids_b - {sid} or sid not in sids_b:
            raise Inconsistent(f"Death@t={ev.time}: strand sets differ wrongly")
        for c in before.crossings:
            if sid in (c.over, c.under):
                raise Inconsistent(f"Death@t={ev.time}: strand {sid} still has crossings")
        if ids_a != _apply_corr(ids_b, corr):
            raise Inconsistent(f"Death@t={ev.time}: crossings changed")
        _check_event_locality(before, after, ev, {sid})
        _positions_consistent(before, after, ev, ids_b, corr)
    elif ev.kind in ("SaddleSplit", "SaddleMerge"):
        b, a = set(ev.strands), set(ev.strands_after)
        if ev.kind == "SaddleSplit" and not (len(b) == 1 and len(a) == 2):
            raise Inconsistent("SaddleSplit must be 1 strand -> 2")
        if ev.kind == "SaddleMerge" and not (len(b) == 2 and len(a) == 1):
            raise Inconsistent("SaddleMerge must be 2 strands -> 1")
        if not b <= sids_b or sids_a != (sids_b - b) | a:
            raise Inconsistent(f"{ev.kind}@t={ev.time}: strand sets differ wrongly")
        comps = {before.strand(s).component for s in b} | {after.strand(s).component for s in a}
        if len(comps) != 1:
            raise Inconsistent(f"{ev.kind}@t={ev.time}: saddle mixes components")
        if ids_a != _apply_corr(ids_b, corr):
            raise Inconsistent(f"{ev.kind}@t={ev.time}: crossings changed")
        _check_event_locality(before, after, ev, b | a)
        _positions_consistent(before, after, ev, ids_b, corr)
    elif ev.kind in ("R1Plus", "R1Minus"):
        (cid,) = ev.crossings
        create = ev.kind == "R1Plus"
        grow, shrink = (ids_a, ids_b) if create else (ids_b, ids_a)
        if grow != shrink | {cid} or cid in shrink:
            raise Inconsistent(f"{ev.kind}@t={ev.time}: crossing sets differ wrongly")
        st = after if create else before
        c = st.crossing(cid)
        over_comp = st.strand(c.over).component
        under_comp = st.strand(c.under).component
        if over_comp != under_comp:
            raise Inconsistent(f"{ev.kind}@t={ev.time}: kink must be a self-crossing")
        if sids_b != sids_a:
            raise Inconsistent(f"{ev.kind}@t={ev.time}: strand set changed")
        if ev.at is not None:
            if create:
                _born_at_event_point(after, ev, [cid])
            else:
                _dying_at_event_point(before, ev, [cid])
        _check_event_locality(before, after, ev, {c.over, c.under})
        _positions_consistent(before, after, ev, ids_b & ids_a, corr)
    elif ev.kind in ("R2Plus", "R2Minus"):
        c1, c2 = ev.crossings
        create = ev.kind == "R2Plus"
        grow, shrink = (ids_a, ids_b) if create else (ids_b, ids_a)
        if grow != shrink | {c1, c2} or c1 in shrink or c2 in shrink:
            raise Inconsistent(f"{ev.kind}@t={ev.time}: crossing sets differ wrongly")
        st = after if create else before
        a_, b_ = st.crossing(c1), st.crossing(c2)
        if (a_.over, a_.under) != (b_.over, b_.under):
            raise Inconsistent(
                f"{ev.kind}@t={ev.time}: pair must share the ordered strand pair"
            )
        # the pair must be cyclically adjacent along both strands (the
        # collapsing bigon carries no other crossing)
        for sid in {a_.over, a_.under}:
            order = _crossings_along_strand(st, sid)
            pos = [k for k, cid in enumerate(order) if cid in (c1, c2)]
            if len(pos) < 2:
                raise Inconsistent(f"{ev.kind}@t={ev.time}: pair not on strand {sid}")
            n = len(order)
            adjacent = any(
                (q - p == 1) or (p == 0 and q == n - 1)
                for p, q in zip(pos, pos[1:])
            )
            if not adjacent:
                raise Inconsistent(f"{ev.kind}@t={ev.time}: pair not adjacent on {sid}")
        if sids_b != sids_a:
            raise Inconsistent(f"{ev.kind}@t={ev.time}: strand set changed")
        if ev.at is not None:
            if create:
                _born_at_event_point(after, ev, [c1, c2])
            else:
                _dying_at_event_point(before, ev, [c1, c2])
        _check_event_locality(before, after, ev, {a_.over, a_.under})
        _positions_consistent(before, after, ev, ids_b & ids_a, corr)
    elif ev.kind == "R3":
        trio = set(ev.crossings)
        if len(trio) != 3 or _apply_corr(ids_b, corr) != ids_a or not trio <= ids_b:
            raise Inconsistent(f"R3@t={ev.time}: needs three persistent crossings")
        det = _r3_determinant(ev, movie.component_orientations)
        if det == 0:
            raise NonGeneric(f"R3@t={ev.time}: zero sheet-normal determinant")
        # heights: top over mid, top over bot, mid over bot
        for st in (before, after):
            cs = {cid: st.crossing(dict(corr).get(cid, cid) if st is after else cid) for cid in trio}
            comp = lambda c, side: st.strand(getattr(c, side)).component
            pair_heights = {}
            for c in cs.values():
                pair_heights[(comp(c, "over"), comp(c, "under"))] = c
            t_, m_, b_ = ev.top.component, ev.mid.component, ev.bot.component
            want = {(t_, m_), (t_, b_), (m_, b_)}
            if set(pair_heights) != want:
                raise Inconsistent(
                    f"R3@t={ev.time}: crossing heights disagree with top/mid/bot"
                )
        if sids_b != sids_a:
            raise Inconsistent(f"R3@t={ev.time}: strand set changed")
        _positions_consistent(before, after, ev, ids_b, corr)
    else:  # pragma: no cover
        raise Inconsistent(f"unknown event kind {ev.kind}")


# ---------------------------------------------------------------------------
# split union


def _bbox(movie):
    xs, ys = [], []
    for st in movie.stills:
        for s in st.strands:
            for p in s.vertices:
                xs.append(p[0])
                ys.append(p[1])
    if not xs:
        return (Rat(0), Rat(0), Rat(0), Rat(0))
    return (min(xs), min(ys), max(xs), max(ys))


def _translate_still(st, dx, dy, dt, tag):
    strands = [
        Strand(
            id=tag + s.id,
            component=s.component,
            dir=s.dir,
            vertices=tuple((p[0] + dx, p[1] + dy) for p in s.vertices),
        )
        for s in st.strands
    ]
    crossings = [
        Crossing(
            id=tag + c.id,
            over=tag + c.over,
            under=tag + c.under,
            at=(c.at[0] + dx, c.at[1] + dy),
            odir=c.odir,
            udir=c.udir,
            ovel=c.ovel,
            uvel=c.uvel,
        )
        for c in st.crossings
    ]
    return make_still(st.time + dt, strands, crossings)


def _translate_event(ev, dx, dy, dt, tag):
    return replace(
        ev,
        time=ev.time + dt,
        strands=tuple(tag + s for s in ev.strands),
        strands_after=tuple(tag + s for s in ev.strands_after),
        crossings=tuple(tag + c for c in ev.crossings),
        at=None if ev.at is None else (ev.at[0] + dx, ev.at[1] + dy),
        corr=tuple((tag + a, tag + b) for a, b in ev.corr),
    )


_bbox_cache = {}


def _bbox_cached(movie):
    key = id(movie)
    hit = _bbox_cache.get(key)
    if hit is None or hit[0] is not movie:
        hit = (movie, _bbox(movie))
        _bbox_cache[key] = hit
    return hit[1]


def split_union_many(movies):
    """Split union of several movies in one pass: the k-th movie is
    translated to its own horizontal band and appended on the time axis
    (each factor's empty boundary stills pad the others' timelines)."""
    if not movies:
        raise ValidationFailure("split union of nothing")
    n = movies[0].n
    orient = movies[0].component_orientations
    for m in movies:
        if m.n != n:
            raise ValidationFailure(f"component-count mismatch: {m.n} != {n}")
        if m.component_orientations != orient:
            raise ValidationFailure("orientation convention mismatch")
    if len(movies) == 1:
        return movies[0]
    stills, events = [], []
    y_cursor = Rat(0)
    t_cursor = Rat(0)
    for idx, m in enumerate(movies):
        _, ymin, _, ymax = _bbox_cached(m)
        dy = y_cursor - ymin
        dt = t_cursor - m.stills[0].time
        tag = f"u{idx}."
        stills += [_translate_still(st, Rat(0), dy, dt, tag) for st in m.stills]
        events += [_translate_event(ev, Rat(0), dy, dt, tag) for ev in m.events]
        y_cursor += (ymax - ymin) + 16
        t_cursor += (m.stills[-1].time - m.stills[0].time) + 1
    return Movie(
        n=n,
        stills=tuple(stills),
        events=tuple(events),
        component_orientations=orient,
    )


def split_union(a, b):
    """Split union: b is translated to a disjoint half-plane and appended
    on the time axis (its empty leading stills pad a's timeline)."""
    return split_union_many([a, b])


def reverse_orientations(movie):
    """Flip the surface orientation of every component."""
    return replace(
        movie,
        component_orientations=tuple(-f for f in movie.component_orientations),
    )
