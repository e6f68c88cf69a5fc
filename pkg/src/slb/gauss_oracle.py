"""Floating-point oracles, independent of the exact pipeline.

* ``gauss_linking``: the classical Gauss linking integral of two closed
  polylines, evaluated in closed form per segment pair and rounded to
  the nearest integer.  Cross-checks the exact push-off framing.

* ``degree_L``: the topological degree of the normalized-difference map

      L(x1, x2, x3) = ( (f(x1)-f(x2))/|f(x1)-f(x2)|,
                        (f(x2)-f(x3))/|f(x2)-f(x3)| )

  on the product of three sampled closed surfaces in R^4, computed by
  regular-value preimage counting: coarse grid scan, damped Gauss-Newton
  refinement, and Jacobian orientation signs.  Up to a global sign this
  equals the triple linking number of the three components.

Everything here is deterministic: regular values come from a fixed
low-discrepancy sequence whose starting index is SLB_SEED.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np


class OracleError(Exception):
    pass


class NotConverged(OracleError):
    pass


class NonRegular(OracleError):
    pass


class Unresolved(OracleError):
    pass


def _seed_start():
    try:
        return int(os.environ.get("SLB_SEED", "0"))
    except ValueError:
        return 0


# ---------------------------------------------------------------------------
# Gauss linking integral for polylines


def _segment_pair_solid_angle(a1, a2, b1, b2):
    """Gauss-integral contribution of one ordered segment pair.

    Closed form via the spherical quadrilateral spanned by the four
    connecting directions; equals the integral of the Gauss kernel over
    the two segments.
    """
    r13 = b1 - a1
    r14 = b2 - a1
    r23 = b1 - a2
    r24 = b2 - a2
    cross = np.cross
    n1 = cross(r13, r14)
    n2 = cross(r14, r24)
    n3 = cross(r24, r23)
    n4 = cross(r23, r13)
    norms = [np.linalg.norm(v) for v in (n1, n2, n3, n4)]
    if min(norms) < 1e-14:
        return 0.0  # coplanar pair contributes nothing
    n1, n2, n3, n4 = (v / s for v, s in zip((n1, n2, n3, n4), norms))
    clamp = lambda x: max(-1.0, min(1.0, x))
    omega = (
        math.asin(clamp(np.dot(n1, n2)))
        + math.asin(clamp(np.dot(n2, n3)))
        + math.asin(clamp(np.dot(n3, n4)))
        + math.asin(clamp(np.dot(n4, n1)))
    )
    # sign of the Gauss kernel det(t1, t2, p1 - p2) on this pair
    orient = np.dot(cross(a2 - a1, b2 - b1), -r13)
    sign = 1.0 if orient > 0 else -1.0 if orient < 0 else 0.0
    return omega * sign / (4.0 * math.pi)


def gauss_linking(c1, c2, tol=0.1):
    """Linking number of two disjoint closed polylines in R^3.

    Raises NotConverged when the double sum is farther than ``tol``
    from an integer.
    """
    P = np.asarray(c1, dtype=float)
    Q = np.asarray(c2, dtype=float)
    if P.ndim != 2 or P.shape[1] != 3 or Q.ndim != 2 or Q.shape[1] != 3:
        raise OracleError("polylines must be lists of 3D points")
    total = 0.0
    nP, nQ = len(P), len(Q)
    for i in range(nP):
        a1, a2 = P[i], P[(i + 1) % nP]
        for j in range(nQ):
            b1, b2 = Q[j], Q[(j + 1) % nQ]
            total += _segment_pair_solid_angle(a1, a2, b1, b2)
    nearest = round(total)
    if abs(total - nearest) > tol:
        raise NotConverged(f"Gauss sum {total} is not close to an integer")
    return int(nearest)


# ---------------------------------------------------------------------------
# sampled surfaces and the degree of L


@dataclass
class SurfaceMesh:
    """A sampled closed parametrized surface in R^4.

    vertices has shape (nu, nv, 4) over the periodic grid
    (s, t) in [0,1)^2; orientation flips the domain orientation.
    """

    component: int
    vertices: np.ndarray
    orientation: int = 1

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        if self.vertices.ndim != 3 or self.vertices.shape[2] != 4:
            raise OracleError("vertices must have shape (nu, nv, 4)")
        if self.orientation not in (1, -1):
            raise OracleError("orientation must be +1 or -1")
        nu, nv = self.vertices.shape[:2]
        # central-difference partial derivative estimates per sample
        self.du = (np.roll(self.vertices, -1, axis=0) - np.roll(self.vertices, 1, axis=0)) * (nu / 2.0)
        self.dv = (np.roll(self.vertices, -1, axis=1) - np.roll(self.vertices, 1, axis=1)) * (nv / 2.0)

    @property
    def shape(self):
        return self.vertices.shape[:2]

    def eval(self, s, t):
        """Periodic bilinear interpolation; s, t arrays in [0,1)."""
        nu, nv = self.shape
        s = np.asarray(s, dtype=float) % 1.0
        t = np.asarray(t, dtype=float) % 1.0
        x = s * nu
        y = t * nv
        i0 = np.floor(x).astype(int) % nu
        j0 = np.floor(y).astype(int) % nv
        i1 = (i0 + 1) % nu
        j1 = (j0 + 1) % nv
        fx = (x - np.floor(x))[..., None]
        fy = (y - np.floor(y))[..., None]
        v = self.vertices
        return (
            v[i0, j0] * (1 - fx) * (1 - fy)
            + v[i1, j0] * fx * (1 - fy)
            + v[i0, j1] * (1 - fx) * fy
            + v[i1, j1] * fx * fy
        )


def min_pairwise_distance(m1, m2):
    a = m1.vertices.reshape(-1, 4)
    b = m2.vertices.reshape(-1, 4)
    d = np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(-1))
    return float(d.min())


def evaluate_L(x1, x2, x3):
    """The pair of normalized difference vectors for three points in R^4."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    x3 = np.asarray(x3, dtype=float)
    d1 = x1 - x2
    d2 = x2 - x3
    n1 = np.linalg.norm(d1, axis=-1, keepdims=True)
    n2 = np.linalg.norm(d2, axis=-1, keepdims=True)
    if np.any(n1 == 0) or np.any(n2 == 0):
        raise OracleError("coincident points between components")
    return d1 / n1, d2 / n2


@dataclass(frozen=True)
class RegularValue:
    p: tuple
    q: tuple

    def __post_init__(self):
        for v in (self.p, self.q):
            if abs(math.fsum(x * x for x in v) - 1.0) > 1e-12:
                raise OracleError("regular value must be unit within 1e-12")


def _halton(index, base):
    f, r = 1.0, 0.0
    i = index
    while i > 0:
        f /= base
        r += f * (i % base)
        i //= base
    return r


def regular_value_sequence(start=None):
    """Deterministic low-discrepancy points on S^3 x S^3."""
    if start is None:
        start = _seed_start()
    idx = start + 1
    while True:
        raw = np.array(
            [_halton(idx, b) for b in (2, 3, 5, 7, 11, 13, 17, 19)], dtype=float
        )
        g1 = _gaussianize(raw[:4])
        g2 = _gaussianize(raw[4:])
        if np.linalg.norm(g1) > 1e-3 and np.linalg.norm(g2) > 1e-3:
            p = g1 / np.linalg.norm(g1)
            q = g2 / np.linalg.norm(g2)
            yield RegularValue(tuple(p), tuple(q))
        idx += 1


def _gaussianize(u):
    """Box-Muller on pairs, mapping (0,1)^4 -> R^4."""
    u = np.clip(u, 1e-9, 1 - 1e-9)
    z = np.empty(4)
    z[0] = math.sqrt(-2 * math.log(u[0])) * math.cos(2 * math.pi * u[1])
    z[1] = math.sqrt(-2 * math.log(u[0])) * math.sin(2 * math.pi * u[1])
    z[2] = math.sqrt(-2 * math.log(u[2])) * math.cos(2 * math.pi * u[3])
    z[3] = math.sqrt(-2 * math.log(u[2])) * math.sin(2 * math.pi * u[3])
    return z


@dataclass
class DegreeParams:
    coarse: int = 10  # grid points per parameter axis
    top_k: int = 4096  # candidate cells kept for refinement
    newton_steps: int = 80
    newton_tol: float = 1e-10
    min_jacobian: float = 1e-6
    dedupe_tol: float = 5e-4


def _tangent_basis(p):
    """Deterministic orthonormal basis of the tangent space at p in S^3."""
    basis = []
    for k in range(4):
        e = np.zeros(4)
        e[k] = 1.0
        v = e - np.dot(e, p) * p
        for b in basis:
            v = v - np.dot(v, b) * b
        nrm = np.linalg.norm(v)
        if nrm > 1e-8:
            basis.append(v / nrm)
        if len(basis) == 3:
            break
    if len(basis) != 3:
        raise NonRegular("degenerate tangent basis")
    return np.stack(basis, axis=1)  # 4x3


def _residual_batch(meshes, rv, theta):
    """Residual of L - rv for a batch of parameter points (B, 6) -> (B, 8)."""
    pts = [m.eval(theta[:, 2 * i], theta[:, 2 * i + 1]) for i, m in enumerate(meshes)]
    l1, l2 = evaluate_L(pts[0], pts[1], pts[2])
    return np.concatenate([l1 - np.asarray(rv.p), l2 - np.asarray(rv.q)], axis=1)


def _jacobian_batch(meshes, rv, theta, h=2e-7):
    """Central-difference Jacobians for a batch: (B, 8, 6)."""
    B = theta.shape[0]
    J = np.zeros((B, 8, 6))
    for k in range(6):
        tp = theta.copy()
        tm = theta.copy()
        tp[:, k] += h
        tm[:, k] -= h
        J[:, :, k] = (_residual_batch(meshes, rv, tp) - _residual_batch(meshes, rv, tm)) / (2 * h)
    return J


def _root_signs(meshes, rv, roots, params):
    """Orientation sign of each refined root."""
    if not len(roots):
        return []
    J = _jacobian_batch(meshes, rv, roots)
    Bp = _tangent_basis(np.asarray(rv.p))
    Bq = _tangent_basis(np.asarray(rv.q))
    signs = []
    flip = 1
    for m in meshes:
        flip *= m.orientation
    for k in range(len(roots)):
        M = np.vstack([Bp.T @ J[k, :4, :], Bq.T @ J[k, 4:, :]])
        det = np.linalg.det(M)
        if abs(det) < params.min_jacobian:
            raise NonRegular(f"Jacobian determinant {det} below threshold")
        signs.append((1 if det > 0 else -1) * flip)
    return signs


def _coarse_candidates(meshes, rv, params):
    """The top-k best cells of the coarse product grid."""
    g = params.coarse
    axes = [np.arange(g) / g + 0.5 / g for _ in range(6)]
    grids = np.meshgrid(*axes, indexing="ij")
    theta = np.stack([a.ravel() for a in grids], axis=1)
    err = np.linalg.norm(_residual_batch(meshes, rv, theta), axis=1)
    k = min(params.top_k, len(err))
    idx = np.argpartition(err, k - 1)[:k]
    return theta[idx]


def _refine_candidates(meshes, rv, seeds, params):
    """Damped batched Gauss-Newton from every seed; returns unique roots."""
    theta = np.asarray(seeds, dtype=float).copy()
    lim = 0.6 / params.coarse
    for _ in range(params.newton_steps):
        r = _residual_batch(meshes, rv, theta)
        norms = np.linalg.norm(r, axis=1)
        if np.all(norms < params.newton_tol):
            break
        J = _jacobian_batch(meshes, rv, theta)
        JT = np.transpose(J, (0, 2, 1))
        A = JT @ J + 1e-12 * np.eye(6)[None]
        b = -(JT @ r[:, :, None])
        step = np.linalg.solve(A, b)[:, :, 0]
        mags = np.max(np.abs(step), axis=1, keepdims=True)
        scale = np.minimum(1.0, lim / np.maximum(mags, 1e-15))
        theta = (theta + step * scale) % 1.0
    r = np.linalg.norm(_residual_batch(meshes, rv, theta), axis=1)
    good = theta[r < 1e-8]
    unique = []
    for th in good:
        if not any(
            np.max(np.minimum(np.abs(th - u), 1 - np.abs(th - u))) < params.dedupe_tol
            for u in unique
        ):
            unique.append(th)
    return np.asarray(unique)


def degree_L(m1, m2, m3, rv=None, params=None, retries=3):
    """Signed count of preimages of a regular value of L.

    Retries with the next regular value in the deterministic sequence
    whenever a root fails the Jacobian conditioning test.
    """
    params = params or DegreeParams()
    meshes = (m1, m2, m3)
    for a in range(3):
        for b in range(a + 1, 3):
            if min_pairwise_distance(meshes[a], meshes[b]) < 1e-6:
                raise OracleError("mesh components are not pairwise disjoint")
    seq = regular_value_sequence()
    values = [rv] if rv is not None else []
    attempts = 0
    while True:
        value = values.pop(0) if values else next(seq)
        attempts += 1
        try:
            seeds = _coarse_candidates(meshes, value, params)
            roots = _refine_candidates(meshes, value, seeds, params)
            return sum(_root_signs(meshes, value, roots, params))
        except NonRegular:
            if attempts > retries:
                raise
            continue


# ---------------------------------------------------------------------------
# mesh builders for the beaded Hopf configuration, and .mesh file IO


def _frame(theta):
    e1 = np.array([math.cos(theta), 0.0, 0.0, math.sin(theta)])
    e2 = np.array([0.0, 1.0, 0.0, 0.0])
    e3 = np.array([0.0, 0.0, 1.0, 0.0])
    return e1, e2, e3


def hopf_pair_meshes(n1=(64, 32), n2=(64, 32), R=6.0, r1=1.0, r2=0.5, comps=(1, 2)):
    """Sampled tori of a standard Hopf 2-link: both sweep the same core
    circle, the second threading the meridian disk of the first."""
    nu, nv = n1
    grid = np.zeros((nu, nv, 4))
    for a in range(nu):
        th = 2 * math.pi * a / nu
        e1, e2, e3 = _frame(th)
        c = np.array([R * math.cos(th), 0.0, 0.0, R * math.sin(th)])
        for b in range(nv):
            ph = 2 * math.pi * b / nv
            grid[a, b] = c + r1 * (math.cos(ph) * e1 + math.sin(ph) * e2)
    t1 = SurfaceMesh(component=comps[0], vertices=grid)
    nu, nv = n2
    grid = np.zeros((nu, nv, 4))
    for a in range(nu):
        th = 2 * math.pi * a / nu
        e1, e2, e3 = _frame(th)
        c = np.array([R * math.cos(th), 0.0, 0.0, R * math.sin(th)])
        for b in range(nv):
            ph = 2 * math.pi * b / nv
            grid[a, b] = c + (1.0 + r2 * math.cos(ph)) * e2 + r2 * math.sin(ph) * e3
    t2 = SurfaceMesh(component=comps[1], vertices=grid)
    return t1, t2


def bead_mesh(n=(48, 24), R=6.0, rb=1.7, theta0=0.9, comp=3):
    """Meridian 2-sphere of the core circle at angle theta0."""
    nu, nv = n
    e1, e2, e3 = _frame(theta0)
    c = np.array([R * math.cos(theta0), 0.0, 0.0, R * math.sin(theta0)])
    grid = np.zeros((nu, nv, 4))
    for a in range(nu):
        ph = 2 * math.pi * a / nu
        for b in range(nv):
            ps = math.pi * (b + 0.5) / nv
            grid[a, b] = c + rb * (
                math.sin(ps) * math.cos(ph) * e1
                + math.sin(ps) * math.sin(ph) * e2
                + math.cos(ps) * e3
            )
    return SurfaceMesh(component=comp, vertices=grid)


def split_tori_meshes(n=(32, 16)):
    """Three pairwise-distant round tori (degree zero configuration)."""
    out = []
    for c, offset in ((1, 0.0), (2, 40.0), (3, 80.0)):
        nu, nv = n
        grid = np.zeros((nu, nv, 4))
        for a in range(nu):
            th = 2 * math.pi * a / nu
            for b in range(nv):
                ph = 2 * math.pi * b / nv
                grid[a, b] = np.array(
                    [
                        (3 + math.cos(ph)) * math.cos(th) + offset,
                        (3 + math.cos(ph)) * math.sin(th),
                        math.sin(ph),
                        0.0,
                    ]
                )
        out.append(SurfaceMesh(component=c, vertices=grid))
    return tuple(out)


def write_mesh(mesh, path):
    nu, nv = mesh.shape
    with open(path, "w") as fh:
        fh.write(f"component {mesh.component}\n")
        fh.write(f"grid {nu} {nv}\n")
        fh.write(f"orientation {'+1' if mesh.orientation == 1 else '-1'}\n")
        for a in range(nu):
            for b in range(nv):
                s = a / nu
                t = b / nv
                x, y, z, w = mesh.vertices[a, b]
                fh.write(f"{s:.12g} {t:.12g} {x:.17g} {y:.17g} {z:.17g} {w:.17g}\n")


def read_mesh(path):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) < 4 or not lines[0].startswith("component "):
        raise OracleError(f"{path}: not a .mesh file")
    comp = int(lines[0].split()[1])
    nu, nv = (int(x) for x in lines[1].split()[1:3])
    orientation = 1 if lines[2].split()[1] == "+1" else -1
    rows = lines[3:]
    if len(rows) != nu * nv:
        raise OracleError(f"{path}: expected {nu * nv} sample rows, got {len(rows)}")
    grid = np.zeros((nu, nv, 4))
    for row in rows:
        vals = [float(x) for x in row.split()]
        if len(vals) != 6:
            raise OracleError(f"{path}: bad sample row {row!r}")
        s, t = vals[0], vals[1]
        a = int(round(s * nu)) % nu
        b = int(round(t * nv)) % nv
        grid[a, b] = vals[2:]
    return SurfaceMesh(component=comp, vertices=grid, orientation=orientation)
