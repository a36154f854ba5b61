"""Symmetric convex polytopes and their combinatorial/metric constants.

A :class:`Polytope` stores its vertex (V) and facet (H) descriptions side
by side together with the face lattice.  Hulls are computed with Qhull
through :mod:`scipy.spatial`; face inradii are Chebyshev-center linear
programs solved with :func:`scipy.optimize.linprog`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy.optimize import linprog, nnls
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .errors import (
    BadDirection,
    DegenerateInput,
    DimensionMismatch,
    DomainError,
    LPFailure,
    NoSamples,
    NotSymmetric,
    PreconditionViolation,
    UnsupportedDimension,
)

__all__ = [
    "Polytope",
    "GeometricConstants",
    "Lemma1Result",
    "build_polytope",
    "convex_volume",
    "support",
    "volume",
    "normalize_unit_volume",
    "polar",
    "vertex_count_above",
    "second_support",
    "distance_to_bad",
    "distances_to_bad",
    "geometric_constants",
    "verify_lemma1",
    "random_directions",
]

SYMMETRY_TOL = 1e-12
TIE_TOL = 1e-10
UNIT_TOL = 1e-12
# families whose face lattice is trusted in every dimension
_FAMILIES = ("cube", "cross", "polygon")
_DUAL_FAMILY = {"cube": "cross", "cross": "cube", "polygon": "polygon"}


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Polytope:
    """Origin-symmetric convex polytope in R^n.

    Attributes
    ----------
    dim : int
    vertices : ndarray, shape (M, n)
    normals : ndarray, shape (F, n)
        Unit outward facet normals.
    offsets : ndarray, shape (F,)
        Facet offsets ``c`` with ``<u, x> <= c``; all positive.
    facet_vertices : tuple of tuple of int
        Vertex indices lying on each facet.
    edges : tuple of (int, int)
    faces : dict or None
        ``faces[k]`` lists the k-faces (as sorted vertex-index tuples) for
        ``1 <= k <= n-1``.  ``None`` when the lattice was not enumerated.
    volume : float
    family : str or None
        Name of the built-in family the polytope belongs to, if any.
    """

    dim: int
    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    facet_vertices: tuple
    edges: tuple
    faces: dict | None
    volume: float
    family: str | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def facets(self):
        """List of ``(unit normal, offset)`` pairs."""
        return [(u, float(c)) for u, c in zip(self.normals, self.offsets)]

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def HK(self):
        """Circumradius ``max_theta h(theta) = max_i |v_i|``."""
        return float(np.max(np.linalg.norm(self.vertices, axis=1)))

    @cached_property
    def edge_cones(self):
        # B_K is the union of the normal cones of the edges: the normal cone
        # of any higher-dimensional face is a face of an edge's cone.
        incidence = self._incidence
        cones = []
        for i, j in self.edges:
            gens = self.normals[incidence[i] & incidence[j]]
            cones.append(gens)
        return cones

    @cached_property
    def _incidence(self):
        inc = np.zeros((self.n_vertices, len(self.offsets)), dtype=bool)
        for f, verts in enumerate(self.facet_vertices):
            inc[list(verts), f] = True
        return inc

    def __repr__(self):
        fam = f", family={self.family!r}" if self.family else ""
        return (
            f"Polytope(dim={self.dim}, n_vertices={self.n_vertices}, "
            f"n_facets={len(self.offsets)}, volume={self.volume:.12g}{fam})"
        )


class GeometricConstants(NamedTuple):
    r0: float
    h0: float
    HK: float
    alpha: float


class Lemma1Result(NamedTuple):
    observed_sup: float
    bound: float
    passed: bool
    n_used: int


# --------------------------------------------------------------------------
# volumes of point clouds


def _affine_frame(points, k):
    """Orthonormal coordinates of ``points`` in their k-dimensional affine hull."""
    center = points.mean(axis=0)
    _, _, vt = np.linalg.svd(points - center)
    return (points - center) @ vt[:k].T


def convex_volume(points):
    """k-volume of the convex hull of points in R^k (k >= 1).

    Fan triangulation from the centroid over the hull's boundary simplices;
    each simplex contributes ``|det| / k!``.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    k = pts.shape[1]
    if k == 1:
        return float(pts.max() - pts.min())
    hull = ConvexHull(pts)
    center = pts[hull.vertices].mean(axis=0)
    simp = pts[hull.simplices] - center  # (S, k, k)
    return float(np.abs(np.linalg.det(simp)).sum() / math.factorial(k))


# --------------------------------------------------------------------------
# construction


def _dedupe(pts, tol):
    tree = cKDTree(pts)
    drop = set()
    for i, j in sorted(tree.query_pairs(tol)):
        if i not in drop:
            drop.add(j)
    keep = [i for i in range(len(pts)) if i not in drop]
    return pts[keep]


def _affine_dim(pts, tol):
    if len(pts) <= 1:
        return 0
    sv = np.linalg.svd(pts[1:] - pts[0], compute_uv=False)
    return int(np.sum(sv > tol * max(1.0, sv[0])))


def _merge_facets(hull, verts, scale):
    """Group Qhull's simplicial facets into true facets; return vertex sets."""
    groups = []
    for eq in hull.equations:
        u, c = eq[:-1], -eq[-1]
        for g in groups:
            if g[0] @ u > 1.0 - 1e-9 and abs(g[1] - c) <= 1e-9 * scale:
                break
        else:
            groups.append((u, c))
    facet_sets = []
    for u, c in groups:
        on = np.flatnonzero(np.abs(verts @ u - c) <= 1e-9 * scale)
        facet_sets.append(on)
    return facet_sets


def _fit_facet(pts):
    center = pts.mean(axis=0)
    _, _, vt = np.linalg.svd(pts - center)
    u = vt[-1]
    if u @ center < 0:
        u = -u
    return u, float(np.mean(pts @ u))


def _face_lattice(n, facet_sets, verts, tol):
    faces = {n - 1: sorted(tuple(sorted(int(i) for i in s)) for s in facet_sets)}
    for k in range(n - 1, 1, -1):
        lower = set()
        upper = faces[k]
        for a in range(len(upper)):
            sa = set(upper[a])
            for b in range(a + 1, len(upper)):
                inter = sa.intersection(upper[b])
                if len(inter) < k:
                    continue
                t = tuple(sorted(inter))
                if t not in lower and _affine_dim(verts[list(t)], tol) == k - 1:
                    lower.add(t)
        faces[k - 1] = sorted(lower)
    return faces


def _edges_from_incidence(n, facet_sets, normals, n_vertices):
    inc = np.zeros((n_vertices, len(facet_sets)), dtype=bool)
    for f, s in enumerate(facet_sets):
        inc[s, f] = True
    edges = []
    for i in range(n_vertices):
        for j in range(i + 1, n_vertices):
            common = inc[i] & inc[j]
            if common.sum() >= n - 1 and np.linalg.matrix_rank(normals[common], tol=1e-9) == n - 1:
                edges.append((i, j))
    return edges


def build_polytope(points, family=None):
    """Build a symmetric polytope as the convex hull of ``points``.

    Duplicate and non-extreme points are dropped.  The full face lattice is
    enumerated for ``n <= 3`` and for the built-in families; otherwise only
    facets and edges are available.

    Raises
    ------
    DegenerateInput
        If the points do not span R^n.
    NotSymmetric
        If some vertex has no antipodal partner.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] < 2:
        raise DegenerateInput("points must be an (N, n) array with n >= 2")
    n = pts.shape[1]
    scale = float(np.max(np.abs(pts))) if pts.size else 0.0
    if scale == 0.0 or len(pts) < 2 * n or np.linalg.matrix_rank(pts, tol=1e-12 * scale) < n:
        raise DegenerateInput(f"points do not span R^{n}")
    pts = _dedupe(pts, 1e-12 * scale)
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:  # pragma: no cover - rank check catches this first
        raise DegenerateInput(str(exc)) from exc

    cand = pts[np.unique(hull.simplices)]
    facet_sets = _merge_facets(hull, cand, scale)
    raw_normals = np.array([_fit_facet(cand[s])[0] for s in facet_sets])

    # A vertex is extreme iff the normals of its facets span R^n.
    extreme = []
    for i in range(len(cand)):
        on = [f for f, s in enumerate(facet_sets) if i in set(s.tolist())]
        if np.linalg.matrix_rank(raw_normals[on], tol=1e-9) == n:
            extreme.append(i)
    verts = cand[extreme]

    tree = cKDTree(verts)
    dist, _ = tree.query(-verts)
    if np.any(dist > SYMMETRY_TOL * scale):
        bad = verts[int(np.argmax(dist))]
        raise NotSymmetric(f"vertex {bad.tolist()} has no antipodal partner")

    facet_sets = [np.flatnonzero(np.abs(verts @ u - c) <= 1e-9 * scale)
                  for u, c in (_fit_facet(cand[s]) for s in facet_sets)]
    fits = [_fit_facet(verts[s]) for s in facet_sets]
    normals = np.array([u for u, _ in fits])
    offsets = np.array([c for _, c in fits])
    if np.any(offsets <= 0):
        raise DegenerateInput("origin is not interior")
    heights = verts @ normals.T
    if np.any(np.abs(heights.max(axis=0) - offsets) > 1e-10 * np.maximum(offsets, scale)):
        raise DegenerateInput("facet description is inconsistent with the vertices")

    if n <= 3 or family in _FAMILIES:
        faces = _face_lattice(n, facet_sets, verts, 1e-9)
        edges = faces[1]
    else:
        faces = None
        edges = _edges_from_incidence(n, facet_sets, normals, len(verts))

    vol = 0.0
    for (u, c), s in zip(fits, facet_sets):
        area = convex_volume(_affine_frame(verts[s], n - 1))
        vol += c * area / n

    return Polytope(
        dim=n,
        vertices=_frozen(verts),
        normals=_frozen(normals),
        offsets=_frozen(offsets),
        facet_vertices=tuple(tuple(int(i) for i in s) for s in facet_sets),
        edges=tuple(tuple(e) for e in edges),
        faces=faces,
        volume=float(vol),
        family=family,
    )


# --------------------------------------------------------------------------
# basic metric operations


def _unit(P, theta):
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (P.dim,):
        raise DimensionMismatch(f"direction has shape {theta.shape}, expected ({P.dim},)")
    if abs(np.linalg.norm(theta) - 1.0) > UNIT_TOL:
        raise DomainError("direction must be a unit vector")
    return theta


def support(P, theta):
    """Support function ``h_P(theta) = max_i <v_i, theta>``."""
    theta = _unit(P, theta)
    return float(np.max(P.vertices @ theta))


def volume(P):
    """Volume of ``P`` (fan triangulation from the origin, cached at build)."""
    return P.volume


def normalize_unit_volume(P):
    """Return ``lambda * P`` with ``lambda = |P|^{-1/n}`` so the result has volume 1."""
    lam = P.volume ** (-1.0 / P.dim)
    return replace(
        P,
        vertices=_frozen(P.vertices * lam),
        offsets=_frozen(P.offsets * lam),
        volume=P.volume * lam**P.dim,
        _cache={},
    )


def polar(P):
    """Polar polytope ``{y : <x, y> <= 1 for all x in P}``.

    Vertices of the polar are ``u_j / c_j`` for the facets ``(u_j, c_j)``.
    """
    if P.dim > 3 and P.family not in _FAMILIES:
        raise UnsupportedDimension("polar of a general polytope is limited to n <= 3")
    verts = P.normals / P.offsets[:, None]
    return build_polytope(verts, family=_DUAL_FAMILY.get(P.family))


def vertex_count_above(P, theta, s):
    """Number of vertices with height ``<v_i, theta> >= s`` (tolerance 1e-12 H_K)."""
    theta = _unit(P, theta)
    heights = P.vertices @ theta
    return int(np.count_nonzero(heights >= s - 1e-12 * P.HK))


def second_support(P, theta):
    """Second-largest vertex height ``s_theta`` for a direction with a unique top vertex.

    Raises
    ------
    BadDirection
        If the two largest heights tie within ``1e-10 * H_K``.
    """
    theta = _unit(P, theta)
    heights = np.sort(P.vertices @ theta)
    if heights[-1] - heights[-2] <= TIE_TOL * P.HK:
        raise BadDirection("maximum vertex height is attained more than once")
    return max(float(heights[-2]), 0.0)


def _chord(thetas, dirs):
    """Row-wise ``|theta - dir / |dir||``; computed from the difference, not the cosine."""
    nrm = np.linalg.norm(dirs, axis=1)
    out = np.full(len(thetas), np.inf)
    ok = nrm > 0
    out[ok] = np.linalg.norm(thetas[ok] - dirs[ok] / nrm[ok, None], axis=1)
    return out


def _cone_distances(gens, thetas):
    """Distance from each unit vector in ``thetas`` to ``cone(gens) ∩ S^{n-1}``."""
    k = len(gens)
    proj = thetas @ gens.T  # (m, k)
    best_ray = _chord(thetas, gens[np.argmax(proj, axis=1)])
    if k == 1:
        return best_ray
    if k == 2:
        gram = gens @ gens.T
        lam = np.linalg.solve(gram, proj.T).T
        inside = np.all(lam >= 0.0, axis=1)
        d_in = _chord(thetas, lam @ gens)
        return np.where(inside, np.minimum(d_in, best_ray), best_ray)
    out = best_ray.copy()
    for i, th in enumerate(thetas):
        lam, _ = nnls(gens.T, th)
        out[i] = min(out[i], float(_chord(th[None, :], (gens.T @ lam)[None, :])[0]))
    return out


def distances_to_bad(P, thetas):
    """Vectorized :func:`distance_to_bad` for an (m, n) array of unit vectors."""
    if P.dim > 3 and P.faces is None:
        raise UnsupportedDimension("bad-set distance needs the face lattice")
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    best = np.full(len(thetas), np.inf)
    for gens in P.edge_cones:
        np.minimum(best, _cone_distances(gens, thetas), out=best)
    return best


def distance_to_bad(P, theta):
    """Euclidean distance from ``theta`` to the bad set ``B_K`` on the sphere.

    ``B_K`` (directions with a tied top vertex) is the union of the normal
    cones of the faces of dimension >= 1, intersected with the sphere.
    """
    theta = _unit(P, theta)
    return float(distances_to_bad(P, theta[None, :])[0])


# --------------------------------------------------------------------------
# constants


def _face_inradius(points, k):
    coords = _affine_frame(points, k)
    if k == 1:
        return 0.5 * float(coords.max() - coords.min())
    hull = ConvexHull(coords)
    A = hull.equations[:, :k]
    b = -hull.equations[:, k]
    A = A / np.linalg.norm(A, axis=1)[:, None]
    c = np.zeros(k + 1)
    c[-1] = -1.0
    res = linprog(
        c,
        A_ub=np.hstack([A, np.ones((len(b), 1))]),
        b_ub=b,
        bounds=[(None, None)] * k + [(0, None)],
        method="highs",
    )
    if not res.success or res.x[-1] <= 0:
        raise LPFailure(f"Chebyshev-center LP failed: {res.message}")
    return float(res.x[-1])


def geometric_constants(P):
    """Compute ``(r0, h0, HK, alpha)`` for ``P``.

    ``r0`` is the smallest inradius of a k-face (1 <= k <= n-1) within its
    affine hull; ``h0`` is the largest support value over the bad set, which
    is attained at a facet normal and therefore equals the largest facet
    offset; ``HK`` is the circumradius; ``alpha = 4 (n-1) h0 / r0``.
    """
    if "constants" in P._cache:
        return P._cache["constants"]
    if P.faces is None:
        raise UnsupportedDimension("geometric constants need the face lattice")
    n = P.dim
    r0 = min(
        _face_inradius(P.vertices[list(face)], k)
        for k in range(1, n)
        for face in P.faces[k]
    )
    h0 = float(P.offsets.max())
    HK = P.HK
    consts = GeometricConstants(r0=r0, h0=h0, HK=HK, alpha=4.0 * (n - 1) * h0 / r0)
    P._cache["constants"] = consts
    return consts


def random_directions(n, m, seed):
    """``m`` seeded directions uniformly distributed on S^{n-1}."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((m, n))
    return g / np.linalg.norm(g, axis=1)[:, None]


def verify_lemma1(P, delta, m, seed):
    """Check ``sup s_theta / h(theta) <= 1 - delta r0 / (2 h0)`` off ``A(delta)``.

    Directions within ``delta`` of the bad set are discarded; the supremum is
    estimated from the remaining samples.
    """
    consts = geometric_constants(P)
    if not (0.0 < delta <= consts.h0 / consts.HK):
        raise PreconditionViolation(
            f"delta must lie in (0, h0/HK] = (0, {consts.h0 / consts.HK:.6g}], got {delta!r}"
        )
    if m < 1:
        raise PreconditionViolation("need at least one sample")
    thetas = random_directions(P.dim, m, seed)
    keep = thetas[distances_to_bad(P, thetas) >= delta]
    if len(keep) == 0:
        raise NoSamples("every sampled direction fell inside A(delta)")
    heights = np.sort(keep @ P.vertices.T, axis=1)
    ratios = np.maximum(heights[:, -2], 0.0) / heights[:, -1]
    observed = float(ratios.max())
    bound = 1.0 - delta * consts.r0 / (2.0 * consts.h0)
    return Lemma1Result(observed, bound, observed <= bound + 1e-12, len(keep))
