"""Quadrature rules on the unit sphere S^{n-1}.

* ``n = 2``: composite Simpson in the angle, with panel boundaries placed at
  caller-supplied kink directions so piecewise-smooth integrands keep
  fourth-order convergence.
* ``n = 3``: icosahedral geodesic subdivision; one node per spherical
  triangle (normalized centroid) weighted by the exact triangle area.
* ``n >= 4``: scrambled Sobol points pushed to the sphere through the
  Gaussian quantile map, symmetrized, equal weights.

Every rule is antipodally closed: ``-theta`` is a node with the same weight
as ``theta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm, qmc

from .special import sphere_area

__all__ = ["QuadratureRule", "build_quadrature", "icosahedron"]


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and positive weights on S^{n-1}; weights sum to ``|S^{n-1}|``."""

    dim: int
    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    resolution: int
    seed: int = 0
    kinks: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    _coarse: object = field(default=None, repr=False)

    def __len__(self):
        return len(self.weights)

    @property
    def order(self):
        """Nominal convergence order in the mesh width (for Richardson estimates)."""
        return {"angular-composite": 4, "geodesic-subdivision": 2}.get(self.kind, 0)

    def coarse(self):
        """The next coarser rule of the same family, or ``None``."""
        if self._coarse is not None:
            return self._coarse
        if self.kind == "geodesic-subdivision" and self.resolution > 0:
            return build_quadrature(3, self.resolution - 1)
        return None


# --------------------------------------------------------------------------
# n = 2


def _allocate(lengths, total, quantum):
    """Split ``total`` subintervals over panels, each a positive multiple of ``quantum``."""
    share = lengths / lengths.sum() * total
    m = np.maximum(quantum, quantum * np.round(share / quantum)).astype(int)
    diff = total - m.sum()
    order = np.argsort(-lengths)
    i = 0
    while diff != 0 and i < 10 * len(m):
        j = order[i % len(m)]
        step = quantum if diff > 0 else -quantum
        if m[j] + step >= quantum:
            m[j] += step
            diff -= step
        i += 1
    return m


def _simpson_circle(boundaries, m):
    """Simpson nodes/weights on [b_0, b_0 + pi) for panels with m_j subintervals."""
    ext = np.append(boundaries, boundaries[0] + math.pi)
    angles, weights = [], []
    steps = (ext[1:] - ext[:-1]) / m
    for j in range(len(m)):
        d = steps[j]
        i = np.arange(m[j])
        angles.append(ext[j] + i * d)
        w = np.where(i % 2 == 1, 4.0, 2.0) * d / 3.0
        w[0] = (d + steps[j - 1]) / 3.0  # shared with the previous panel
        weights.append(w)
    return np.concatenate(angles), np.concatenate(weights)


def _circle_rule(resolution, kinks):
    if resolution < 4 or resolution % 4:
        raise ValueError("planar rules need a resolution divisible by 4")
    half = resolution // 2
    kinks = np.asarray(kinks, dtype=float).reshape(-1, 2)
    if len(kinks):
        ang = np.mod(np.arctan2(kinks[:, 1], kinks[:, 0]), math.pi)
        ang = np.sort(ang)
        keep = np.concatenate([[True], np.diff(ang) > 1e-12])
        ang = ang[keep]
        if len(ang) > 1 and ang[-1] - ang[0] > math.pi - 1e-12:
            ang = ang[:-1]
    else:
        ang = np.array([0.0])
    lengths = np.diff(np.append(ang, ang[0] + math.pi))
    nested = half % 4 == 0 and half >= 4 * len(ang)
    quantum = 4 if nested else 2
    if half < quantum * len(ang):
        raise ValueError(f"resolution {resolution} is too small for {len(ang)} kink panels")
    m = _allocate(lengths, half, quantum)
    theta, w = _simpson_circle(ang, m)
    theta = np.concatenate([theta, theta + math.pi])
    w = np.concatenate([w, w])
    nodes = np.column_stack([np.cos(theta), np.sin(theta)])
    nodes[half:] = -nodes[:half]  # exact antipodes

    coarse = None
    if nested:
        # every other node of each panel, Simpson with doubled step
        tc, wc = _simpson_circle(ang, m // 2)
        idx = []
        start = 0
        for mj in m:
            idx.extend(range(start, start + mj, 2))
            start += mj
        idx = np.array(idx)
        idx = np.concatenate([idx, idx + half])
        wc = np.concatenate([wc, wc])
        coarse = QuadratureRule(2, nodes[idx], wc, "angular-composite", resolution // 2, kinks=kinks)
    return nodes, w, coarse


# --------------------------------------------------------------------------
# n = 3


def icosahedron():
    """Unit-norm icosahedron vertices and triangular faces."""
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    v = []
    for a in (-1.0, 1.0):
        for b in (-phi, phi):
            v += [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)]
    v = np.array(v) / math.hypot(1.0, phi)
    faces = []
    for i in range(12):
        for j in range(i + 1, 12):
            for k in range(j + 1, 12):
                tri = v[[i, j, k]]
                d = [np.linalg.norm(tri[0] - tri[1]), np.linalg.norm(tri[1] - tri[2]), np.linalg.norm(tri[0] - tri[2])]
                if max(d) < 1.1:
                    faces.append((i, j, k))
    return v, np.array(faces)


def _unit_rows(x):
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def _geodesic_rule(level):
    if level < 0:
        raise ValueError("subdivision level must be >= 0")
    v, f = icosahedron()
    tri = v[f]  # (T, 3, 3)
    for _ in range(level):
        a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
        ab, bc, ca = _unit_rows(a + b), _unit_rows(b + c), _unit_rows(c + a)
        tri = np.concatenate(
            [np.stack(t, axis=1) for t in ((a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca))]
        )
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    triple = np.abs(np.einsum("ij,ij->i", a, np.cross(b, c)))
    denom = 1.0 + np.einsum("ij,ij->i", a, b) + np.einsum("ij,ij->i", b, c) + np.einsum("ij,ij->i", c, a)
    area = 2.0 * np.arctan2(triple, denom)
    nodes = _unit_rows(a + b + c)
    return nodes, area


# --------------------------------------------------------------------------
# n >= 4


def _qmc_rule(n, resolution, seed):
    half = max(1, resolution // 2)
    sob = qmc.Sobol(d=n, scramble=True, seed=seed)
    u = sob.random_base2(max(0, math.ceil(math.log2(half))))[:half]
    u = np.clip(u, 1e-15, 1.0 - 1e-15)
    x = _unit_rows(norm.ppf(u))
    nodes = np.vstack([x, -x])
    w = np.full(2 * half, sphere_area(n) / (2 * half))
    return nodes, w


def build_quadrature(n, resolution, seed=0, kinks=None):
    """Build an antipodally closed quadrature rule on S^{n-1}.

    Parameters
    ----------
    n : int
        Ambient dimension (>= 2).
    resolution : int
        Node count for ``n = 2`` (multiple of 4) and ``n >= 4``; subdivision
        level for ``n = 3`` (``20 * 4**level`` nodes).
    seed : int
        Scrambling seed, used for ``n >= 4`` only.
    kinks : array_like, optional
        Directions (``n = 2``) where the integrand is not smooth.
    """
    if n < 2:
        raise ValueError("dimension must be >= 2")
    if resolution < 0 or (n != 3 and resolution < 1):
        raise ValueError("resolution must be positive")
    if n == 2:
        kinks = np.empty((0, 2)) if kinks is None else np.asarray(kinks, dtype=float).reshape(-1, 2)
        nodes, w, coarse = _circle_rule(resolution, kinks)
        return QuadratureRule(2, _ro(nodes), _ro(w), "angular-composite", resolution, seed, kinks, coarse)
    if n == 3:
        nodes, w = _geodesic_rule(resolution)
        return QuadratureRule(3, _ro(nodes), _ro(w), "geodesic-subdivision", resolution, seed)
    nodes, w = _qmc_rule(n, resolution, seed)
    return QuadratureRule(n, _ro(nodes), _ro(w), "quasi-mc", resolution, seed, np.empty((0, n)))


def _ro(a):
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a
