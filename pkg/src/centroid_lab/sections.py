"""Exact parallel-section functions ``f(t) = |K ∩ (theta^perp + t theta)|``.

For a polytope the section volume is a polynomial of degree ``n - 1`` in
``t`` between consecutive vertex heights.  Each piece is recovered exactly
from ``n`` slice volumes at Chebyshev nodes and stored in powers of the
distance ``y = b - t`` to the piece's right endpoint ``b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .errors import FrameFailure, InterpolationInstability, OutOfRange
from .polytope import TIE_TOL, _unit, convex_volume

__all__ = ["SectionProfile", "section_profile", "eval_profile", "slice_volume", "orthonormal_frame"]

MERGE_TOL = 1e-10
MAX_COND = 1e8


@dataclass(frozen=True, eq=False)
class SectionProfile:
    """Piecewise-polynomial section function on ``[0, h]``.

    ``coeffs[j][k]`` multiplies ``(breakpoints[j+1] - t)**k`` on the
    interval ``[breakpoints[j], breakpoints[j+1]]``.
    """

    direction: np.ndarray
    h: float
    breakpoints: np.ndarray
    coeffs: np.ndarray  # (pieces, n)
    s_theta: float | None
    dim: int

    @property
    def pieces(self):
        return [np.array(c) for c in self.coeffs]

    def __call__(self, t):
        return eval_profile(self, t)


def orthonormal_frame(theta):
    """Columns form an orthonormal basis of ``theta^perp``."""
    q = null_space(np.asarray(theta, dtype=float)[None, :])
    if q.shape[1] != len(theta) - 1:
        raise FrameFailure("could not complete the direction to an orthonormal basis")
    return q


def slice_volume(P, theta, t, frame=None, heights=None):
    """(n-1)-volume of ``P ∩ {x : <x, theta> = t}`` from edge intersections."""
    if frame is None:
        frame = orthonormal_frame(theta)
    if heights is None:
        heights = P.vertices @ theta
    e = np.asarray(P.edges)
    hi, hj = heights[e[:, 0]], heights[e[:, 1]]
    cross = (hi - t) * (hj - t) <= 0.0
    cross &= hi != hj
    i, j = e[cross, 0], e[cross, 1]
    lam = (t - heights[i]) / (heights[j] - heights[i])
    pts = P.vertices[i] + lam[:, None] * (P.vertices[j] - P.vertices[i])
    on = np.abs(heights - t) == 0.0
    if on.any():
        pts = np.vstack([pts, P.vertices[on]])
    if len(pts) < P.dim:
        return 0.0
    coords = pts @ frame
    try:
        return convex_volume(coords)
    except Exception:  # lower-dimensional slice (only at the top vertex)
        return 0.0


def _breakpoints(heights, h, scale):
    vals = np.sort(heights[(heights > 0.0) & (heights < h)])
    out = [0.0]
    tol = MERGE_TOL * scale
    for v in vals:
        if v - out[-1] > tol:
            out.append(float(v))
    if h - out[-1] <= tol and len(out) > 1:
        out[-1] = h
    else:
        out.append(h)
    return np.array(out)


def section_profile(P, theta):
    """Build the exact piecewise-polynomial section function of ``P`` along ``theta``."""
    theta = _unit(P, theta)
    n = P.dim
    heights = P.vertices @ theta
    top = np.sort(heights)
    h = float(top[-1])
    scale = P.HK
    s_theta = None
    if top[-1] - top[-2] > TIE_TOL * scale:
        s_theta = max(float(top[-2]), 0.0)
    frame = orthonormal_frame(theta)
    bks = _breakpoints(heights, h, scale)

    # Chebyshev-Gauss nodes in (0, 1); z = 0 is the right endpoint
    z = 0.5 * (1.0 - np.cos((2 * np.arange(n) + 1) * math.pi / (2 * n)))
    vander = np.vander(z, n, increasing=True)
    if np.linalg.cond(vander) > MAX_COND:  # pragma: no cover - fixed small n
        raise InterpolationInstability("Vandermonde system is ill-conditioned")
    coeffs = np.empty((len(bks) - 1, n))
    for j in range(len(bks) - 1):
        a, b = bks[j], bks[j + 1]
        w = b - a
        vals = np.array([slice_volume(P, theta, b - w * zz, frame, heights) for zz in z])
        c = np.linalg.solve(vander, vals)
        coeffs[j] = c / w ** np.arange(n)
    if s_theta is not None:
        # apex piece is a cone over the section at s_theta: f = e (h - t)^{n-1}
        coeffs[-1, :-1] = 0.0
    coeffs.setflags(write=False)
    bks.setflags(write=False)
    return SectionProfile(
        direction=theta, h=h, breakpoints=bks, coeffs=coeffs, s_theta=s_theta, dim=n
    )


def _locate(prof, t):
    j = np.searchsorted(prof.breakpoints, t, side="right") - 1
    return np.clip(j, 0, len(prof.coeffs) - 1)


def eval_profile(prof, t):
    """Evaluate the section function at ``0 <= t <= h`` (scalar or array)."""
    t_arr = np.asarray(t, dtype=float)
    tol = 1e-12 * max(prof.h, 1.0)
    if np.any(t_arr < -tol) or np.any(t_arr > prof.h + tol):
        raise OutOfRange(f"t must lie in [0, {prof.h}]")
    t_arr = np.clip(t_arr, 0.0, prof.h)
    j = _locate(prof, t_arr)
    y = prof.breakpoints[j + 1] - t_arr
    c = prof.coeffs[j]
    powers = y[..., None] ** np.arange(prof.dim)
    out = np.sum(c * powers, axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def eval_log_derivative(prof, t, side):
    """``f'(t)/f(t)`` using the piece to the ``side`` ('left'/'right') of ``t``."""
    bks = prof.breakpoints
    if side == "left":
        j = int(np.searchsorted(bks, t, side="left")) - 1
    else:
        j = int(np.searchsorted(bks, t, side="right")) - 1
    j = min(max(j, 0), len(prof.coeffs) - 1)
    y = bks[j + 1] - t
    c = prof.coeffs[j]
    k = np.arange(prof.dim)
    f = float(np.sum(c * y**k))
    df = -float(np.sum(c[1:] * k[1:] * y ** (k[1:] - 1)))
    if f <= 0.0:
        return -math.inf
    return df / f
