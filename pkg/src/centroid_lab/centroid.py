"""Support functions of L_p-centroid bodies.

For a volume-one symmetric body ``K`` and a unit vector ``theta``::

    h_{Z_p(K)}(theta)^p = 2 * int_0^{h_K(theta)} t^p f_{K,theta}(t) dt

With ``f`` stored piecewise in powers of ``y = b - t`` (``b`` the right end
of a piece ``[a, b]``), every term is an incomplete Beta integral::

    int_a^b t^p (b - t)^k dt = b^{p+1+k} B(k+1, p+1) I_{1 - a/b}(k+1, p+1)

The dominant mass of ``t^p`` sits at the right end of each piece, so the
regularized incomplete Beta ``I`` is evaluated in its lower tail and all
scale factors are accumulated as logarithms.  This stays accurate for
``p`` up to ``1e5`` where ``h^p`` itself under- or overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb
from typing import Callable

import numpy as np
from scipy import special as _sp

from .errors import PrecisionLoss, VolumeNotNormalized
from .sections import eval_profile, section_profile
from .special import ball_volume, log_beta

__all__ = [
    "PieceStack",
    "ProfileBank",
    "SupportEvaluator",
    "log_moment",
    "log_moments",
    "moment_support",
    "centroid_support",
    "ball_support",
    "prop1_band",
    "t_peak",
    "concentration_ratio",
    "polytope_evaluator",
    "centroid_evaluator",
    "ball_evaluator",
    "scaled_evaluator",
]

VOLUME_TOL = 1e-9
MAX_CANCELLATION = 1e6


# --------------------------------------------------------------------------
# batched moment integrals


@dataclass(frozen=True, eq=False)
class PieceStack:
    """Polynomial pieces of many section functions, flattened for vectorized integration.

    ``owner[i]`` is the profile index of piece ``i``; the piece covers
    ``[b[i] (1 - w[i]), b[i]]`` and its coefficients multiply ``(b[i] - t)**k``.
    """

    owner: np.ndarray
    b: np.ndarray
    w: np.ndarray
    coeffs: np.ndarray
    n_owners: int

    @classmethod
    def from_pieces(cls, owner, b, w, coeffs, n_owners):
        owner = np.asarray(owner, dtype=np.intp)
        keep = (np.asarray(b) > 0.0) & (np.asarray(w) > 0.0)
        owner, b, w, coeffs = owner[keep], np.asarray(b)[keep], np.asarray(w)[keep], np.asarray(coeffs)[keep]
        return cls(owner, b, w, coeffs, n_owners)

    @classmethod
    def from_profiles(cls, profiles):
        owner, b, w, coeffs = [], [], [], []
        for i, prof in enumerate(profiles):
            bk = prof.breakpoints
            owner.extend([i] * (len(bk) - 1))
            b.extend(bk[1:])
            w.extend((bk[1:] - bk[:-1]) / bk[1:])
            coeffs.extend(prof.coeffs)
        return cls.from_pieces(owner, b, w, np.array(coeffs), len(profiles))


def log_moments(stack, p):
    """``log int t^p f(t) dt`` for every profile in ``stack`` (vectorized over pieces)."""
    p = float(p)
    n = stack.coeffs.shape[1]
    k = np.arange(n)
    logb = np.log(stack.b)
    with np.errstate(divide="ignore"):
        log_ib = np.log(_sp.betainc(k[None, :] + 1.0, p + 1.0, stack.w[:, None]))
        log_e = np.log(np.abs(stack.coeffs))
    lbeta = _sp.betaln(k + 1.0, p + 1.0)
    mag = (p + 1.0 + k)[None, :] * logb[:, None] + lbeta[None, :] + log_ib + log_e
    mag[~np.isfinite(mag)] = -np.inf
    sign = np.sign(stack.coeffs)

    piece_max = mag.max(axis=1)
    own_max = np.full(stack.n_owners, -np.inf)
    np.maximum.at(own_max, stack.owner, piece_max)
    if not np.all(np.isfinite(own_max)):
        raise PrecisionLoss("a section function has no positive mass")
    scaled = np.exp(mag - own_max[stack.owner][:, None])
    signed = np.zeros(stack.n_owners)
    absolute = np.zeros(stack.n_owners)
    np.add.at(signed, stack.owner, np.sum(sign * scaled, axis=1))
    np.add.at(absolute, stack.owner, np.sum(scaled, axis=1))
    if np.any(signed <= 0.0) or np.any(absolute > MAX_CANCELLATION * signed):
        raise PrecisionLoss("cancellation in the moment integral exceeds the budget")
    return own_max + np.log(signed)


def _clipped_stack(prof, lo, hi):
    owner, b, w, coeffs = [], [], [], []
    bk = prof.breakpoints
    n = prof.dim
    for j in range(len(bk) - 1):
        a0, b0 = max(bk[j], lo), min(bk[j + 1], hi)
        if b0 <= a0:
            continue
        d = bk[j + 1] - b0
        # re-expand sum c_k (d + y')^k in powers of y' = b0 - t
        shift = np.array([[comb(kk, jj) * d ** (kk - jj) if kk >= jj else 0.0
                           for kk in range(n)] for jj in range(n)])
        owner.append(0)
        b.append(b0)
        w.append((b0 - a0) / b0)
        coeffs.append(shift @ prof.coeffs[j])
    return PieceStack.from_pieces(owner, b, w, np.array(coeffs).reshape(-1, n), 1)


def log_moment(prof, p, lo=0.0, hi=None):
    """``log int_lo^hi t^p f(t) dt`` for a single section profile."""
    if hi is None:
        hi = prof.h
    if lo <= 0.0 and hi >= prof.h:
        stack = PieceStack.from_profiles([prof])
    else:
        stack = _clipped_stack(prof, max(lo, 0.0), min(hi, prof.h))
    return float(log_moments(stack, p)[0])


def moment_support(prof, p):
    """``(2 int_0^h t^p f)^{1/p}`` from a section profile (no volume check)."""
    return math.exp((math.log(2.0) + log_moment(prof, p)) / p)


def centroid_support(P, p, theta, profile=None):
    """Support function of the L_p-centroid body ``Z_p(P)`` at a unit vector.

    Raises
    ------
    VolumeNotNormalized
        If ``|P|`` differs from 1 by more than 1e-9.
    """
    if abs(P.volume - 1.0) > VOLUME_TOL:
        raise VolumeNotNormalized(f"body has volume {P.volume!r}; normalize it first")
    if not p >= 1.0:
        raise ValueError(f"p must be >= 1, got {p!r}")
    if profile is None:
        profile = section_profile(P, theta)
    return moment_support(profile, p)


def ball_support(n, p):
    """Support value of ``Z_p`` of the volume-one Euclidean ball in R^n.

    ``h^p = |B^{n-1}| r^{p+n} B((p+1)/2, (n+1)/2)`` with ``r^n |B^n| = 1``.
    """
    log_r = -math.log(ball_volume(n)) / n
    log_hp = math.log(ball_volume(n - 1)) + (p + n) * log_r + log_beta(0.5 * (p + 1), 0.5 * (n + 1))
    return math.exp(log_hp / p)


def prop1_band(P, p, theta, profile=None):
    """Return ``(B(p+1,n)^{1/p}, h_{Z_p}/h_P, (n/(p+1))^{1/p})``."""
    n = P.dim
    hz = centroid_support(P, p, theta, profile)
    hk = float(np.max(P.vertices @ np.asarray(theta, dtype=float)))
    lower = math.exp(log_beta(p + 1.0, n) / p)
    upper = (n / (p + 1.0)) ** (1.0 / p)
    return lower, hz / hk, upper


# --------------------------------------------------------------------------
# peak location and concentration


def _log_g(prof, p, t):
    if t <= 0.0:
        return -math.inf
    f = eval_profile(prof, t)
    if f <= 0.0:
        return -math.inf
    return p * math.log(t) + math.log(f)


def t_peak(prof, p):
    """Maximizer of ``g_p(t) = t^p f(t)`` on ``[0, h]``.

    ``log g_p`` is concave, so on every piece its only stationary point is a
    root of the polynomial ``p f(t) + t f'(t)``.  Candidates are these roots
    and the breakpoints; ties go to the larger ``t``.
    """
    bk = prof.breakpoints
    n = prof.dim
    k = np.arange(n)
    cands = list(bk)
    for j in range(len(bk) - 1):
        a, b = bk[j], bk[j + 1]
        c = prof.coeffs[j]
        # G(y) = p sum c_k y^k - (b - y) sum k c_k y^{k-1}, y = b - t
        G = np.zeros(n + 1)
        G[:n] += p * c
        G[: n - 1] -= b * (k[1:] * c[1:])
        G[1:n] += k[1:] * c[1:]
        G = np.trim_zeros(G, "b")
        if len(G) < 2:
            continue
        for y in np.roots(G[::-1]):
            if abs(y.imag) <= 1e-12 * max(b, 1.0) and 0.0 < y.real < b - a:
                cands.append(b - y.real)
    vals = [_log_g(prof, p, t) for t in cands]
    best = max(range(len(cands)), key=lambda i: (vals[i], cands[i]))
    return float(cands[best])


def concentration_ratio(prof, p, eps):
    """Share of ``int t^p f`` carried by the window ``[t_p (1-eps), min(t_p (1+eps), h)]``."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    tp = t_peak(prof, p)
    lo, hi = tp * (1.0 - eps), min(tp * (1.0 + eps), prof.h)
    ratio = math.exp(log_moment(prof, p, lo, hi) - log_moment(prof, p))
    return min(ratio, 1.0)


# --------------------------------------------------------------------------
# support evaluators


@dataclass(frozen=True, eq=False)
class SupportEvaluator:
    """Vectorized support function ``h(theta)`` on unit vectors.

    ``func`` maps an ``(m, n)`` array of unit vectors to ``m`` positive
    values.  ``kinks`` lists directions where ``h`` fails to be smooth (used
    to align planar quadrature panels).
    """

    kind: str
    dim: int
    func: Callable[[np.ndarray], np.ndarray]
    kinks: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    label: str = ""

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        if theta.ndim == 1:
            return float(self.func(theta[None, :])[0])
        return np.asarray(self.func(theta), dtype=float)


class ProfileBank:
    """Caches section profiles of one polytope, keyed by direction batch."""

    def __init__(self, P):
        self.P = P
        self._stacks = {}

    def stack(self, thetas):
        key = (thetas.shape, thetas.tobytes())
        st = self._stacks.get(key)
        if st is None:
            st = PieceStack.from_profiles([section_profile(self.P, th) for th in thetas])
            self._stacks[key] = st
        return st


def polytope_evaluator(P):
    """Support function of the polytope itself; kinks at the facet normals."""
    V = P.vertices

    def func(thetas):
        return np.max(thetas @ V.T, axis=1)

    return SupportEvaluator("polytope", P.dim, func, np.array(P.normals), "polytope")


def centroid_evaluator(P, p, bank=None):
    """Support function of ``Z_p(P)`` for a volume-one polytope."""
    if abs(P.volume - 1.0) > VOLUME_TOL:
        raise VolumeNotNormalized(f"body has volume {P.volume!r}; normalize it first")
    bank = bank or ProfileBank(P)

    def func(thetas):
        thetas = np.ascontiguousarray(thetas)
        lm = log_moments(bank.stack(thetas), p)
        return np.exp((math.log(2.0) + lm) / p)

    return SupportEvaluator("centroid", P.dim, func, np.empty((0, P.dim)), f"Z_{p:g}")


def ball_evaluator(n, p=None):
    """Volume-one ball (``p is None``) or its L_p-centroid body; constant in theta."""
    if p is None:
        value = ball_volume(n) ** (-1.0 / n)
        kind = "ball"
    else:
        value = ball_support(n, p)
        kind = "ball-centroid"

    def func(thetas):
        return np.full(len(thetas), value)

    return SupportEvaluator(kind, n, func, np.empty((0, n)), kind)


def scaled_evaluator(base, lam, kind="scaled"):
    """``theta -> lam * base(theta)``."""

    def func(thetas):
        return lam * base.func(thetas)

    return SupportEvaluator(kind, base.dim, func, base.kinks, f"{lam:g}*{base.label}")
