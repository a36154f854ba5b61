"""Rate experiments for dual L_p-centroid bodies and the uniformly convex approximation.

The normalized rate is::

    R(p) = (p / log p) * (|Z_p°(K)| - |K°|) / |K°|

Its limit is ``n^2`` for polytopes and ``n(n+1)/2`` for smooth bodies.
For finite ``p`` the pointwise ratio bounds of the centroid support give the
exact band returned by :func:`rate_band`.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .bodies import Ball
from .centroid import (
    ProfileBank,
    SupportEvaluator,
    ball_evaluator,
    centroid_evaluator,
    polytope_evaluator,
    scaled_evaluator,
)
from .errors import InsufficientPoints, NotContained, UnsupportedDimension
from .polar import polar_volume_difference, polar_volume_exact
from .polytope import normalize_unit_volume, polar, random_directions
from .special import log_beta

__all__ = [
    "RatePoint",
    "RateSeries",
    "FitResult",
    "ApproximationReport",
    "rate_point",
    "rate_band",
    "rate_series",
    "fit_rate_model",
    "quadrature_target",
    "theorem2_construct",
    "symmetric_difference",
    "uniform_convexity_probe",
    "theorem2_pipeline",
    "find_p0",
]

log = logging.getLogger(__name__)


class RatePoint(NamedTuple):
    p: float
    R: float
    err: float
    L: float
    U: float
    zp_polar: float
    k_polar: float


class FitResult(NamedTuple):
    a: float
    b: float
    c: float
    rms: float
    p_min: float


@dataclass
class RateSeries:
    body: str
    n: int
    points: list = field(default_factory=list)
    fit: FitResult | None = None

    @property
    def ps(self):
        return np.array([pt.p for pt in self.points])

    @property
    def R(self):
        return np.array([pt.R for pt in self.points])

    @property
    def band(self):
        return [(pt.p, pt.L, pt.U) for pt in self.points]


class ApproximationReport(NamedTuple):
    p: float
    ds: float
    bound: float
    contained: bool
    worst_margin: float
    err: float = 0.0


def _evaluators(body, p, bank=None):
    if isinstance(body, Ball):
        return ball_evaluator(body.dim, p), ball_evaluator(body.dim)
    return centroid_evaluator(body, p, bank), polytope_evaluator(body)


def rate_band(p, n):
    """Exact finite-p bounds ``(L, U)`` on ``R(p)`` for any volume-one symmetric body."""
    if p < 2:
        raise ValueError("rate band needs p >= 2")
    scale = p / math.log(p)
    L = scale * math.expm1((n / p) * math.log((p + 1.0) / n))
    U = scale * math.expm1(-(n / p) * log_beta(p + 1.0, n))
    return L, U


def quadrature_target(p, k_polar):
    """Absolute quadrature accuracy wanted for ``|Z_p°| - |K°|`` (0.1% of R)."""
    return 1e-3 * math.log(p) / p * k_polar


def rate_point(body, p, rule, bank=None):
    """Compute ``R(p)`` and its quadrature error for a volume-one body.

    ``body`` is a :class:`~centroid_lab.polytope.Polytope` (``n <= 3``) or a
    :class:`~centroid_lab.bodies.Ball`.  The difference of polar volumes is
    integrated in a single pass.
    """
    if p < 2:
        raise ValueError("rate experiments need p >= 2")
    if not isinstance(body, Ball) and body.dim > 3:
        raise UnsupportedDimension("rate experiments are limited to n <= 3")
    hz, hk = _evaluators(body, p, bank)
    dv, err = polar_volume_difference(hz, hk, rule)
    kv = polar_volume_exact(body)
    scale = p / math.log(p) / kv
    if err > quadrature_target(p, kv):
        log.info("p=%g: quadrature error %.3g above target %.3g", p, err, quadrature_target(p, kv))
    L, U = rate_band(p, body.dim)
    return RatePoint(float(p), dv * scale, err * scale, L, U, kv + dv, kv)


def rate_series(body, ps, rule, name="body", threads=1):
    """Rate points for several ``p`` sharing one set of section profiles."""
    bank = None
    if not isinstance(body, Ball):
        bank = ProfileBank(body)
        bank.stack(np.ascontiguousarray(rule.nodes))
        coarse = rule.coarse()
        if coarse is not None:
            bank.stack(np.ascontiguousarray(coarse.nodes))

    def task(p):
        return rate_point(body, p, rule, bank)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            points = list(pool.map(task, ps))
    else:
        points = [task(p) for p in ps]
    return RateSeries(body=name, n=body.dim, points=points)


def fit_rate_model(series, p_min=0.0):
    """Least-squares fit of ``R(p) = a + b log log p / log p + c / log p``.

    ``series`` is a :class:`RateSeries` or an iterable of ``(p, R)`` pairs.
    """
    if isinstance(series, RateSeries):
        data = [(pt.p, pt.R) for pt in series.points]
    else:
        data = [(float(p), float(r)) for p, r in series]
    data = [(p, r) for p, r in data if p >= p_min]
    if len(data) < 4:
        raise InsufficientPoints(f"need at least 4 points with p >= {p_min}, got {len(data)}")
    p = np.array([d[0] for d in data])
    r = np.array([d[1] for d in data])
    lp = np.log(p)
    X = np.column_stack([np.ones_like(lp), np.log(lp) / lp, 1.0 / lp])
    coef, *_ = np.linalg.lstsq(X, r, rcond=None)
    rms = float(np.sqrt(np.mean((X @ coef - r) ** 2)))
    fit = FitResult(float(coef[0]), float(coef[1]), float(coef[2]), rms, float(p_min))
    if isinstance(series, RateSeries):
        series.fit = fit
    return fit


# --------------------------------------------------------------------------
# uniformly convex approximation


def theorem2_construct(P, p, bank=None):
    """Gauge of the p-uniformly convex body ``K_p`` approximating ``P``.

    With ``P1 = P° / |P°|^{1/n}`` (volume one) the body is
    ``K_p = |P°|^{-1/n} Z_p°(P1)``; its gauge on the unit sphere is
    ``|P°|^{1/n} h_{Z_p(P1)}``.  ``P ⊆ K_p`` whenever ``p >= n - 1``.
    """
    if P.dim > 3 and P.family is None:
        raise UnsupportedDimension("the construction needs the polar body (n <= 3)")
    n = P.dim
    Q = polar(P)
    P1 = normalize_unit_volume(Q)
    lam = Q.volume ** (1.0 / n)
    base = centroid_evaluator(P1, p, bank or ProfileBank(P1))
    return scaled_evaluator(base, lam, "scaled-polar-centroid")


def gauge(K, x):
    """Evaluate the gauge ``|x| K(x/|x|)`` for an array of points (rows)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    r = np.linalg.norm(x, axis=1)
    out = np.zeros(len(x))
    nz = r > 0
    if nz.any():
        out[nz] = r[nz] * K(np.ascontiguousarray(x[nz] / r[nz, None]))
    return out


def _polytope_gauge(P):
    dual = P.normals / P.offsets[:, None]

    def func(thetas):
        return np.max(thetas @ dual.T, axis=1)

    return SupportEvaluator("polytope-gauge", P.dim, func, np.array(P.vertices), "gauge")


def contained_in(P, K, tol=1e-9):
    """True if every vertex of ``P`` has ``K``-gauge at most ``1 + tol``."""
    return bool(np.all(gauge(K, P.vertices) <= 1.0 + tol))


def _symmetric_difference(P, K, rule):
    if not contained_in(P, K):
        raise NotContained("P is not contained in K; only the nested case is supported")
    return polar_volume_difference(K, _polytope_gauge(P), rule)


def symmetric_difference(P, K, rule):
    """``d_s(P, K) = |K| - |P|`` for ``P ⊆ K``, with ``K`` given by its gauge.

    The rule should carry the vertex directions of ``P`` as kinks (``n = 2``).

    Raises
    ------
    NotContained
        If a vertex of ``P`` lies outside ``K``.
    """
    return _symmetric_difference(P, K, rule)[0]


def uniform_convexity_probe(K, p, m, seed):
    """Smallest margin ``1 - C_p |x-y|^p - |(x+y)/2|`` over sampled boundary pairs.

    Norms are the gauge of ``K`` and ``C_p = 1/(p 2^p)``.  Half the pairs are
    independent uniform directions; the other half are nearly parallel
    (separation log-uniform in [1e-4, 1e-1]) where the modulus is tightest.
    """
    n = K.dim
    rng = np.random.default_rng(seed)
    t1 = random_directions(n, m, rng.integers(2**63))
    t2 = random_directions(n, m, rng.integers(2**63))
    near = np.arange(m) >= m // 2
    eta = 10.0 ** rng.uniform(-4.0, -1.0, size=m)
    t2[near] = t1[near] + eta[near, None] * t2[near]
    t2 /= np.linalg.norm(t2, axis=1)[:, None]
    x = t1 / K(np.ascontiguousarray(t1))[:, None]
    y = t2 / K(np.ascontiguousarray(t2))[:, None]
    cp = 1.0 / (p * 2.0**p)
    margin = 1.0 - cp * gauge(K, x - y) ** p - gauge(K, 0.5 * (x + y))
    return float(margin.min())


def theorem2_pipeline(P, ps, rule, m=0, margin_ps=(), seed=0):
    """Approximation reports for each ``p``: ``d_s``, its bound, containment, margin.

    Reports cover the union of ``ps`` and ``margin_ps`` in increasing order;
    the convexity probe (``m`` pairs) runs only for ``p`` in ``margin_ps``.
    """
    n = P.dim
    Q = polar(P)
    P1 = normalize_unit_volume(Q)
    bank = ProfileBank(P1)
    reports = []
    for p in sorted(set(map(float, ps)) | set(map(float, margin_ps))):
        K = theorem2_construct(P, p, bank)
        contained = contained_in(P, K)
        ds, err = (math.nan, math.nan)
        if contained:
            ds, err = _symmetric_difference(P, K, rule)
        bound = 2.0 * n * n * P.volume * math.log(p) / p
        margin = math.nan
        if m > 0 and p in margin_ps:
            margin = uniform_convexity_probe(K, p, m, seed)
        reports.append(ApproximationReport(float(p), ds, bound, contained, margin, err))
    return reports


def find_p0(reports, p_range=None):
    """Smallest tested ``p`` from which ``d_s <= bound`` holds for every larger tested ``p``.

    ``p_range = (lo, hi)`` restricts the search to reports with ``lo <= p <= hi``.
    """
    if p_range is not None:
        reports = [r for r in reports if p_range[0] <= r.p <= p_range[1]]
    p0 = None
    for rep in sorted(reports, key=lambda r: r.p, reverse=True):
        if rep.contained and rep.ds <= rep.bound:
            p0 = rep.p
        else:
            break
    return p0
