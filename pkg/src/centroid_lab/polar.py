"""Volumes of polar bodies.

``|C°| = (1/n) int_{S^{n-1}} h_C(theta)^{-n} dsigma(theta)``, discretized by a
:class:`~centroid_lab.quadrature.QuadratureRule`; exact values for polytopes
come from dualizing and triangulating.
"""

from __future__ import annotations

import math

import numpy as np

from .bodies import Ball
from .errors import DimensionMismatch
from .polytope import polar

__all__ = [
    "polar_volume",
    "polar_volume_difference",
    "polar_volume_exact",
    "weighted_sum",
]

ROUNDOFF_FLOOR = 1e-13


def weighted_sum(weights, values):
    """Order-independent, exactly rounded ``sum(w * v)``."""
    return math.fsum(np.asarray(weights) * np.asarray(values))


def _check(rule, *evaluators):
    for h in evaluators:
        if h.dim != rule.dim:
            raise DimensionMismatch(f"evaluator has dim {h.dim}, rule has dim {rule.dim}")


def _estimate(integrand, rule):
    """Value of ``(1/n) sum w g`` and its error estimate; ``integrand(nodes) -> g``."""
    n = rule.dim
    g = integrand(rule.nodes)
    value = weighted_sum(rule.weights, g) / n
    floor = ROUNDOFF_FLOOR * weighted_sum(rule.weights, np.abs(g)) / n
    coarse = rule.coarse()
    if coarse is not None:
        vc = weighted_sum(coarse.weights, integrand(coarse.nodes)) / n
        gap = value - vc
        value = value + gap / (2.0**rule.order - 1.0)
        if rule.kind == "geodesic-subdivision":
            # centroid rule is O(h^2); keep the raw gap as a conservative bound
            err = abs(gap)
        else:
            # the Richardson estimate of the unextrapolated Simpson error
            # also bounds the extrapolated value
            err = abs(gap) / (2.0**rule.order - 1.0)
    elif rule.kind == "quasi-mc":
        # jackknife over the two halves of the antipodal pairs
        half = len(rule) // 2
        k = half // 2
        idx1 = np.r_[0:k, half : half + k]
        idx2 = np.r_[k:half, half + k : 2 * half]
        v1 = weighted_sum(rule.weights[idx1], g[idx1]) * len(rule) / len(idx1) / n
        v2 = weighted_sum(rule.weights[idx2], g[idx2]) * len(rule) / len(idx2) / n
        err = 0.5 * abs(v1 - v2)
    else:
        err = math.inf
    return value, max(err, floor)


def polar_volume(h, rule):
    """Volume of the body whose support function is ``h``'s polar.

    Returns ``(value, err_estimate)``; the estimate is a Richardson
    comparison against the next coarser rule (``n <= 3``) or a half-sample
    jackknife spread (quasi-Monte Carlo rules).  For ``n <= 3`` the returned
    value is Richardson-extrapolated and the error is that of the
    unextrapolated rule, which makes it conservative.
    """
    _check(rule, h)
    n = rule.dim
    return _estimate(lambda nodes: h(nodes) ** (-float(n)), rule)


def polar_volume_difference(h_inner, h_outer, rule):
    """``|C_inner°| - |C_outer°|`` computed as one quadrature of the difference.

    Written as ``h_outer^{-n} expm1(n log(h_outer / h_inner))`` so the small
    difference of two nearly equal support functions keeps its digits.
    """
    _check(rule, h_inner, h_outer)
    n = float(rule.dim)

    def integrand(nodes):
        hi = h_inner(nodes)
        ho = h_outer(nodes)
        return ho ** (-n) * np.expm1(n * np.log(ho / hi))

    return _estimate(integrand, rule)


def polar_volume_exact(body):
    """Exact ``|body°|`` for a polytope (via dualization) or the volume-one ball."""
    if isinstance(body, Ball):
        return body.polar_volume_exact()
    return polar(body).volume
