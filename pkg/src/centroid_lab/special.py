"""Gamma/Beta helpers, the Beta-ratio asymptotic expansion and spherical caps.

All functions accept Python floats and return Python floats.  Log-Gamma
and the regularized incomplete Beta function are taken from
``scipy.special``; everything built on top of them lives here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special as _sp

from .errors import DomainError

__all__ = [
    "ExpansionResult",
    "log_gamma",
    "log_beta",
    "beta",
    "beta_ratio_exact",
    "beta_ratio_expansion",
    "ball_volume",
    "sphere_area",
    "cap_area",
    "cap_area_bounds",
]


def log_gamma(x):
    """Natural logarithm of the Gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return float(_sp.gammaln(x))


def log_beta(x, y):
    """log B(x, y) for positive arguments."""
    x, y = float(x), float(y)
    if not (x > 0.0 and y > 0.0):
        raise DomainError(f"beta requires x, y > 0, got ({x!r}, {y!r})")
    # betaln avoids the cancellation of three log-Gamma values when x >> y
    return float(_sp.betaln(x, y))


def beta(x, y):
    """Euler Beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y)."""
    return math.exp(log_beta(x, y))


def beta_ratio_exact(p, n):
    """Return ``B(p+1, n) ** (n/p)`` evaluated in the log domain."""
    p = float(p)
    if p <= 0.0 or n < 1:
        raise DomainError(f"need p > 0 and n >= 1, got p={p!r}, n={n!r}")
    return math.exp((n / p) * log_beta(p + 1.0, n))


@dataclass(frozen=True)
class ExpansionResult:
    """Value of the truncated expansion of ``B(p+1, n)**(n/p)``.

    ``terms`` holds the four non-constant summands in the order
    ``-n^2 log(p)/p``, ``n log Gamma(n)/p``, ``n^4 log(p)^2/(2p^2)``,
    ``-n^3 log Gamma(n) log(p)/p^2``; ``value == 1 + sum(terms)``.
    """

    value: float
    terms: tuple


def beta_ratio_expansion(p, n):
    """Second-order expansion of ``B(p+1, n)**(n/p)`` in powers of ``1/p``.

    The error of the truncation is of order ``1/p**2`` (the omitted
    ``-n^2 (n+1) / (2 p^2)`` contribution dominates), so the difference
    to :func:`beta_ratio_exact` decays roughly a hundredfold per decade.
    """
    p = float(p)
    if p <= 0.0 or n < 1:
        raise DomainError(f"need p > 0 and n >= 1, got p={p!r}, n={n!r}")
    lp = math.log(p)
    lg = log_gamma(n)
    terms = (
        -(n**2) / p * lp,
        n / p * lg,
        n**4 / (2.0 * p * p) * lp * lp,
        -(n**3) / (p * p) * lg * lp,
    )
    return ExpansionResult(value=1.0 + math.fsum(terms), terms=terms)


def ball_volume(k):
    """Volume of the Euclidean unit ball in R^k (k >= 0)."""
    return math.exp(0.5 * k * math.log(math.pi) - log_gamma(0.5 * k + 1.0))


def sphere_area(n):
    """Surface measure of S^{n-1} in R^n, i.e. ``2 pi^{n/2} / Gamma(n/2)``."""
    return 2.0 * math.exp(0.5 * n * math.log(math.pi) - log_gamma(0.5 * n))


def _check_cap_args(n, delta, upper):
    if int(n) != n or n < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {n!r}")
    delta = float(delta)
    if not (0.0 < delta < upper):
        raise DomainError(f"delta must lie in (0, {upper:g}), got {delta!r}")
    return int(n), delta


def cap_area(n, delta):
    """Surface measure of the cap ``{phi in S^{n-1} : |phi - theta| <= delta}``.

    The cap has angular radius ``alpha`` with ``cos(alpha) = 1 - delta**2/2``
    and measure ``|S^{n-2}| * int_0^alpha sin(t)**(n-2) dt``.  The sine-power
    integral is expressed through the regularized incomplete Beta function
    with argument ``sin(alpha)**2 = delta**2 (1 - delta**2/4)``, which is free
    of cancellation for small caps.  Any ``0 < delta < 2`` is accepted.
    """
    n, delta = _check_cap_args(n, delta, 2.0)
    m = n - 2
    a, b = 0.5 * (m + 1), 0.5
    full = math.exp(log_beta(a, b))  # int_0^pi sin^m
    x = delta * delta * (1.0 - 0.25 * delta * delta)
    half = 0.5 * full * float(_sp.betainc(a, b, x))
    if delta * delta > 2.0:  # alpha > pi/2: reflect
        half = full - half
    return sphere_area(n - 1) * half


def cap_area_bounds(n, delta):
    """Two-sided bounds on :func:`cap_area` for ``0 < delta < 1``.

    Returns ``(lower, upper)`` with
    ``lower = |B^{n-1}| (1 - delta^2/4)^{(n-1)/2} delta^{n-1}`` and
    ``upper = lower * sqrt(1 + delta^4/4) / (1 - delta^2/2)``.
    """
    n, delta = _check_cap_args(n, delta, 1.0)
    d2 = delta * delta
    lower = ball_volume(n - 1) * (1.0 - 0.25 * d2) ** (0.5 * (n - 1)) * delta ** (n - 1)
    upper = lower * math.sqrt(1.0 + 0.25 * d2 * d2) / (1.0 - 0.5 * d2)
    return lower, upper
