"""Invariant suites behind ``centroid-lab verify``.

Each suite returns rows ``(suite, check, value, bound, passed)``.  Values
are deterministic for a given seed and tolerance profile, so the CSV can be
compared byte for byte between runs.
"""

from __future__ import annotations

import math

import numpy as np

from .bodies import Ball, cross_polytope, cube, regular_polygon
from .centroid import ball_evaluator, centroid_support, polytope_evaluator, prop1_band, t_peak
from .convergence import fit_rate_model, find_p0, rate_series, theorem2_pipeline
from .polar import polar_volume, polar_volume_exact
from .polytope import polar, random_directions, verify_lemma1
from .quadrature import build_quadrature
from .sections import section_profile, slice_volume
from .special import beta_ratio_exact, beta_ratio_expansion, cap_area, cap_area_bounds, log_beta

__all__ = ["SUITES", "run_suites", "standard_bodies"]


def standard_bodies():
    """The five volume-one polytopes used across the suites."""
    return {
        "square": cube(2),
        "hexagon": regular_polygon(6),
        "cross2": cross_polytope(2),
        "cube3": cube(3),
        "octahedron3": cross_polytope(3),
    }


def _row(suite, check, value, bound, passed):
    return (suite, check, float(value), float(bound), bool(passed))


def suite_special(seed, profile, threads):
    rows = []
    exact = beta_ratio_exact(100, 2)
    rows.append(_row("special", "beta_ratio_exact_n2_p100", exact, 0.8312689696818960,
                     abs(exact - 0.8312689696818960) <= 1e-12))
    expn = beta_ratio_expansion(100, 2).value
    rows.append(_row("special", "beta_ratio_expansion_n2_p100", expn, 0.8327592665140072,
                     abs(expn - 0.8327592665140072) <= 1e-12))
    for n in (2, 3):
        for p in (100, 1000):
            e1 = abs(beta_ratio_exact(p, n) - beta_ratio_expansion(p, n).value)
            e2 = abs(beta_ratio_exact(10 * p, n) - beta_ratio_expansion(10 * p, n).value)
            rows.append(_row("special", f"expansion_decay_n{n}_p{p}", e2 / e1, 0.02, e2 / e1 <= 0.02))
    worst = math.inf
    for n in range(2, 7):
        for d in (0.05, 0.1, 0.2, 0.5, 0.9):
            lo, hi = cap_area_bounds(n, d)
            c = cap_area(n, d)
            worst = min(worst, c - lo, hi - c)
    rows.append(_row("special", "cap_sandwich_min_slack", worst, 0.0, worst >= 0.0))
    return rows


def suite_polytope(seed, profile, threads):
    rows = []
    m = 10**4
    for name, P, delta, bound in (("square", cube(2), 0.2, 0.9), ("cube3", cube(3), 0.1, 0.95)):
        res = verify_lemma1(P, delta, m, seed)
        rows.append(_row("polytope", f"lemma1_{name}", res.observed_sup, bound,
                         res.passed and res.bound <= bound + 1e-12 and res.observed_sup <= bound))
    for name, P in standard_bodies().items():
        back = polar(polar(P)).volume
        rows.append(_row("polytope", f"bipolar_volume_{name}", back, P.volume,
                         abs(back - P.volume) <= 1e-12 * P.volume))
    return rows


def suite_sections(seed, profile, threads):
    rows = []
    rng_seed = seed
    for name in ("square", "hexagon", "cube3", "octahedron3"):
        P = standard_bodies()[name]
        worst_sandwich = 0.0
        worst_slice = 0.0
        for theta in random_directions(P.dim, 20, rng_seed):
            prof = section_profile(P, theta)
            t = np.linspace(0.0, prof.h, 1000)
            f = prof(t)
            f0 = f[0]
            lower = (1.0 - t / prof.h) ** (P.dim - 1) * f0
            worst_sandwich = max(worst_sandwich, float(np.max(lower - f)), float(np.max(f - f0)))
            for tt in t[::97]:
                worst_slice = max(worst_slice, abs(prof(tt) - slice_volume(P, theta, tt)))
        rows.append(_row("sections", f"brunn_sandwich_{name}", worst_sandwich, 1e-9, worst_sandwich <= 1e-9))
        rows.append(_row("sections", f"profile_vs_slice_{name}", worst_slice, 1e-10, worst_slice <= 1e-10))
    return rows


def suite_centroid(seed, profile, threads):
    rows = []
    sq = cube(2)
    cr = cross_polytope(2)
    a = cr.vertices[:, 0].max()
    worst = 0.0
    for p in (1, 2, 10, 100, 1000):
        want = 0.5 * (p + 1) ** (-1.0 / p)
        worst = max(worst, abs(centroid_support(sq, p, np.array([1.0, 0.0])) / want - 1.0))
        want = a * math.exp((math.log(2) + log_beta(p + 1, 2)) / p)
        worst = max(worst, abs(centroid_support(cr, p, np.array([1.0, 0.0])) / want - 1.0))
    rows.append(_row("centroid", "closed_form_anchors", worst, 1e-10, worst <= 1e-10))

    n_dirs = 200 if profile == "precise" else 20
    violations = 0
    for name, P in standard_bodies().items():
        for theta in random_directions(P.dim, n_dirs, seed):
            prof = section_profile(P, theta)
            for k in range(14):
                lo, ratio, hi = prop1_band(P, 2.0**k, theta, prof)
                violations += not (lo - 1e-9 <= ratio <= hi + 1e-9)
    rows.append(_row("centroid", "prop1_sandwich_violations", violations, 0, violations == 0))

    worst = 0.0
    for P in (sq, cube(3)):
        for theta in random_directions(P.dim, 50, seed + 1):
            prof = section_profile(P, theta)
            for p in (10.0, 100.0, 1000.0):
                target = p / (p + P.dim - 1) * prof.h
                if prof.s_theta is not None and target >= prof.s_theta:
                    worst = max(worst, abs(t_peak(prof, p) / target - 1.0))
    rows.append(_row("centroid", "t_peak_formula", worst, 1e-8, worst <= 1e-8))
    return rows


def suite_polar(seed, profile, threads):
    rows = []
    sq = cube(2)
    v, _ = polar_volume(polytope_evaluator(sq), build_quadrature(2, 2**12, kinks=sq.normals))
    rows.append(_row("polar", "square_polar", v, 8.0, abs(v - 8.0) <= 1e-8))
    c3 = cube(3)
    v, _ = polar_volume(polytope_evaluator(c3), build_quadrature(3, 7))
    exact = polar_volume_exact(c3)
    rows.append(_row("polar", "cube3_polar", v, exact, abs(v - exact) <= 1e-5))
    v, _ = polar_volume(ball_evaluator(2), build_quadrature(2, 2**8))
    rows.append(_row("polar", "disk_polar", v, math.pi**2, abs(v - math.pi**2) <= 1e-9))
    return rows


def suite_rate(seed, profile, threads):
    rows = []
    res = 2**14 if profile == "precise" else 2**12
    ps = [2.0**k for k in range(8, 15)]
    fits = {}
    for name, body in (("square", cube(2)), ("disk", Ball(2))):
        kinks = None if isinstance(body, Ball) else body.normals
        rule = build_quadrature(2, res, kinks=kinks)
        series = rate_series(body, ps, rule, name, threads=threads)
        slack = min(min(pt.R - (pt.L - 3 * pt.err), (pt.U + 3 * pt.err) - pt.R) for pt in series.points)
        rows.append(_row("rate", f"band_containment_{name}", slack, 0.0, slack >= 0.0))
        fits[name] = fit_rate_model(series)
    gap = fits["square"].a - fits["disk"].a
    rows.append(_row("rate", "fitted_limit_gap_square_disk", gap, 0.5, gap >= 0.5))
    return rows


def suite_approx(seed, profile, threads):
    rows = []
    P = cube(2)
    rule = build_quadrature(2, 2**12, kinks=P.vertices)
    m = 10**4 if profile == "precise" else 2000
    reports = theorem2_pipeline(P, [2.0**k for k in range(4, 13)], rule, m=m,
                                margin_ps=(4.0, 16.0, 64.0), seed=seed)
    rows.append(_row("approx", "all_contained", sum(r.contained for r in reports), len(reports),
                     all(r.contained for r in reports)))
    p0 = find_p0(reports, (16.0, 4096.0))
    rows.append(_row("approx", "p0_square", math.nan if p0 is None else p0, 4096.0, p0 is not None))
    for r in reports:
        if not math.isnan(r.worst_margin):
            rows.append(_row("approx", f"convexity_margin_p{r.p:g}", r.worst_margin, -1e-9,
                             r.worst_margin >= -1e-9))
    return rows


SUITES = {
    "special": suite_special,
    "polytope": suite_polytope,
    "sections": suite_sections,
    "centroid": suite_centroid,
    "polar": suite_polar,
    "rate": suite_rate,
    "approx": suite_approx,
}


def run_suites(names, seed=0, profile="fast", threads=1):
    rows = []
    for name in names:
        rows.extend(SUITES[name](seed, profile, threads))
    return rows
