"""Rate experiments, the asymptotic fit and the uniformly convex approximation."""

import math

import mpmath as mp
import numpy as np
import pytest

from centroid_lab.bodies import Ball, cross_polytope, cube
from centroid_lab.centroid import ProfileBank, centroid_evaluator, polytope_evaluator, scaled_evaluator
from centroid_lab.convergence import (
    contained_in,
    find_p0,
    fit_rate_model,
    gauge,
    rate_band,
    rate_point,
    rate_series,
    symmetric_difference,
    theorem2_construct,
    theorem2_pipeline,
    uniform_convexity_probe,
)
from centroid_lab.errors import InsufficientPoints, NotContained, UnsupportedDimension
from centroid_lab.polar import polar_volume_difference
from centroid_lab.polytope import normalize_unit_volume, polar, random_directions
from centroid_lab.quadrature import build_quadrature


def square_moment(y, p):
    """int_{[-1/2,1/2]^2} |<x, y>|^p dx in closed form (mpmath, any y with nonzero entries)."""
    a, b = (abs(mp.mpf(float(v))) for v in y)
    p = mp.mpf(p)
    return 2 * (((a + b) / 2) ** (p + 2) - (abs(a - b) / 2) ** (p + 2)) / (a * b * (p + 1) * (p + 2))


def square_rate_oracle(p):
    """R(p) for the unit square by adaptive mpmath quadrature over one octant."""
    mp.mp.dps = 40
    p = mp.mpf(p)

    def integrand(phi):
        c, s = mp.cos(phi), mp.sin(phi)
        hz = square_moment((c, s), p) ** (1 / p)
        return hz**-2 - ((c + s) / 2) ** -2

    dv = 8 * mp.quad(integrand, mp.linspace(mp.mpf(10) ** -30, mp.pi / 4, 9)) / 2
    return float(p / mp.log(p) * dv / 8)


@pytest.fixture(scope="module")
def square_rule():
    return build_quadrature(2, 2**14, kinks=cube(2).normals)


def test_rate_band_values():
    L, U = rate_band(1024, 2)
    # re-derived from the formulas with mpmath
    assert L == pytest.approx(1.8112955693124335, rel=1e-13)
    assert U == pytest.approx(4.0555120183420131, rel=1e-13)
    for p in (2, 3, 10, 1e3, 1e6):
        for n in (2, 3, 4):
            lo, hi = rate_band(p, n)
            assert lo < hi
    lo, hi = rate_band(1e300, 2)
    assert lo == pytest.approx(2, rel=1e-2) and hi == pytest.approx(4, rel=1e-2)
    with pytest.raises(ValueError):
        rate_band(1.5, 2)


def test_fit_recovers_exact_model():
    ps = [2.0**k for k in range(8, 17)]
    data = [(p, 4 - 2 * math.log(math.log(p)) / math.log(p) + 1 / math.log(p)) for p in ps]
    fit = fit_rate_model(data)
    assert (fit.a, fit.b, fit.c) == pytest.approx((4, -2, 1), abs=1e-10)
    assert fit.rms < 1e-12
    with pytest.raises(InsufficientPoints):
        fit_rate_model(data, p_min=2.0**14)


@pytest.mark.parametrize("p", [256.0, 1024.0, 8192.0])
def test_square_rate_matches_oracle(square_rule, p):
    pt = rate_point(cube(2), p, square_rule)
    assert pt.R == pytest.approx(square_rate_oracle(p), abs=max(3 * pt.err, 1e-11))
    assert pt.L - 3 * pt.err <= pt.R <= pt.U + 3 * pt.err


def test_rate_trend_and_disk(square_rule):
    sq = rate_series(cube(2), [2.0**10, 2.0**14], square_rule, "square")
    assert sq.points[1].R > sq.points[0].R
    disk = rate_point(Ball(2), 2.0**14, square_rule)
    assert 2.5 <= disk.R <= 3.5
    assert disk.L <= disk.R <= disk.U


def test_rate_series_threads_identical(square_rule):
    ps = [2.0**k for k in range(8, 12)]
    one = rate_series(cube(2), ps, square_rule, threads=1)
    two = rate_series(cube(2), ps, square_rule, threads=2)
    assert [tuple(p) for p in one.points] == [tuple(p) for p in two.points]


def test_rate_cube3_in_band():
    rule = build_quadrature(3, 4)
    pt = rate_point(cube(3), 64.0, rule)
    assert pt.L - 3 * pt.err <= pt.R <= pt.U + 3 * pt.err
    with pytest.raises(UnsupportedDimension):
        rate_point(cube(4), 64.0, build_quadrature(4, 64))


def test_theorem2_containment_and_bound():
    P = cube(2)
    K = theorem2_construct(P, 64.0)
    assert np.all(gauge(K, P.vertices) <= 1 + 1e-9)
    K1 = theorem2_construct(P, 1.0)  # p = n - 1: upper Prop 1 constant is exactly 1
    assert contained_in(P, K1)
    rule = build_quadrature(2, 2**12, kinks=P.vertices)
    ds = symmetric_difference(P, K, rule)
    assert 0 < ds <= 8 * math.log(64) / 64
    assert 8 * math.log(64) / 64 == pytest.approx(0.51986038541995898, rel=1e-14)


def test_theorem2_identity():
    P = cube(2)
    p = 64.0
    rule = build_quadrature(2, 2**12, kinks=P.vertices)
    lhs = symmetric_difference(P, theorem2_construct(P, p), rule)
    Q = polar(P)
    P1 = normalize_unit_volume(Q)
    diff, _ = polar_volume_difference(centroid_evaluator(P1, p), polytope_evaluator(P1), rule)
    assert lhs == pytest.approx(diff / Q.volume, rel=1e-9)


def test_symmetric_difference_trivial_and_guard():
    P = cross_polytope(2)
    rule = build_quadrature(2, 2**10, kinks=P.vertices)
    Kp = polar(P)
    # the gauge of P is the support function of its polar
    gauge_P = scaled_evaluator(polytope_evaluator(Kp), 1.0)
    assert symmetric_difference(P, gauge_P, rule) == pytest.approx(0.0, abs=1e-12)
    smaller = scaled_evaluator(polytope_evaluator(Kp), 1.5)
    with pytest.raises(NotContained):
        symmetric_difference(P, smaller, rule)


def test_ds_monotone():
    P = cube(2)
    rule = build_quadrature(2, 2**12, kinks=P.vertices)
    reps = theorem2_pipeline(P, [2.0**8, 2.0**12], rule)
    assert reps[1].ds <= reps[0].ds
    assert all(r.contained and r.ds >= 0 for r in reps)


def test_find_p0():
    from centroid_lab.convergence import ApproximationReport as A

    reps = [A(4.0, 3.0, 2.0, True, 0.0), A(8.0, 1.0, 2.0, True, 0.0), A(16.0, 0.5, 1.0, True, 0.0)]
    assert find_p0(reps) == 8.0
    assert find_p0(reps, (16.0, 16.0)) == 16.0
    assert find_p0([A(4.0, 3.0, 2.0, True, 0.0)]) is None


def test_uniform_convexity_probe():
    P = cube(2)
    K = theorem2_construct(P, 4.0)
    assert uniform_convexity_probe(K, 4.0, 10**4, 0) >= -1e-9
    # degenerate pairs
    x = np.array([[0.3, 0.4]])
    x = x / gauge(K, x)[0]
    assert 1 - gauge(K, x)[0] == pytest.approx(0.0, abs=1e-14)
    cp = 1 / (4 * 2**4)
    assert 1 - cp * gauge(K, 2 * x)[0] ** 4 - gauge(K, 0 * x)[0] == pytest.approx(1 - 1 / 4, rel=1e-12)


def test_gauge_consistency_with_membership():
    # y lies in Z_p° iff int_K |<x, y>|^p dx <= 1, computed here in closed form
    mp.mp.dps = 30
    P = cube(2)
    p = 12.0
    ev = centroid_evaluator(P, p, ProfileBank(P))
    rng = np.random.default_rng(4)
    pts = rng.uniform(-6, 6, size=(1000, 2))
    g = gauge(ev, pts)
    checked = 0
    for y, gy in zip(pts, g):
        if abs(gy - 1) < 1e-9 or np.any(np.abs(y) < 1e-6):
            continue
        inside = square_moment(y, p) <= 1
        assert inside == (gy <= 1)
        checked += 1
    assert checked > 900
