"""Section profiles against an oracle built from the facet inequalities."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection

from centroid_lab.errors import OutOfRange
from centroid_lab.polytope import random_directions
from centroid_lab.sections import eval_log_derivative, orthonormal_frame, section_profile


def hrep_slice(P, theta, t):
    """(n-1)-volume of {y : A (t theta + F y) <= b} computed from the H-description."""
    F = orthonormal_frame(theta)
    A = P.normals @ F
    b = P.offsets - t * (P.normals @ theta)
    if P.dim == 2:
        lo, hi = -np.inf, np.inf
        for a, c in zip(A[:, 0], b):
            if abs(a) < 1e-15:
                if c < 0:
                    return 0.0
            elif a > 0:
                hi = min(hi, c / a)
            else:
                lo = max(lo, c / a)
        return max(hi - lo, 0.0)
    # Chebyshev centre for an interior point, then intersect halfspaces
    norms = np.linalg.norm(A, axis=1)
    res = linprog(np.r_[np.zeros(A.shape[1]), -1.0], A_ub=np.c_[A, norms], b_ub=b,
                  bounds=[(None, None)] * A.shape[1] + [(0, None)], method="highs")
    if res.status != 0 or res.x[-1] < 1e-9:
        return 0.0
    hs = HalfspaceIntersection(np.c_[A, -b], res.x[:-1])
    return ConvexHull(hs.intersections).volume


BODIES = ["square", "hexagon", "cross2", "cube3", "octahedron"]


@pytest.mark.parametrize("name", BODIES)
def test_profile_matches_hrep_oracle(name, request):
    P = request.getfixturevalue(name)
    for theta in random_directions(P.dim, 6, 5):
        prof = section_profile(P, theta)
        for t in np.linspace(0, prof.h, 23)[:-1]:
            assert prof(t) == pytest.approx(hrep_slice(P, theta, t), rel=1e-9, abs=1e-12)


def test_thirty_degrees(square):
    th = np.array([math.cos(math.pi / 6), math.sin(math.pi / 6)])
    prof = section_profile(square, th)
    assert len(prof.coeffs) == 2
    assert prof.breakpoints[1] == pytest.approx(0.1830127018922193, rel=1e-12)
    assert prof.h == pytest.approx(0.6830127018922193, rel=1e-14)
    last = prof.coeffs[-1]
    assert last[0] == 0.0 and last[1] > 0  # linear in (h - t), zero at h
    assert prof(prof.h) == 0.0
    # first piece is the constant 1/cos(30°)
    assert prof(0.05) == pytest.approx(1 / math.cos(math.pi / 6), rel=1e-13)


@pytest.mark.parametrize("name", BODIES)
def test_profile_integrates_to_volume(name, request):
    P = request.getfixturevalue(name)
    for theta in random_directions(P.dim, 5, 2):
        prof = section_profile(P, theta)
        total = 0.0
        for j, c in enumerate(prof.coeffs):
            w = prof.breakpoints[j + 1] - prof.breakpoints[j]
            total += sum(ck * w ** (k + 1) / (k + 1) for k, ck in enumerate(c))
        assert 2 * total == pytest.approx(P.volume, rel=1e-12)


@pytest.mark.parametrize("name", BODIES)
def test_brunn_sandwich_and_concavity(name, request):
    P = request.getfixturevalue(name)
    n = P.dim
    for theta in random_directions(n, 10, 9):
        prof = section_profile(P, theta)
        t = np.linspace(0, prof.h, 1000)
        f = prof(t)
        assert np.all((1 - t / prof.h) ** (n - 1) * f[0] <= f + 1e-9)
        assert np.all(f <= f[0] + 1e-9)
        for j in range(len(prof.coeffs)):
            a, b = prof.breakpoints[j], prof.breakpoints[j + 1]
            x = np.linspace(a, b, 256)
            g = np.maximum(prof(x), 0.0) ** (1.0 / (n - 1))
            mid = np.maximum(prof(0.5 * (x[:-2] + x[2:])), 0.0) ** (1.0 / (n - 1))
            assert np.all(mid >= 0.5 * (g[:-2] + g[2:]) - 1e-9)


@pytest.mark.parametrize("name", ["square", "cube3", "octahedron"])
def test_cone_tail(name, request):
    P = request.getfixturevalue(name)
    for theta in random_directions(P.dim, 10, 4):
        prof = section_profile(P, theta)
        if prof.s_theta is None:
            continue
        s = prof.s_theta
        ts = np.linspace(max(s, prof.breakpoints[-2]), prof.h, 7)
        e = prof.coeffs[-1][-1]
        np.testing.assert_allclose(prof(ts), e * (prof.h - ts) ** (P.dim - 1), rtol=1e-12, atol=1e-15)


def test_out_of_range(square):
    prof = section_profile(square, np.array([0.6, 0.8]))
    with pytest.raises(OutOfRange):
        prof(prof.h * 1.01)
    with pytest.raises(OutOfRange):
        prof(-0.1)


def test_log_derivative(cube3):
    theta = random_directions(3, 1, 1)[0]
    prof = section_profile(cube3, theta)
    t = 0.5 * (prof.breakpoints[-2] + prof.h)
    eps = 1e-6
    fd = (math.log(prof(t + eps)) - math.log(prof(t - eps))) / (2 * eps)
    assert eval_log_derivative(prof, t, "left") == pytest.approx(fd, rel=1e-6)
    assert eval_log_derivative(prof, t, "right") == pytest.approx(fd, rel=1e-6)


def test_frame_is_orthonormal():
    th = np.array([1.0, 2.0, 2.0]) / 3.0
    F = orthonormal_frame(th)
    np.testing.assert_allclose(F.T @ F, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(th @ F, 0.0, atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.0, max_value=math.pi))
def test_square_profile_closed_form(phi):
    from centroid_lab.bodies import cube

    sq = cube(2)
    th = np.array([math.cos(phi), math.sin(phi)])
    prof = section_profile(sq, th)
    # independent: chord length of the unit square on the line <x, th> = t
    for t in np.linspace(0, prof.h, 9)[:-1]:
        assert prof(t) == pytest.approx(hrep_slice(sq, th, t), rel=1e-9, abs=1e-12)
