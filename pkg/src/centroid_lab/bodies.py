"""Built-in body families: cubes, cross-polytopes, regular polygons, the ball."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .polytope import build_polytope
from .special import ball_volume, sphere_area

__all__ = ["cube", "cross_polytope", "regular_polygon", "Ball"]


def cube(n, side=1.0):
    """Axis-parallel cube ``[-side/2, side/2]^n``."""
    corners = np.array(list(itertools.product((-0.5, 0.5), repeat=n))) * side
    return build_polytope(corners, family="cube")


def cross_polytope(n, a=None):
    """``conv(±a e_i)``; the default ``a`` gives volume 1."""
    if a is None:
        a = 0.5 * math.factorial(n) ** (1.0 / n)
    eye = np.eye(n) * a
    return build_polytope(np.vstack([eye, -eye]), family="cross")


def regular_polygon(m, circumradius=None):
    """Regular m-gon (m even) centred at the origin with a vertex on the x-axis.

    The default circumradius gives area 1.
    """
    if m < 4 or m % 2:
        raise ValueError("a symmetric regular polygon needs an even m >= 4")
    if circumradius is None:
        circumradius = math.sqrt(2.0 / (m * math.sin(2.0 * math.pi / m)))
    k = np.arange(m)
    ang = 2.0 * math.pi * k / m
    pts = circumradius * np.column_stack([np.cos(ang), np.sin(ang)])
    # make antipodes exact
    half = m // 2
    pts[half:] = -pts[:half]
    return build_polytope(pts, family="polygon")


@dataclass(frozen=True)
class Ball:
    """Euclidean ball of volume 1 in R^n (analytic body, no polytope operations)."""

    dim: int

    @property
    def radius(self):
        return ball_volume(self.dim) ** (-1.0 / self.dim)

    @property
    def volume(self):
        return 1.0

    def support(self, theta):
        return self.radius

    def polar_volume_exact(self):
        """Volume of the polar ball ``(1/r) B``."""
        return ball_volume(self.dim) / self.radius**self.dim

    @property
    def surface(self):
        return sphere_area(self.dim)
