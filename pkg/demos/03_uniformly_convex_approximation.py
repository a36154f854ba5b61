"""Approximating a polygon from outside by p-uniformly convex bodies.

For a polytope P the body K_p (a rescaled polar L_p-centroid body of the
normalized polar of P) contains P, is p-uniformly convex, and its volume
excess |K_p| - |P| decays like log p / p.
"""

# %% Build the reports
import math

from centroid_lab import build_quadrature, cube, regular_polygon
from centroid_lab.convergence import find_p0, theorem2_pipeline

grid = [2.0**k for k in range(4, 13)]
for name, P in (("square", cube(2)), ("hexagon", regular_polygon(6))):
    # the gauge of P has kinks at its vertex directions
    rule = build_quadrature(2, 2**12, kinks=P.vertices)
    reports = theorem2_pipeline(P, grid, rule, m=2000, margin_ps=(16.0,), seed=1)
    print(f"\n{name}")
    print(f"{'p':>6} {'d_s':>12} {'bound':>10} {'p d_s / log p':>14} {'margin':>10}")
    for r in reports:
        margin = "" if math.isnan(r.worst_margin) else f"{r.worst_margin:10.2e}"
        print(f"{r.p:6.0f} {r.ds:12.6e} {r.bound:10.6f} {r.p * r.ds / math.log(r.p):14.6f} {margin}")
    print("p0 =", find_p0(reports, (grid[0], grid[-1])))

# %% Reading the table
# The column p d_s / log p settles near a constant below 2 n^2 |P| = 8,
# which is the slope in the excess bound.  The convexity margin is
# non-negative, so the sampled pairs respect the modulus 1/(p 2^p).
