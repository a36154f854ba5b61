"""How fast does |Z_p°(K)| approach |K°|?  Square against disk.

The normalized rate R(p) = (p / log p)(|Z_p°| - |K°|)/|K°| tends to n^2 for
polytopes and to n(n+1)/2 for smooth bodies.  This script computes R(p) for
the unit square and the volume-one disk, checks each value against its
exact finite-p band and fits the three-term model.  Expect a few seconds.
"""

# %% Setup
import math
import sys

from centroid_lab import Ball, build_quadrature, cube, fit_rate_model, rate_series
from centroid_lab.io import write_csv

ps = [2.0**k for k in range(6, 17)]
square = cube(2)
# panel boundaries at the facet normals keep Simpson's rule fourth order
rule_square = build_quadrature(2, 2**14, kinks=square.normals)
rule_disk = build_quadrature(2, 2**10)

# %% Rate series
series = {
    "square": rate_series(square, ps, rule_square, "square"),
    "disk": rate_series(Ball(2), ps, rule_disk, "disk"),
}
print(f"{'p':>8} {'R square':>10} {'R disk':>10} {'L':>8} {'U':>8}")
for a, b in zip(series["square"].points, series["disk"].points):
    print(f"{a.p:8.0f} {a.R:10.5f} {b.R:10.5f} {a.L:8.4f} {a.U:8.4f}")

# %% Note the dip of the square series
# R(p) for the square decreases until roughly p = 500 before it starts to
# climb toward 4, so the approach to the limit is not monotone at small p.

# %% Three-term fit
for name, s in series.items():
    for p_min in (2.0**8, 2.0**10):
        f = fit_rate_model(s, p_min)
        print(f"{name:7s} p >= {p_min:6.0f}: a={f.a:.4f} b={f.b:+.4f} c={f.c:+.4f} rms={f.rms:.1e}")
print("targets: square 4, disk 3")

# %% Optional CSV
if len(sys.argv) > 1:
    rows = [
        (name, s.n, pt.p, pt.R, pt.err, pt.L, pt.U, pt.zp_polar, pt.k_polar)
        for name, s in series.items()
        for pt in s.points
    ]
    write_csv(rows, ["body", "n", "p", "R", "err", "L", "U", "Zp_polar", "K_polar"], sys.argv[1])
    print("wrote", sys.argv[1])
