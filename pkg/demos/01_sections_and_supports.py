"""Section functions and L_p-centroid supports of small polytopes.

Run with ``python demos/01_sections_and_supports.py``.
"""

# %% A square tilted by 30 degrees
# The parallel section function of a polygon is piecewise linear between
# vertex heights.  Along 30 degrees the unit square has one interior
# breakpoint, and the last piece is a cone tail that vanishes at h_K.
import math

import numpy as np

from centroid_lab import centroid_support, cube, prop1_band, section_profile, t_peak

square = cube(2)
theta = np.array([math.cos(math.pi / 6), math.sin(math.pi / 6)])
prof = section_profile(square, theta)
print("breakpoints", prof.breakpoints)
print("f(0) =", prof(0.0), " f(h/2) =", prof(prof.h / 2), " f(h) =", prof(prof.h))

# %% Support of Z_p along that direction
# h_{Z_p} grows with p and approaches h_K from below.  The ratio to h_K
# stays between B(p+1, n)^{1/p} and (n/(p+1))^{1/p}.
print(f"\n{'p':>8} {'h_Zp':>12} {'ratio':>10} {'lower':>10} {'upper':>10}")
for k in range(0, 15, 2):
    p = 2.0**k
    lo, ratio, hi = prop1_band(square, p, theta, prof)
    print(f"{p:8.0f} {centroid_support(square, p, theta, prof):12.8f} {ratio:10.6f} {lo:10.6f} {hi:10.6f}")

# %% Where the mass of t^p f(t) sits
# Past the second vertex height the peak of t^p f(t) is at p/(p+n-1) h.
for p in (10.0, 100.0, 1000.0):
    print(f"p={p:6.0f}  t_peak={t_peak(prof, p):.8f}  p/(p+1) h={p / (p + 1) * prof.h:.8f}")

# %% The same for the cube in three dimensions
c3 = cube(3)
th3 = np.array([1.0, 2.0, 2.0]) / 3.0
prof3 = section_profile(c3, th3)
print("\ncube3 pieces:", len(prof3.coeffs), " s_theta =", prof3.s_theta, " h =", prof3.h)
for p in (1.0, 10.0, 100.0, 1e4):
    print(f"p={p:8.0f}  h_Zp/h_K = {centroid_support(c3, p, th3, prof3) / prof3.h:.8f}")
