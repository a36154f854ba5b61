"""centroid_lab: L_p-centroid bodies of polytopes, their polars, and rate experiments.

The package evaluates support functions of L_p-centroid bodies through exact
piecewise-polynomial section functions, integrates polar volumes on the
sphere, and measures how fast ``|Z_p°(K)|`` approaches ``|K°|`` as ``p``
grows.
"""

__version__ = "0.1.0"

from .bodies import Ball, cross_polytope, cube, regular_polygon
from .centroid import (
    SupportEvaluator,
    ball_evaluator,
    ball_support,
    centroid_evaluator,
    centroid_support,
    polytope_evaluator,
    prop1_band,
    t_peak,
)
from .convergence import (
    ApproximationReport,
    RateSeries,
    find_p0,
    fit_rate_model,
    rate_band,
    rate_point,
    rate_series,
    symmetric_difference,
    theorem2_construct,
    uniform_convexity_probe,
)
from .errors import CentroidLabError
from .polar import polar_volume, polar_volume_difference, polar_volume_exact
from .polytope import Polytope, build_polytope, geometric_constants, normalize_unit_volume, polar
from .quadrature import QuadratureRule, build_quadrature
from .sections import SectionProfile, section_profile
