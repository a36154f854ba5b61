"""Command-line harness: ``centroid-lab <subcommand> [options]``.

Subcommands
-----------
body       inspect a body (vertices, facets, volume, geometric constants)
support    h_{Z_p(K)}(theta) with the Proposition-1 style ratio band
profile    piecewise-polynomial section function along theta
polarvol   polar volume of K (and of Z_p(K)) by quadrature
rate       normalized rate R(p) with its finite-p band, CSV per (body, p)
fit        three-term asymptotic fit of a rate CSV
approx     uniformly convex approximation K_p of a polytope (d_s, bound, margin)
verify     run the invariant suites; exit status 1 on any failure

Exit status is 0 on success, 1 when a verification fails and 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import os
import sys

import numpy as np

from . import __version__
from .bodies import Ball
from .centroid import (
    ball_evaluator,
    ball_support,
    centroid_evaluator,
    centroid_support,
    polytope_evaluator,
    prop1_band,
    t_peak,
)
from .convergence import (
    fit_rate_model,
    find_p0,
    rate_series,
    theorem2_pipeline,
)
from .errors import CentroidLabError
from .io import load_body, parse_body_spec, write_csv
from .polar import polar_volume, polar_volume_exact
from .polytope import geometric_constants
from .quadrature import build_quadrature
from .sections import section_profile

# default quadrature resolution per dimension for each tolerance profile
RESOLUTION = {
    "fast": {2: 2**11, 3: 3, "qmc": 2**12},
    "precise": {2: 2**14, 3: 5, "qmc": 2**16},
}

RATE_HEADER = ["body", "n", "p", "R", "err", "L", "U", "Zp_polar", "K_polar"]
FIT_HEADER = ["body", "a", "b", "c", "rms", "p_min"]
APPROX_HEADER = ["body", "p", "ds", "bound", "contained", "worst_margin"]
VERIFY_HEADER = ["suite", "check", "value", "bound", "passed"]


class UsageError(Exception):
    pass


def _floats(text):
    try:
        return [float(eval_power(tok)) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


def eval_power(tok):
    """Accept ``1024`` as well as ``2^10``."""
    tok = tok.strip()
    if "^" in tok:
        base, exp = tok.split("^", 1)
        return float(base) ** float(exp)
    return float(tok)


def _direction(text, n):
    v = np.array(_floats(text))
    if len(v) != n:
        raise UsageError(f"--theta needs {n} components, got {len(v)}")
    norm = np.linalg.norm(v)
    if norm == 0:
        raise UsageError("--theta must be nonzero")
    return v / norm


def _body(args):
    spec = parse_body_spec(args.body, normalize=args.normalize)
    return spec, load_body(spec)


def _rule(args, n, kinks=None):
    if args.resolution is not None:
        res = args.resolution
    else:
        table = RESOLUTION[args.tol_profile]
        res = table.get(n, table["qmc"])
    return build_quadrature(n, res, seed=args.seed, kinks=kinks if n == 2 else None)


def _g(x):
    return "%.7g" % x


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# subcommands


def cmd_body(args):
    spec, K = _body(args)
    if isinstance(K, Ball):
        print(f"body     {spec.label} (analytic ball)")
        print(f"n        {K.dim}")
        print(f"volume   {_g(K.volume)}")
        print(f"radius   {_g(K.radius)}")
        print(f"polar    {_g(K.polar_volume_exact())}")
        return 0
    print(f"body     {spec.label}")
    print(f"n        {K.dim}")
    print(f"vertices {K.n_vertices}")
    print(f"facets   {len(K.normals)}")
    print(f"edges    {len(K.edges)}")
    print(f"volume   {_g(K.volume)}")
    c = geometric_constants(K)
    print(f"r0       {_g(c.r0)}")
    print(f"h0       {_g(c.h0)}")
    print(f"HK       {_g(c.HK)}")
    print(f"alpha    {_g(c.alpha)}")
    if K.dim <= 3 or K.family:
        print(f"polar    {_g(polar_volume_exact(K))}")
    return 0


def cmd_support(args):
    _, K = _body(args)
    theta = _direction(args.theta, K.dim)
    for p in _floats(args.p):
        if isinstance(K, Ball):
            print(_g(ball_support(K.dim, p)))
        elif args.band:
            lo, ratio, hi = prop1_band(K, p, theta)
            print(f"{_g(centroid_support(K, p, theta))} ratio {_g(ratio)} band [{_g(lo)}, {_g(hi)}]")
        else:
            print(_g(centroid_support(K, p, theta)))
    return 0


def cmd_profile(args):
    _, K = _body(args)
    if isinstance(K, Ball):
        raise UsageError("profile needs a polytope body")
    theta = _direction(args.theta, K.dim)
    prof = section_profile(K, theta)
    if args.samples:
        t = np.linspace(0.0, prof.h, args.samples)
        rows = [(float(ti), float(fi)) for ti, fi in zip(t, prof(t))]
        _emit(write_csv(rows, ["t", "f"]), args.out)
        return 0
    print(f"h        {_g(prof.h)}")
    print(f"s_theta  {'tie' if prof.s_theta is None else _g(prof.s_theta)}")
    for j, c in enumerate(prof.coeffs):
        a, b = prof.breakpoints[j], prof.breakpoints[j + 1]
        terms = " ".join(_g(x) for x in c)
        print(f"[{_g(a)}, {_g(b)}]  powers of ({_g(b)} - t): {terms}")
    for p in _floats(args.p) if args.p else []:
        print(f"t_peak(p={p:g}) {_g(t_peak(prof, p))}")
    return 0


def cmd_polarvol(args):
    spec, K = _body(args)
    n = K.dim
    if isinstance(K, Ball):
        hk = ball_evaluator(n)
    else:
        hk = polytope_evaluator(K)
    rule = _rule(args, n, hk.kinks)
    val, err = polar_volume(hk, rule)
    rows = [(spec.label, n, "K", val, err, _exact_or_nan(K))]
    for p in _floats(args.p) if args.p else []:
        hz = ball_evaluator(n, p) if isinstance(K, Ball) else centroid_evaluator(K, p)
        v, e = polar_volume(hz, rule)
        rows.append((spec.label, n, f"Z_{p:g}", v, e, math.nan))
    _emit(write_csv(rows, ["body", "n", "of", "polar_volume", "err", "exact"]), args.out)
    return 0


def _exact_or_nan(K):
    try:
        return polar_volume_exact(K)
    except CentroidLabError:
        return math.nan


def _rate_rows(label, series):
    return [
        (label, series.n, pt.p, pt.R, pt.err, pt.L, pt.U, pt.zp_polar, pt.k_polar)
        for pt in series.points
    ]


def cmd_rate(args):
    spec, K = _body(args)
    kinks = None if isinstance(K, Ball) else K.normals
    rule = _rule(args, K.dim, kinks)
    series = rate_series(K, _floats(args.p), rule, spec.label, threads=args.threads)
    _emit(write_csv(_rate_rows(spec.label, series), RATE_HEADER), args.out)
    for pt in series.points:
        if not (pt.L - 3 * pt.err <= pt.R <= pt.U + 3 * pt.err):
            print(f"warning: R({pt.p:g}) = {pt.R!r} outside its band", file=sys.stderr)
    return 0


def cmd_fit(args):
    groups = {}
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                groups.setdefault(row["body"], []).append((float(row["p"]), float(row["R"])))
    else:
        if not (args.body and args.p):
            raise UsageError("fit needs --in RATE_CSV or both --body and --p")
        spec, K = _body(args)
        kinks = None if isinstance(K, Ball) else K.normals
        series = rate_series(K, _floats(args.p), _rule(args, K.dim, kinks), spec.label, args.threads)
        groups[spec.label] = [(pt.p, pt.R) for pt in series.points]
    rows = []
    for label, data in groups.items():
        f = fit_rate_model(data, args.p_min)
        rows.append((label, f.a, f.b, f.c, f.rms, f.p_min))
    _emit(write_csv(rows, FIT_HEADER), args.out)
    return 0


def cmd_approx(args):
    spec, P = _body(args)
    if isinstance(P, Ball):
        raise UsageError("approx needs a polytope body")
    rule = _rule(args, P.dim, P.vertices)
    ps = _floats(args.p)
    margin_ps = tuple(_floats(args.margin_p)) if args.margin_p else ()
    reports = theorem2_pipeline(P, ps, rule, m=args.pairs, margin_ps=margin_ps, seed=args.seed)
    rows = [(spec.label, r.p, r.ds, r.bound, r.contained, r.worst_margin) for r in reports]
    _emit(write_csv(rows, APPROX_HEADER), args.out)
    p0 = find_p0(reports, (min(ps), max(ps)))
    print(f"p0 = {'none' if p0 is None else f'{p0:g}'}", file=sys.stderr)
    return 0


def cmd_verify(args):
    from .verify import SUITES, run_suites

    names = list(SUITES) if args.suite == "all" else [args.suite]
    rows = run_suites(names, seed=args.seed, profile=args.tol_profile, threads=args.threads)
    _emit(write_csv(rows, VERIFY_HEADER), args.out)
    failed = [r for r in rows if not r[-1]]
    for r in failed:
        print(f"FAILED {r[0]}:{r[1]} value={r[2]!r} bound={r[3]!r}", file=sys.stderr)
    print(f"{len(rows) - len(failed)}/{len(rows)} checks passed", file=sys.stderr)
    return 1 if failed else 0


# --------------------------------------------------------------------------
# parser


def _default_threads():
    env = os.environ.get("CENTROID_LAB_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for sampled directions (default 0)")
    common.add_argument(
        "--threads", type=int, default=_default_threads(),
        help="worker threads (default: $CENTROID_LAB_THREADS or 1)",
    )
    common.add_argument("--tol-profile", choices=("fast", "precise"), default="precise")
    common.add_argument("--resolution", type=int, help="override the quadrature resolution")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    body = argparse.ArgumentParser(add_help=False)
    body.add_argument(
        "--body", required=True,
        help="builtin:cube:N | builtin:cross:N | builtin:polygon:M | builtin:ball:N | path to a body file",
    )
    body.add_argument("--normalize", action="store_true", help="rescale a polytope to volume 1")

    parser = argparse.ArgumentParser(
        prog="centroid-lab",
        description="Numerical experiments with L_p-centroid bodies and their polars.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sp = sub.add_parser("body", parents=[common, body], help="inspect a body")
    sp.set_defaults(func=cmd_body)

    sp = sub.add_parser("support", parents=[common, body], help="centroid-body support value")
    sp.add_argument("--p", required=True, help="comma-separated p values (2^k allowed)")
    sp.add_argument("--theta", required=True, help="direction, e.g. 1,0 (normalized for you)")
    sp.add_argument("--band", action="store_true", help="also print the ratio to h_K and its band")
    sp.set_defaults(func=cmd_support)

    sp = sub.add_parser("profile", parents=[common, body], help="section function along theta")
    sp.add_argument("--theta", required=True)
    sp.add_argument("--p", help="also report t_peak for these p")
    sp.add_argument("--samples", type=int, default=0, help="emit (t, f(t)) CSV with this many points")
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("polarvol", parents=[common, body], help="polar volume by quadrature")
    sp.add_argument("--p", help="also integrate the polar of Z_p for these p")
    sp.set_defaults(func=cmd_polarvol)

    sp = sub.add_parser("rate", parents=[common, body], help="R(p) series as CSV")
    sp.add_argument("--p", required=True)
    sp.set_defaults(func=cmd_rate)

    fit_body = argparse.ArgumentParser(add_help=False)
    fit_body.add_argument("--body")
    fit_body.add_argument("--normalize", action="store_true")
    sp = sub.add_parser("fit", parents=[common, fit_body], help="fit a + b loglog p/log p + c/log p")
    sp.add_argument("--in", dest="input", help="rate CSV produced by 'rate'")
    sp.add_argument("--p")
    sp.add_argument("--p-min", type=float, default=0.0)
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("approx", parents=[common, body], help="uniformly convex approximation report")
    sp.add_argument("--p", default=",".join(f"2^{k}" for k in range(4, 13)))
    sp.add_argument("--pairs", type=int, default=10000, help="sampled pairs for the convexity probe")
    sp.add_argument("--margin-p", default="4,16,64", help="p values at which to run the probe")
    sp.set_defaults(func=cmd_approx)

    sp = sub.add_parser("verify", parents=[common], help="run invariant suites")
    sp.add_argument(
        "--suite", default="all",
        choices=("all", "special", "polytope", "sections", "centroid", "polar", "rate", "approx"),
    )
    sp.set_defaults(func=cmd_verify, tol_profile="fast")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError, CentroidLabError) as exc:
        print(f"centroid-lab {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
