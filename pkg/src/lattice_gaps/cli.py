"""Command-line drivers: ball, orbit, gapcheck, spectrum, optimal, dioph, equidist.

Exit codes: 0 success, 2 usage error, 3 enumeration guard exceeded,
4 a proven inequality was observed to fail.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import ball, equidist, gaps, optimality, spectrum
from .svg import Canvas

EXIT_USAGE = 2
EXIT_GUARD = 3
EXIT_VIOLATION = 4

SYMBOLS = {
    "pi": math.pi,
    "pi/2": math.pi / 2,
    "phi": (1 + math.sqrt(5)) / 2,
    "sqrt2": math.sqrt(2),
    "e": math.e,
}


class UsageError(Exception):
    pass


def parse_coord(token: str) -> float:
    tok = token.strip().lower()
    sign = 1.0
    if tok.startswith("-"):
        sign, tok = -1.0, tok[1:]
    if tok in SYMBOLS:
        return sign * SYMBOLS[tok]
    try:
        return sign * float(Fraction(tok))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse coordinate {token!r}") from None


def parse_radius(token: str) -> Fraction:
    """T as an exact rational (decimal or fraction)."""
    tok = token.strip().lower()
    try:
        return Fraction(tok)
    except ValueError:
        pass
    raise UsageError(f"cannot parse T {token!r}; use --T-sq for irrational radii")


def _vector(args):
    if args.v_sym is not None:
        v = tuple(parse_coord(t) for t in args.v_sym)
    elif args.v is not None:
        v = tuple(parse_coord(t) for t in args.v)
    else:
        v = (1.0, math.pi / 2)
    if v == (0.0, 0.0):
        raise UsageError("v must be nonzero")
    return v


def _spec(args) -> ball.BallSpec:
    if getattr(args, "T_sq", None) is not None:
        return ball.BallSpec(Fraction(args.T_sq))
    T = parse_radius(args.T)
    if T <= 0:
        raise UsageError("T must be positive")
    return ball.BallSpec.from_radius(T)


def _num(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer, Fraction)):
        return str(x)
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return repr(float(x))


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_num(x) for x in r])
    return buf.getvalue()


def _emit(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _sibling(out, suffix: str):
    if out in (None, "-"):
        return None
    p = Path(out)
    return str(p.with_name(p.stem + suffix))


# ---------------------------------------------------------------------------


def cmd_ball(args) -> int:
    spec = _spec(args)
    rows = []
    for arr in ball.iter_ball_arrays(spec, workers=args.workers):
        ns = (arr * arr).sum(axis=1)
        rows.extend(r + [n] for r, n in zip(arr.tolist(), ns.tolist()))
    if args.format == "json":
        text = json.dumps({"T_sq": str(spec.T_sq), "count": len(rows), "rows": rows},
                          separators=(",", ":")) + "\n"
    elif args.format == "csv":
        text = _csv_text(["a", "b", "c", "d", "norm_sq"], rows)
    else:
        raise UsageError("ball supports csv and json")
    _emit(text, args.out)
    return 0


def _clip(args):
    if args.annulus is not None:
        return gaps.AnnulusClip(*args.annulus)
    if args.clip is not None:
        return gaps.Rect(*args.clip)
    return gaps.Rect(-20.0, -20.0, 20.0, 20.0)


def cmd_orbit(args) -> int:
    v = _vector(args)
    spec = _spec(args)
    clip = _clip(args)
    X, G = gaps.orbit_scatter_arrays(v, spec, clip, workers=args.workers)
    if args.format == "csv":
        rows = [(x[0], x[1], *g) for x, g in zip(X.tolist(), G.tolist())]
        _emit(_csv_text(["x", "y", "a", "b", "c", "d"], rows), args.out)
    elif args.format == "svg":
        if isinstance(clip, gaps.Rect):
            xl, yl = (clip.x0, clip.x1), (clip.y0, clip.y1)
        else:
            xl = yl = (-clip.r_max, clip.r_max)
        c = Canvas(xl, yl, title=f"orbit of v=({v[0]:.6g}, {v[1]:.6g}), T^2={spec.T_sq}, n={len(X)}")
        c.axes()
        c.points(X[:, 0], X[:, 1])
        _emit(c.render(), args.out)
    elif args.format == "json":
        _emit(json.dumps({"count": int(len(X)), "points": X.tolist(), "gammas": G.tolist()}) + "\n",
              args.out)
    print(f"orbit points in clip: {len(X)}", file=sys.stderr)
    return 0


GAP_TARGET_SCALES = [Fraction(1, 2), 1, 2, 5, 10, 20, 50, 100, 200, 500, 1000]


def cmd_gapcheck(args) -> int:
    v = _vector(args)
    spec = _spec(args)
    T = spec.T
    p, q = args.line
    h = math.hypot(p, q)
    band = args.band if args.band is not None else 10.0 / T
    scan = gaps.scan_line(v, T, (p, q), band, workers=args.workers)
    rmax = T * math.hypot(*v) * 1.05
    grid = np.geomspace(args.r_min, rmax, args.r_steps)
    curve = gaps.gap_region_curves(v, T, (p, q), grid)
    targets = [(k * p, k * q) for k in GAP_TARGET_SCALES if k * h <= rmax]
    reports = gaps.verify_gaps(v, targets, T, workers=args.workers) if targets else []
    failed = scan.violations + sum(not r.passed for r in reports)

    rep_rows = [(r.w[0], r.w[1], float(r.rho_w), r.bound, r.observed_min, r.pass_,
                 r.simplified_bound, r.simplified_pass) for r in reports]
    rep_text = _csv_text(["w_x", "w_y", "rho", "bound", "observed_min", "pass",
                          "simplified_bound", "simplified_pass"], rep_rows)
    if args.format == "csv":
        _emit(rep_text, args.out)
        pts_out = _sibling(args.out, ".points.csv")
        if pts_out:
            rows = [(r, s, g, i, *gm) for r, s, g, i, gm in
                    zip(scan.radius.tolist(), scan.slope.tolist(), scan.gap.tolist(),
                        scan.inside.tolist(), scan.gammas.tolist())]
            _emit(_csv_text(["r", "slope", "gap", "inside", "a", "b", "c", "d"], rows), pts_out)
            rows = list(zip(curve.radius_grid.tolist(), curve.upper.tolist(),
                            curve.lower.tolist(), curve.raw.tolist()))
            _emit(_csv_text(["r", "slope_gap_upper", "slope_gap_lower", "dist_gap_over_T"], rows),
                  _sibling(args.out, ".curve.csv"))
    elif args.format == "svg":
        c = Canvas((0.0, rmax), (-band, band),
                   title=f"(radius, slope) near line ({p},{q}), T^2={spec.T_sq}, inside={scan.violations}")
        c.axes()
        c.points(scan.radius, scan.slope)
        g = np.minimum(curve.upper, band)
        c.polyline(curve.radius_grid, g)
        c.polyline(curve.radius_grid, -g)
        _emit(c.render(), args.out)
        rep_out = _sibling(args.out, ".reports.csv")
        if rep_out:
            _emit(rep_text, rep_out)
    elif args.format == "json":
        _emit(json.dumps({
            "orbit_points": scan.total_points,
            "near_line": int(scan.radius.size),
            "inside_gap": scan.violations,
            "reports": [dict(zip(["w_x", "w_y", "rho", "bound", "observed_min", "pass"],
                                 [str(r[0]), str(r[1]), r[2], r[3], r[4], bool(r[5])]))
                        for r in rep_rows],
        }) + "\n", args.out)
    print(f"orbit points: {scan.total_points}, near line: {scan.radius.size}, "
          f"inside gap: {scan.violations}, reports failing: {sum(not r.passed for r in reports)}",
          file=sys.stderr)
    return EXIT_VIOLATION if failed else 0


def cmd_spectrum(args) -> int:
    v = _vector(args)
    if args.rho is not None:
        grid = args.rho
    else:
        make = np.geomspace if args.rho_scale == "log" else np.linspace
        grid = make(args.rho_min, args.rho_max, args.rho_steps).tolist()
    samples = spectrum.spectrum_curve(v, grid)
    rows = [(s.rho, s.value, s.witness[0], s.witness[1]) for s in samples]
    if args.format == "json":
        _emit(json.dumps([dict(zip(["rho", "D", "p_witness", "q_witness"], r)) for r in rows]) + "\n",
              args.out)
    else:
        _emit(_csv_text(["rho", "D", "p_witness", "q_witness"], rows), args.out)
    return 0


def cmd_optimal(args) -> int:
    T = float(parse_radius(args.T))
    vs = [_vector(args)]
    if args.sweep:
        rng = random.Random(args.seed)
        for _ in range(args.sweep):
            vs.append((rng.uniform(-10, 10), rng.uniform(-10, 10)))
    rows = []
    failed = 0
    for v in vs:
        cert = optimality.near_optimal_shear(v, T)
        failed += not cert.holds
        g = cert.gamma
        rows.append(("shear", v[0], v[1], T, "", g.a, g.b, g.c, g.d, cert.w[0], cert.w[1],
                     cert.dist, cert.bound, cert.slack, 10 * cert.bound / T, cert.holds))
    if args.q is not None:
        for q in args.q:
            c = optimality.contracting_approx(vs[0], q, T, args.eps)
            g = c.gamma
            rows.append(("contraction", vs[0][0], vs[0][1], T, q, g.a, g.b, g.c, g.d, c.w[0], c.w[1],
                         c.dist, (1 + args.eps) * c.D / T, c.rho_prime, c.rho, c.holds))
    header = ["kind", "v_x", "v_y", "T", "q", "a", "b", "c", "d", "w_x", "w_y",
              "dist", "bound", "slack_or_rho_prime", "limit_or_rho", "holds"]
    _emit(_csv_text(header, rows), args.out)
    return EXIT_VIOLATION if failed else 0


def cmd_dioph(args) -> int:
    v = _vector(args)
    T = float(parse_radius(args.T))
    grid = args.grid if args.grid else None
    rows = []
    for q in args.q:
        r = optimality.recover_details(v, q, T, grid_size=grid, workers=args.workers)
        rows.append((T, q, r.value, r.truth, r.ratio))
    text = _csv_text(["T", "q", "recovered", "truth", "ratio"], rows)
    _emit(text, args.out)
    if args.out not in (None, "-"):
        sys.stdout.write(text)
    return 0


def cmd_equidist(args) -> int:
    v = _vector(args)
    r0, r1 = args.annulus if args.annulus is not None else (1.0, 10.0)
    phis = [equidist.TestFunction(r0, r1, a0, a1, args.r_roll, args.theta_roll)
            for a0, a1 in (args.arc1, args.arc2)]
    rows = []
    for Ttok in args.T_list:
        T = float(parse_radius(Ttok))
        stats = [equidist.orbit_statistic(v, T, f, workers=args.workers) for f in phis]
        ints = [equidist.target_integral(f) for f in phis]
        for name, s, i in zip(("phi1", "phi2"), stats, ints):
            c_hat = i / (math.hypot(*v) * s.value) if s.value else float("nan")
            rows.append((T, name, s.value, s.sample_count, i, c_hat))
        lhs = stats[0].value / stats[1].value if stats[1].value else float("nan")
        rhs = ints[0] / ints[1]
        rows.append((T, "ratio", lhs, "", rhs, abs(lhs / rhs - 1)))
        n = equidist.annulus_count(v, T, equidist.Annulus(r0, r1), workers=args.workers)
        rows.append((T, "annulus", n / T, n, 2 * math.pi * (r1 - r0), ""))
    _emit(_csv_text(["T", "quantity", "value", "count", "integral", "c_hat_or_rel_err"], rows),
          args.out)
    return 0


# ---------------------------------------------------------------------------


def _common(p, vector=True, radius=True, formats=("csv",)):
    if vector:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--v", nargs=2, metavar=("X", "Y"), help="initial vector (decimals/fractions)")
        g.add_argument("--v-sym", nargs=2, metavar=("TOK", "TOK"),
                       help="initial vector, tokens may be pi/2, phi, sqrt2, pi, e")
    if radius:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--T", default="100", help="ball radius (exact decimal or fraction)")
        g.add_argument("--T-sq", dest="T_sq", help="squared ball radius, e.g. 2 for T = sqrt 2")
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", default="-")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lattice-gaps", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ball", help="list the norm ball of SL(2,Z)")
    _common(p, vector=False, formats=("csv", "json"))
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("orbit", help="orbit points in a clip region")
    _common(p, formats=("csv", "svg", "json"))
    p.add_argument("--clip", nargs=4, type=float, metavar=("X0", "Y0", "X1", "Y1"))
    p.add_argument("--annulus", nargs=2, type=float, metavar=("R0", "R1"))
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("gapcheck", help="gap around a rational line in (radius, slope) coordinates")
    _common(p, formats=("csv", "svg", "json"))
    p.add_argument("--line", nargs=2, type=int, default=(1, 0), metavar=("P", "Q"))
    p.add_argument("--band", type=float, help="half-width of the plotted slope band (default 10/T)")
    p.add_argument("--r-min", type=float, default=0.5)
    p.add_argument("--r-steps", type=int, default=400)
    p.set_defaults(func=cmd_gapcheck)

    p = sub.add_parser("spectrum", help="spectrum of periods D_v on a grid")
    _common(p, radius=False, formats=("csv", "json"))
    p.add_argument("--rho", type=float, nargs="+")
    p.add_argument("--rho-min", type=float, default=1e-4)
    p.add_argument("--rho-max", type=float, default=1e2)
    p.add_argument("--rho-steps", type=int, default=61)
    p.add_argument("--rho-scale", choices=("log", "lin"), default="log")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("optimal", help="shear and contraction certificates")
    _common(p, radius=False)
    p.add_argument("--T", default="100")
    p.add_argument("--q", type=int, nargs="+")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--sweep", type=int, default=0, help="also check N random vectors (uses --seed)")
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("dioph", help="recover inf_p |s - p/q| from the truncated orbit")
    _common(p, radius=False)
    p.add_argument("--T", default="2000")
    p.add_argument("--q", type=int, nargs="+", default=[1, 2, 3, 5, 8])
    p.add_argument("--grid", type=int, default=0, help="periods per window; 0 = whole window")
    p.set_defaults(func=cmd_dioph)

    p = sub.add_parser("equidist", help="orbit sums against two angular bumps, annulus counts")
    _common(p, radius=False)
    p.add_argument("--T", dest="T_list", nargs="+", default=["250", "500", "1000"])
    p.add_argument("--annulus", nargs=2, type=float, metavar=("R0", "R1"))
    p.add_argument("--arc1", nargs=2, type=float, default=(0.0, math.pi / 2))
    p.add_argument("--arc2", nargs=2, type=float, default=(2.0, 3.5))
    p.add_argument("--r-roll", type=float, default=0.5)
    p.add_argument("--theta-roll", type=float, default=0.1)
    p.set_defaults(func=cmd_equidist)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ball.GuardError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
