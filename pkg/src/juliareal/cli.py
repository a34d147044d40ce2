"""Command-line front door.

Subcommands: classify, region, julia, equidist, heights, lattes, certify.
Polynomials are ascending-coefficient JSON arrays, rationals "p/q" strings.
Exit codes: 0 ok, 1 computational failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .classifier import classify_real_julia
from .cubic_region import region_scan
from .heights import canonical_height, functional_equation_residual
from .lattes import (RationalMap, WeierstrassCurve, certify_nonabelian,
                     duplication_lattes, lattes_critical_points,
                     real_surjectivity)
from .orbit import (EmpiricalMeasure, backward_orbit, empirical_cdf_distance,
                    max_imag_stat, render_filled_julia)
from .poly import Polynomial, poly_from_json


def _parse_poly(text):
    try:
        coeffs = json.loads(text)
    except json.JSONDecodeError as err:
        raise argparse.ArgumentTypeError(f"bad polynomial {text!r}: {err}")
    if not isinstance(coeffs, list) or not coeffs:
        raise argparse.ArgumentTypeError("polynomial must be a nonempty JSON array")
    return poly_from_json(coeffs)


def _parse_rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as err:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}: {err}")


def _parse_range(text):
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must be lo:hi, got {text!r}")
    return lo, hi


def _header(args):
    return f"juliareal {__version__} | {' '.join(args)}"


def _emit_json(payload, out, argv):
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(f"// {_header(argv)}\n{text}\n")
    else:
        print(text)


def _cmd_classify(args, argv):
    report = classify_real_julia(args.poly.to_float())
    _emit_json(report.to_json(args.poly), args.out, argv)
    return 0


def _cmd_region(args, argv):
    summary = region_scan(args.a_range, args.b_range, args.step)
    with open(args.out, "w", newline="") as fh:
        summary.to_csv(fh, header_comment=_header(argv))
    if args.pgm:
        a_lo, a_hi = args.a_range
        b_lo, b_hi = args.b_range
        a_count = round((a_hi - a_lo) / args.step) + 1
        b_count = round((b_hi - b_lo) / args.step) + 1
        with open(args.pgm, "wb") as fh:
            fh.write(summary.to_pgm(a_count, b_count))
    print(json.dumps({"cells": summary.cells,
                      "disagreements": summary.disagreements,
                      "max_disagree_distance": summary.max_disagree_distance}))
    return 0


def _cmd_julia(args, argv):
    re_rng = args.re_range
    im_rng = args.im_range
    width, height = (int(v) for v in args.resolution.split("x"))
    grid = render_filled_julia(args.poly, (re_rng[0], re_rng[1], im_rng[0], im_rng[1]),
                               (width, height), max_iter=args.max_iter)
    with open(args.out, "wb") as fh:
        fh.write(f"P5\n# {_header(argv)}\n{width} {height}\n255\n".encode())
        fh.write(grid.tobytes())
    print(json.dumps({"width": width, "height": height,
                      "not_escaped": int((grid == 255).sum())}))
    return 0


def _cmd_equidist(args, argv):
    orbit = backward_orbit(args.poly, float(args.alpha), args.depth)
    payload = {
        "alpha": str(args.alpha),
        "depth": args.depth,
        "points": orbit.points.size,
        "max_imag": max_imag_stat(orbit),
    }
    if args.compare_depth:
        other = backward_orbit(args.poly, float(args.alpha), args.compare_depth)
        payload["ks_distance"] = empirical_cdf_distance(
            EmpiricalMeasure.from_orbit(orbit), EmpiricalMeasure.from_orbit(other))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(f"# {_header(argv)}\r\n")
            fh.write("re,im,weight\r\n")
            w = 1.0 / orbit.points.size
            for z in orbit.points:
                fh.write(f"{z.real:.17g},{z.imag:.17g},{w:.17g}\r\n")
    print(json.dumps(payload))
    return 0


def _cmd_heights(args, argv):
    est, err = canonical_height(args.poly, args.x, args.depth)
    payload = {
        "x": str(args.x),
        "depth": args.depth,
        "estimate": est,
        "error_bound": err,
        "residual": functional_equation_residual(args.poly, args.x, args.depth),
    }
    _emit_json(payload, args.out, argv)
    return 0


def _parse_curve(text):
    try:
        a, b, c = (Fraction(v) for v in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"curve must be a,b,c  got {text!r}")
    return WeierstrassCurve(a, b, c)


def _cmd_lattes(args, argv):
    curve = args.curve
    f = duplication_lattes(curve)
    surj = real_surjectivity(curve)
    payload = {
        "curve": {"a": str(curve.a), "b": str(curve.b), "c": str(curve.c)},
        "disc": str(curve.disc),
        "map": f.to_json(),
        "critical_points": lattes_critical_points(curve),
        "surjectivity": surj,
    }
    _emit_json(payload, args.out, argv)
    return 0


def _cmd_certify(args, argv):
    if args.curve is not None:
        curve = args.curve
        cert = certify_nonabelian(duplication_lattes(curve), args.alpha, curve=curve)
    elif args.poly is not None:
        cert = certify_nonabelian(args.poly, args.alpha)
    else:
        print("certify needs --poly or --curve", file=sys.stderr)
        return 2
    _emit_json(cert.to_json(), args.out, argv)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="juliareal")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="decide whether the Julia set is real")
    p.add_argument("--poly", type=_parse_poly, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("region", help="scan the cubic parameter region")
    p.add_argument("--a-range", type=_parse_range, default=(-6.0, 1.0))
    p.add_argument("--b-range", type=_parse_range, default=(-4.0, 4.0))
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--out", required=True)
    p.add_argument("--pgm")
    p.set_defaults(func=_cmd_region)

    p = sub.add_parser("julia", help="render a filled Julia set to PGM")
    p.add_argument("--poly", type=_parse_poly, required=True)
    p.add_argument("--re-range", type=_parse_range, default=(-2.5, 2.5))
    p.add_argument("--im-range", type=_parse_range, default=(-1.0, 1.0))
    p.add_argument("--resolution", default="512x205")
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_julia)

    p = sub.add_parser("equidist", help="backward-orbit equidistribution report")
    p.add_argument("--poly", type=_parse_poly, required=True)
    p.add_argument("--alpha", type=_parse_rational, required=True)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--compare-depth", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_equidist)

    p = sub.add_parser("heights", help="canonical height report")
    p.add_argument("--poly", type=_parse_poly, required=True)
    p.add_argument("--x", type=_parse_rational, required=True)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_heights)

    p = sub.add_parser("lattes", help="duplication Lattes analysis of a curve")
    p.add_argument("--curve", type=_parse_curve, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_lattes)

    p = sub.add_parser("certify", help="non-abelian certificate")
    p.add_argument("--poly", type=_parse_poly)
    p.add_argument("--curve", type=_parse_curve)
    p.add_argument("--alpha", type=_parse_rational, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_certify)
    return ap


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args, argv)
    except (ValueError, RuntimeError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
