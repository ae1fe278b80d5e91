"""Command-line front end.

Subcommands: eval (single harmonic value), coeffs (CoeffFileV1 JSON export),
green (cross-check of the four inverse-distance routes), torus-map (GridFileV1
field/error map).  Exit codes: 0 success, 2 numerical non-convergence,
1 usage or validation error.  Output is deterministic for fixed arguments;
numbers carry 17 significant digits so doubles round-trip.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import coeffs, expansions, greens, torus
from .coords import CartesianPoint
from .errors import TorharmError
from .special import HarmonicSpec, harmonic_eval
from .coords import to_toroidal

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; the contract says 1
        raise _UsageError(message)


def _triple(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    return tuple(float(p) for p in parts)


def _pair(cast):
    def convert(text: str):
        parts = text.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected two comma-separated values, got {text!r}")
        return cast(parts[0]), cast(parts[1])

    return convert


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _build_parser() -> _Parser:
    parser = _Parser(prog="torharm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one toroidal harmonic at a point")
    p.add_argument("--family", choices=("standard", "alt"), required=True)
    p.add_argument("--kind", choices=("ring", "axial"), required=True)
    p.add_argument("--parity", choices=("cos", "sin"), required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--point", type=_triple, required=True, metavar="X,Y,Z")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--method", choices=("direct", "spherical-series"), default="direct")

    p = sub.add_parser("coeffs", help="export a coefficient table as CoeffFileV1 JSON")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--out", default=None)

    p = sub.add_parser("green", help="compare the four inverse-distance evaluations")
    p.add_argument("--p1", type=_triple, required=True, metavar="X,Y,Z")
    p.add_argument("--p2", type=_triple, required=True, metavar="X,Y,Z")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--nmax", type=int, default=80)
    p.add_argument("--mmax", type=int, default=40)

    p = sub.add_parser("torus-map", help="write a GridFileV1 field or error map")
    p.add_argument("--R0", type=float, default=1.0)
    p.add_argument("--r0", type=float, default=0.5)
    p.add_argument("--V0", type=float, default=1.0)
    p.add_argument("--grid", type=_pair(int), default=(200, 200), metavar="N_RHO,N_Z")
    p.add_argument("--extent", type=_pair(float), default=(2.0, 2.0), metavar="RHO_MAX,Z_MAX")
    p.add_argument("--nmax", type=int, default=120)
    p.add_argument("--kmax", type=int, default=170)
    p.add_argument("--what", choices=("error", "potential-toroidal", "potential-spherical"),
                   default="error")
    p.add_argument("--out", default=None)
    return parser


def _cmd_eval(args) -> int:
    family = "alternate" if args.family == "alt" else "standard"
    spec = HarmonicSpec(family, args.kind, args.parity, args.n, args.m)
    point = CartesianPoint(*args.point)
    if args.method == "spherical-series":
        res = expansions.harmonic_via_spherical(spec, point, args.a, tol=args.tol)
    else:
        res = harmonic_eval(spec, to_toroidal(point, args.a), args.a, args.tol)
    flag = "OK" if res.converged else "SLOW"
    print(f"{_fmt(res.value)} {_fmt(res.est_error)} {res.terms_used} {flag}")
    return 0 if res.converged else 2


def _cmd_coeffs(args) -> int:
    table = coeffs.build_table(args.m, args.n_max, args.k_max)
    text = coeffs.to_json(table, normalized=args.normalized)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_green(args) -> int:
    pair = greens.PointPair(CartesianPoint(*args.p1), CartesianPoint(*args.p2), args.a)
    direct = greens.green_direct(pair)
    print(f"direct {_fmt(direct)}")
    results = {}
    for name, fn in (("spherical", lambda: greens.green_spherical(pair, args.nmax)),
                     ("toroidal", lambda: greens.green_toroidal(pair, args.nmax, args.mmax)),
                     ("cylindrical", lambda: greens.green_cylindrical(pair, args.mmax))):
        try:
            res = fn()
        except TorharmError as exc:
            print(f"{name} nan UNAVAILABLE ({exc})")
            continue
        if math.isnan(res.value):
            print(f"{name} nan UNAVAILABLE")
            continue
        flag = "OK" if res.converged else "SLOW"
        print(f"{name} {_fmt(res.value)} {flag}")
        results[name] = res.value
    max_dev = max((abs(v - direct) / abs(direct) for v in results.values()), default=math.inf)
    print(f"max_dev {_fmt(max_dev)}")
    return 0 if max_dev <= 1e-6 else 2


def _cmd_torus_map(args) -> int:
    geom = torus.torus_params(args.R0, args.r0)
    n_rho, n_z = args.grid
    rho_max, z_max = args.extent
    spec = torus.GridSpec(0.0, rho_max, n_rho, -z_max, z_max, n_z)
    grid = torus.error_map(geom, spec, n_max=args.nmax, k_max=args.kmax,
                           V0=args.V0, what=args.what)
    if args.out:
        with open(args.out, "w") as fh:
            grid.write(fh)
    else:
        sys.stdout.write(grid.gridfile_text())
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {"eval": _cmd_eval, "coeffs": _cmd_coeffs,
                   "green": _cmd_green, "torus-map": _cmd_torus_map}[args.command]
        return handler(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (TorharmError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
