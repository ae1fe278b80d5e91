"""torharm-plot: render a GridFileV1 map to PNG."""

from __future__ import annotations

import argparse
import sys

from .gridfile import GridParseError
from .render import PlotSpec, render


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    return float(parts[0]), float(parts[1])


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="torharm-plot", description=__doc__)
    parser.add_argument("--in", dest="input_path", required=True)
    parser.add_argument("--out", dest="output_path", required=True)
    parser.add_argument("--scale", choices=("linear", "log"), default="log")
    parser.add_argument("--clip", type=_pair, default=(1e-16, 1.0), metavar="LO,HI")
    parser.add_argument("--overlay", type=_pair, default=None, metavar="R0,R0MINOR")
    parser.add_argument("--mirror", action="store_true",
                        help="reflect the half-plane to the full (x, z) plane")
    parser.add_argument("--cmap", default="inferno")
    args = parser.parse_args(argv)
    try:
        spec = PlotSpec(args.input_path, args.output_path, args.scale,
                        args.clip, args.overlay, args.mirror, args.cmap)
        render(spec)
    except (GridParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
