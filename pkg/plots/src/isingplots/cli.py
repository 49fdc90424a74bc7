"""Standalone figure scripts: `isingplots KIND INPUT... -o IMAGE`.

Exit codes: 0 ok, 1 schema/render failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

from isingplots.render import PlotJob, PlotKind, render
from isingplots.schema import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isingplots",
        description=(
            "Render figures from simulation CSV outputs. Scan CSV columns: "
            "p,q_or_T,mean,stderr,n_disorder,sweeps,seed. Threshold CSV columns: "
            "p,success_mean,success_stderr,correct_mean,correct_stderr,n_eta,L."
        ),
    )
    parser.add_argument("kind", choices=[k.value for k in PlotKind])
    parser.add_argument("inputs", nargs="+", help="input CSV file(s)")
    parser.add_argument("-o", "--output", required=True, help="output image (.png or .svg)")
    parser.add_argument("--title")
    parser.add_argument("--x-label", dest="x_label")
    parser.add_argument("--y-label", dest="y_label")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = PlotJob(
        inputs=tuple(args.inputs),
        kind=PlotKind(args.kind),
        output=args.output,
        title=args.title,
        x_label=args.x_label,
        y_label=args.y_label,
    )
    try:
        path = render(job)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
