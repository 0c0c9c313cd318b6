#!/usr/bin/env python3
"""Produce exact-vs-asymptotic convergence tables along several rays.

Writes one CSV per (n, gamma) pair into the chosen output directory and
prints a one-line trend summary per ray.  This is the batch version of the
`quadrantwalk converge` subcommand.

Usage: python scripts/run_convergence.py --out /tmp/rays [--n 3 4] [--scales 8,16,32,64]
"""

import argparse
import math
import pathlib
import sys

from quadrantwalk import convergence_report, make_model

RAY_NAMES = {math.pi / 6: "pi6", math.pi / 4: "pi4", math.pi / 3: "pi3"}


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", required=True, help="output directory for CSVs")
    parser.add_argument("--n", type=int, nargs="+", default=[3, 4])
    parser.add_argument("--start", type=int, nargs=2, default=(1, 1))
    parser.add_argument("--scales", default="8,16,32,64")
    args = parser.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    scales = [float(s) for s in args.scales.split(",")]
    exit_code = 0
    for n in args.n:
        model = make_model(n)
        for gamma, tag in RAY_NAMES.items():
            report = convergence_report(model, args.start[0], args.start[1],
                                        gamma, scales)
            path = out / f"ray_n{n}_{tag}.csv"
            report.to_csv(str(path))
            devs = report.deviations()
            print(f"n={n} gamma={gamma:.4f}: final |ratio-1| = {devs[-1]:.3e} "
                  f"trend {'ok' if report.trend_ok else 'FAILED'} -> {path}")
            if not report.trend_ok:
                exit_code = 1
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
