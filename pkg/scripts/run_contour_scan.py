#!/usr/bin/env python3
"""Scan the contour formula against the lattice oracle over small targets.

The closed contour representation of the Green functions needs the target
far enough out for a pole-free contour sweep; this scan measures, per n and
start state, the smallest min(i, j) from which every tested target agrees
with the oracle to 1e-5 relative.  The thresholds quoted in the README and
in quadrantwalk.contour.EMPIRICAL_VALIDITY_MIN come from this script.

Usage: python scripts/run_contour_scan.py [--max-target 12] [--radius 256]
"""

import argparse
import sys

import numpy as np

from quadrantwalk import (PoleCollisionError, QuadratureError, green_contour,
                          make_model, solve_green_box, Uniformization)


def scan(n: int, start: tuple[int, int], max_target: int, radius: int):
    u = Uniformization(make_model(n))
    g = solve_green_box(u.model, start[0], start[1], radius)
    table = {}
    for i in range(1, max_target + 1):
        for j in range(1, max_target + 1):
            try:
                got = green_contour(u, start[0], start[1], i, j)
                delta = abs(got / g[i, j] - 1.0)
            except (PoleCollisionError, QuadratureError) as exc:
                delta = float("nan")
            table[(i, j)] = delta
    return table


def smallest_reliable(table, max_target, tol=1e-5):
    for m in range(1, max_target + 1):
        cells = [(i, j) for (i, j) in table
                 if min(i, j) >= m and max(i, j) <= max_target]
        if all(np.isfinite(table[c]) and table[c] <= tol for c in cells):
            return m
    return None


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-target", type=int, default=12)
    parser.add_argument("--radius", type=int, default=256)
    parser.add_argument("--tolerance", type=float, default=1e-5)
    args = parser.parse_args()

    print(f"oracle radius {args.radius}, tolerance {args.tolerance:g}")
    print(f"{'n':>3} {'start':>7} {'min reliable':>13} {'worst delta above it':>22}")
    for n in (3, 4, 5, 6):
        for start in ((1, 1), (2, 1)):
            table = scan(n, start, args.max_target, args.radius)
            m = smallest_reliable(table, args.max_target, args.tolerance)
            if m is None:
                print(f"{n:>3} {str(start):>7} {'none':>13}")
                continue
            worst = max(v for (i, j), v in table.items()
                        if min(i, j) >= m and np.isfinite(v))
            print(f"{n:>3} {str(start):>7} {m:>13} {worst:>22.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
