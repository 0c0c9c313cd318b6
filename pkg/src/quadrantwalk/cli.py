"""Command-line surface: model info, harmonic tables, Green estimates and
convergence reports, with deterministic CSV/JSON output.

Exit codes: 0 success, 1 a numerical check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .asymptotics import convergence_report, green_asymptotic
from .contour import EMPIRICAL_VALIDITY_MIN, green_contour
from .green import TruncationPolicy, solve_green
from .group import enumerate_group
from .harmonic import HarmonicPolynomial, check_harmonicity, closed_form
from .uniformization import Uniformization
from .walk_model import discriminant_roots, make_model

USAGE_ERROR = 2
CHECK_FAILURE = 1

#: Documented gate for the oracle-vs-contour comparison in `green --method all`.
ORACLE_CONTOUR_GATE = 1e-4


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _write_or_print(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_model_info(args) -> int:
    model = make_model(args.n)
    u = Uniformization(model)
    x1, x4, y1, y4 = discriminant_roots(model)
    elements = enumerate_group(args.n)
    if args.format == "json":
        payload = {
            "n": args.n,
            "p10": model.p10,
            "p1m1": model.p1m1,
            "z0": {"re": u.z0.real, "im": u.z0.imag},
            "x1": x1,
            "x4": x4,
            "y1": y1,
            "y4": "infinity",
            "group_order": 2 * args.n,
            "elements": [{"word": el.word or "1", "length": el.length}
                         for el in elements],
        }
        _write_or_print(json.dumps(payload, sort_keys=True) + "\n", args.output)
        return 0
    lines = [
        f"walk family member n = {args.n}",
        f"  p10  = {_fmt(model.p10)}   (jumps (1,0), (-1,0))",
        f"  p1m1 = {_fmt(model.p1m1)}   (jumps (1,-1), (-1,1))",
        f"  base point z0 = {_fmt(u.z0.real)} + {_fmt(u.z0.imag)} i",
        f"  branch points: x1 = {_fmt(x1)}, x4 = {_fmt(x4)} (x1*x4 = {_fmt(x1 * x4)}),"
        f" y1 = 0, y4 = infinity",
        f"  group order 2n = {2 * args.n}",
        "  elements (minimal words over the generating involutions x, y):",
    ]
    for el in elements:
        lines.append(f"    {el.word or '1':<{2 * args.n}}  length {el.length}")
    _write_or_print("\n".join(lines) + "\n", args.output)
    return 0


def cmd_harmonic(args) -> int:
    model = make_model(args.n)
    h = HarmonicPolynomial(Uniformization(model))
    grid = h.value_grid(args.imax, args.jmax)
    residual = check_harmonicity(h, max(args.imax - 1, 2), max(args.jmax - 1, 2))
    has_closed = closed_form(args.n, 1, 1) is not None

    rows = []
    for i in range(args.imax + 1):
        for j in range(args.jmax + 1):
            row = {"i": i, "j": j, "value": float(grid[i, j])}
            if has_closed:
                row["closed_form"] = closed_form(args.n, i, j)
            rows.append(row)

    if args.format == "json":
        payload = {"meta": {"n": args.n, "imax": args.imax, "jmax": args.jmax,
                            "harmonicity_residual": residual},
                   "data": rows}
        _write_or_print(json.dumps(payload, sort_keys=True) + "\n", args.output)
    elif args.format == "csv":
        header = "i,j,value" + (",closed_form" if has_closed else "")
        lines = [header]
        for row in rows:
            line = f"{row['i']},{row['j']},{row['value']:.17g}"
            if has_closed:
                line += f",{row['closed_form']:.17g}"
            lines.append(line)
        _write_or_print("\n".join(lines) + "\n", args.output)
    else:
        lines = [f"harmonic polynomial for n = {args.n} "
                 f"(max mean-value residual {residual:.3e})"]
        for row in rows:
            line = f"  f({row['i']},{row['j']}) = {_fmt(row['value'])}"
            if has_closed:
                line += f"   closed form {_fmt(row['closed_form'])}"
            lines.append(line)
        _write_or_print("\n".join(lines) + "\n", args.output)
    return 0 if residual <= 1e-9 else CHECK_FAILURE


def cmd_green(args) -> int:
    model = make_model(args.n)
    i0, j0 = args.start
    i, j = args.at
    if i0 < 1 or j0 < 1 or i < 1 or j < 0:
        print("green: start must be interior and the target needs i >= 1, j >= 0",
              file=sys.stderr)
        return USAGE_ERROR
    if j == 0 and args.method != "asymptotic":
        print("green: only the asymptotic method extends to axis targets (j = 0)",
              file=sys.stderr)
        return USAGE_ERROR
    u = Uniformization(model)
    h = HarmonicPolynomial(u)

    results: dict[str, float] = {}
    note = None
    if args.method in ("oracle", "all"):
        policy = TruncationPolicy(initial_radius=args.radius or 64,
                                  tolerance=args.tolerance,
                                  max_doublings=args.max_doublings)
        field = solve_green(model, i0, j0, policy, report_sites=[(i, j)])
        results["oracle"] = field.value(i, j)
    if args.method in ("contour", "all"):
        results["contour"] = green_contour(u, i0, j0, i, j)
    if args.method in ("asymptotic", "all"):
        results["asymptotic"] = green_asymptotic(h, i0, j0, i, j)
        if j == 0:
            note = "axis target: the angular factor vanishes, the formula gives 0"

    lines = [f"G from ({i0},{j0}) to ({i},{j}), n = {args.n}"]
    if note:
        lines.append(f"  note: {note}")
    for name in ("oracle", "contour", "asymptotic"):
        if name in results:
            lines.append(f"  {name:<11} {results[name]:.12e}")
    names = [k for k in ("oracle", "contour", "asymptotic") if k in results]
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            va, vb = results[names[a]], results[names[b]]
            delta = abs(va - vb) / max(abs(va), abs(vb), 1e-300)
            lines.append(f"  delta {names[a]}/{names[b]}: {delta:.3e}")
    if args.format == "json":
        payload = {"meta": {"n": args.n, "i0": i0, "j0": j0, "i": i, "j": j},
                   "data": results}
        if note:
            payload["meta"]["note"] = note
        _write_or_print(json.dumps(payload, sort_keys=True) + "\n", args.output)
    else:
        _write_or_print("\n".join(lines) + "\n", args.output)

    if "oracle" in results and "contour" in results:
        gate_min = EMPIRICAL_VALIDITY_MIN.get(args.n, 6)
        if min(i, j) >= gate_min:
            delta = abs(results["oracle"] - results["contour"]) / abs(results["oracle"])
            if delta > ORACLE_CONTOUR_GATE:
                print(f"green: oracle/contour delta {delta:.3e} exceeds "
                      f"{ORACLE_CONTOUR_GATE} inside the validity region",
                      file=sys.stderr)
                return CHECK_FAILURE
    return 0


def cmd_converge(args) -> int:
    if not 0.0 <= args.gamma <= math.pi / 2 + 1e-12:
        print("converge: gamma must lie in [0, pi/2]", file=sys.stderr)
        return USAGE_ERROR
    model = make_model(args.n)
    scales = [float(s) for s in args.scales.split(",")]
    report = convergence_report(model, args.start[0], args.start[1],
                                args.gamma, scales)
    if args.output:
        if args.format == "json":
            report.to_json(args.output)
        else:
            report.to_csv(args.output)
    devs = report.deviations()
    print(f"converge: n={args.n} gamma={args.gamma:.6g} "
          f"deviations {' '.join(f'{d:.4g}' for d in devs)} "
          f"trend {'ok' if report.trend_ok else 'FAILED'}")
    return 0 if report.trend_ok else CHECK_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadrantwalk",
        description="Green functions and harmonic polynomials for zero-drift "
                    "killed random walks in the quarter plane")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--n", type=int, required=True, help="group half-order (>= 3)")
        p.add_argument("--format", choices=("human", "csv", "json"), default="human")
        p.add_argument("--output", help="write the report to this path")

    p = sub.add_parser("model-info", help="jump probabilities, branch points, group table")
    add_common(p)
    p.set_defaults(func=cmd_model_info)

    p = sub.add_parser("harmonic", help="harmonic polynomial table with residual check")
    add_common(p)
    p.add_argument("--imax", type=int, default=5)
    p.add_argument("--jmax", type=int, default=5)
    p.set_defaults(func=cmd_harmonic)

    p = sub.add_parser("green", help="Green function estimates and cross deltas")
    add_common(p)
    p.add_argument("--from", dest="start", type=int, nargs=2, required=True,
                   metavar=("I0", "J0"))
    p.add_argument("--at", type=int, nargs=2, required=True, metavar=("I", "J"))
    p.add_argument("--method", choices=("oracle", "contour", "asymptotic", "all"),
                   default="all")
    p.add_argument("--radius", type=int, help="override the initial truncation radius")
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--max-doublings", type=int, default=4)
    p.set_defaults(func=cmd_green)

    p = sub.add_parser("converge", help="exact-vs-asymptotic ratios along a ray")
    add_common(p)
    p.add_argument("--from", dest="start", type=int, nargs=2, default=(1, 1),
                   metavar=("I0", "J0"))
    p.add_argument("--gamma", type=float, required=True, help="ray angle in [0, pi/2]")
    p.add_argument("--scales", default="8,16,32,64",
                   help="comma-separated distances along the ray")
    p.set_defaults(func=cmd_converge)
    return parser


def main(argv=None) -> int:
    cap = os.environ.get("QUADRANTWALK_THREADS")
    if cap:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, cap)
    args = build_parser().parse_args(argv)
    if getattr(args, "n", None) is not None and args.n < 3:
        print("quadrantwalk: need n >= 3", file=sys.stderr)
        return USAGE_ERROR
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"quadrantwalk: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
