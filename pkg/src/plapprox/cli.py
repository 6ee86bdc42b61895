"""Command-line front end.

Subcommands
-----------
approximate  one distribution, one budget: cuts, atoms, segments, errors
experiment   rerun the embedded benchmark table and diff against it
bounds       precomputable count caps and the adversarial tooth count
reduce       canonical form of a general two-piece loss
export       machine-readable segments / scenarios / full JSON bundle

Exit codes: 0 success, 2 usage error, 3 numeric failure, 4 benchmark diff.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .analysis import compute_bounds, grid_oracle_error, guideline
from .approximate import ApproxResult, approximate
from .experiment import (
    EPS_GRID,
    INSTANCES,
    diff_against_golden,
    format_table,
    run_experiment,
)
from .loss import GeneralLossCoeffs, reduce_general_loss
from .numerics import BracketError, NumericError
from .partition import MonotonicityError
from .rv import RandomVariable, from_csv, from_spec

__all__ = ["main", "RunConfig"]


@dataclass
class RunConfig:
    """Validated inputs for one approximation run."""

    dist: str
    a: float
    b: float
    eps: float
    bound: str = "exact"
    output: str = "table"
    grid_size: int = 100_000
    seed: int = 0
    data: str | None = None

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"--a must be below --b (got a={self.a}, b={self.b})")
        if not self.eps > 0:
            raise ValueError(f"--eps must be positive (got {self.eps})")
        if self.grid_size < 1000:
            raise ValueError(f"--grid must be at least 1000 (got {self.grid_size})")


def _build_rv(args) -> RandomVariable:
    if args.dist == "empirical":
        if not args.data:
            raise ValueError("--dist empirical requires --data <csv>")
        return from_csv(args.data)
    return from_spec(args.dist)


def _resolve_range(args, rv: RandomVariable):
    """Fill in (a, b] for empirical data when flags are omitted: the range
    starts just below the smallest atom so that every atom is covered."""
    a, b = args.a, args.b
    if a is None and rv.family == "empirical":
        a = math.nextafter(rv.support_lo, -math.inf)
    if b is None and rv.family == "empirical":
        b = rv.support_hi
    if a is None or b is None:
        raise ValueError("--a and --b are required for parametric distributions")
    return float(a), float(b)


def _segments_rows(result: ApproxResult):
    pwl = result.pwl
    bps = list(pwl.breakpoints) + [math.inf]
    return zip(bps, pwl.slopes, pwl.intercepts)


def _segments_csv(result: ApproxResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["breakpoint", "slope", "intercept"])
    for bp, slope, intercept in _segments_rows(result):
        writer.writerow([repr(bp) if math.isfinite(bp) else "inf",
                         repr(slope), repr(intercept)])
    return buf.getvalue()


def _scenarios_csv(result: ApproxResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["value", "probability"])
    for v, p in zip(result.atoms.values, result.atoms.probs):
        writer.writerow([repr(v), repr(p)])
    return buf.getvalue()


def _result_payload(result: ApproxResult, cfg: RunConfig,
                    grid_oracle: float | None = None,
                    with_runtime: bool = True) -> dict:
    errors = {
        "per_interval": [
            {"lo": iv.lo, "hi": iv.hi, "error": err}
            for iv, err in result.errors.per_interval
        ],
        "total": result.errors.total,
        "argmax_interval": result.errors.argmax_interval,
    }
    if grid_oracle is not None:
        errors["grid_oracle"] = grid_oracle
    meta = {
        "version": __version__,
        "dist": cfg.dist,
        "bound": result.kind.value,
        "a": result.a,
        "b": result.b,
        "eps": result.eps,
    }
    if with_runtime:
        meta["runtime_ms"] = round(result.runtime_ms, 3)
    return {
        "partition": {
            "a": result.a,
            "b": result.b,
            "n": result.partition.n,
            "cuts": list(result.partition.cuts),
        },
        "atoms": [
            {"value": v, "prob": p}
            for v, p in zip(result.atoms.values, result.atoms.probs)
        ],
        "segments": {
            "breakpoints": list(result.pwl.breakpoints),
            "slopes": list(result.pwl.slopes),
            "intercepts": list(result.pwl.intercepts),
        },
        "errors": errors,
        "bounds": {
            "upper_count": result.upper,
            "kind": result.kind.value,
            "width": result.b - result.a,
            "eps": result.eps,
        },
        "meta": meta,
    }


def _summary_text(result: ApproxResult, grid_oracle: float | None) -> str:
    lines = [
        f"bound={result.kind.value}  range=({result.a}, {result.b}]  eps={result.eps}",
        f"intervals: {result.partition.n}  (upper bound {result.upper})",
        f"total error: {result.errors.total:.6g}  "
        f"(ratio {result.errors.total / result.eps:.3f})",
        f"cuts: {', '.join(f'{c:.6g}' for c in result.partition.cuts)}",
        "atoms:",
    ]
    for v, p in zip(result.atoms.values, result.atoms.probs):
        lines.append(f"  value={v: .6g}  prob={p:.6g}")
    if grid_oracle is not None:
        lines.append(f"grid oracle error: {grid_oracle:.6g}")
    return "\n".join(lines)


def _run_config(args):
    """(RunConfig, RandomVariable) from parsed flags."""
    rv = _build_rv(args)
    a, b = _resolve_range(args, rv)
    cfg = RunConfig(dist=args.dist, a=a, b=b, eps=args.eps, bound=args.bound,
                    output=getattr(args, "output", "table"),
                    grid_size=args.grid or 100_000, seed=args.seed,
                    data=args.data)
    return cfg, rv


def cmd_approximate(args) -> int:
    cfg, rv = _run_config(args)
    result = approximate(rv, cfg.a, cfg.b, cfg.eps, cfg.bound)
    oracle = None
    if args.grid is not None:
        oracle = grid_oracle_error(rv, result.atoms, cfg.a, cfg.b, cfg.grid_size)
    if cfg.output == "json":
        print(json.dumps(_result_payload(result, cfg, oracle), indent=2))
    elif cfg.output == "csv":
        sys.stdout.write(_segments_csv(result))
    else:
        print(_summary_text(result, oracle))
    return 0


def cmd_experiment(args) -> int:
    instances = INSTANCES
    if args.instances:
        wanted = {name.strip() for name in args.instances.split(",")}
        unknown = wanted - {inst.name for inst in INSTANCES}
        if unknown:
            raise ValueError(f"unknown instance names: {', '.join(sorted(unknown))}")
        instances = tuple(inst for inst in INSTANCES if inst.name in wanted)
    eps_grid = EPS_GRID if not args.eps else (args.eps,)
    rows = run_experiment(instances, eps_grid)
    diffs = diff_against_golden(rows)
    if args.output == "json":
        payload = {
            "rows": [vars(r) | {"runtime_ms": round(r.runtime_ms, 3)} for r in rows],
            "diffs": diffs,
            "meta": {"version": __version__, "n_rows": len(rows)},
        }
        print(json.dumps(payload, indent=2))
    elif args.output == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["instance", "eps", "n_exact", "n_eighth", "n_quarter",
                         "ub_eighth", "ub_quarter", "err_exact", "err_quarter",
                         "err_eighth"])
        for r in rows:
            writer.writerow([r.instance, r.eps, r.n_exact, r.n_eighth,
                             r.n_quarter, r.ub_eighth, r.ub_quarter,
                             f"{r.err_exact:.3f}", f"{r.err_quarter:.3f}",
                             f"{r.err_eighth:.3f}"])
    else:
        print(format_table(rows))
        if diffs:
            print("\nmismatches against reference values:")
            for d in diffs:
                print(f"  {d['instance']} eps={d['eps']} {d['field']}: "
                      f"got {d['got']}, expected {d['expected']}")
        else:
            print(f"\nall {len(rows)} rows match the reference values")
    return 4 if diffs else 0


def cmd_bounds(args) -> int:
    cont = compute_bounds(args.width, args.eps, "continuous", args.p)
    disc = compute_bounds(args.width, args.eps, "discrete", args.p)
    payload = {
        "bounds": {
            "width": args.width,
            "eps": args.eps,
            "p_inside": args.p,
            "continuous": {"ub_quarter": cont.ub_quarter,
                           "ub_eighth": cont.ub_eighth},
            "discrete": {"ub_quarter": disc.ub_quarter,
                         "ub_eighth": disc.ub_eighth},
            "guideline": guideline(args.width, args.eps),
            "adversarial_n": cont.adversarial_n,
        },
        "meta": {"version": __version__},
    }
    if args.output == "json":
        print(json.dumps(payload, indent=2))
    else:
        b = payload["bounds"]
        print(f"width={b['width']}  eps={b['eps']}  p_inside={b['p_inside']}")
        print(f"continuous: quarter<={b['continuous']['ub_quarter']}  "
              f"eighth<={b['continuous']['ub_eighth']}")
        print(f"discrete:   quarter<={b['discrete']['ub_quarter']}  "
              f"eighth<={b['discrete']['ub_eighth']}")
        print(f"guideline (min breakpoints, about): {b['guideline']:.3f}")
        print(f"adversarial tooth count: {b['adversarial_n']}")
    return 0


def cmd_reduce(args) -> int:
    coeffs = GeneralLossCoeffs(args.a1, args.b1, args.c1,
                               args.a2, args.b2, args.c2, args.sense)
    canon = reduce_general_loss(coeffs)
    payload = {
        "A": canon.A, "B": canon.B, "C": canon.C,
        "y_scale": canon.y_scale, "s_scale": canon.s_scale,
        "s_shift": canon.s_shift, "negate": canon.negate,
    }
    if args.output == "json":
        print(json.dumps(payload, indent=2))
    else:
        for key, value in payload.items():
            print(f"{key} = {value}")
    return 0


def cmd_export(args) -> int:
    cfg, rv = _run_config(args)
    result = approximate(rv, cfg.a, cfg.b, cfg.eps, cfg.bound)
    if args.format == "segments-csv":
        text = _segments_csv(result)
    elif args.format == "scenarios-csv":
        text = _scenarios_csv(result)
    else:
        payload = _result_payload(result, cfg, with_runtime=False)
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out and args.out != "-":
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0


def _add_run_flags(sub, with_output=True):
    sub.add_argument("--dist", required=True,
                     help="family:key=value,... or 'empirical' with --data")
    sub.add_argument("--data", help="CSV of value,weight rows for --dist empirical")
    sub.add_argument("--a", type=float, help="left end of the range (exclusive)")
    sub.add_argument("--b", type=float, help="right end of the range (inclusive)")
    sub.add_argument("--eps", type=float, required=True, help="error budget")
    sub.add_argument("--bound", choices=["exact", "quarter", "eighth"],
                     default="exact", help="bound function (default exact)")
    sub.add_argument("--grid", type=int, default=None,
                     help="also run the grid oracle with this many points")
    sub.add_argument("--seed", type=int, default=0,
                     help="reserved for randomized subcommands")
    if with_output:
        sub.add_argument("--output", choices=["json", "csv", "table"],
                         default="table", help="output format (default table)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plapprox",
        description="Error-certified piecewise linear approximation of "
                    "expected-min losses E[min(s, X)].",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p_approx = subs.add_parser("approximate", help="run one approximation")
    _add_run_flags(p_approx)
    p_approx.set_defaults(func=cmd_approximate)

    p_exp = subs.add_parser("experiment", help="rerun the benchmark table")
    p_exp.add_argument("--instances", help="comma-separated instance names")
    p_exp.add_argument("--eps", type=float, default=None,
                       help="run a single budget instead of the full grid")
    p_exp.add_argument("--output", choices=["json", "csv", "table"],
                       default="table")
    p_exp.set_defaults(func=cmd_experiment)

    p_bounds = subs.add_parser("bounds", help="precomputable count bounds")
    p_bounds.add_argument("--width", type=float, required=True)
    p_bounds.add_argument("--eps", type=float, required=True)
    p_bounds.add_argument("--p", type=float, default=1.0,
                          help="probability mass inside the range (default 1)")
    p_bounds.add_argument("--output", choices=["json", "table"], default="table")
    p_bounds.set_defaults(func=cmd_bounds)

    p_reduce = subs.add_parser("reduce", help="canonicalize a two-piece loss")
    for name in ("a1", "b1", "c1", "a2", "b2", "c2"):
        p_reduce.add_argument(f"--{name}", type=float, required=True)
    p_reduce.add_argument("--sense", choices=["min", "max"], default="min")
    p_reduce.add_argument("--output", choices=["json", "table"], default="table")
    p_reduce.set_defaults(func=cmd_reduce)

    p_export = subs.add_parser("export", help="write machine-readable results")
    _add_run_flags(p_export, with_output=False)
    p_export.add_argument("--format",
                          choices=["segments-csv", "scenarios-csv", "json"],
                          default="json")
    p_export.add_argument("--out", help="output path (default stdout)")
    p_export.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, BracketError, MonotonicityError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
