"""Benchmark suite: 14 reference distributions, three budgets, three bounds.

``run_experiment`` reruns every (instance, eps) cell and reports interval
counts, count caps, and achieved error ratios; ``diff_against_golden``
compares a run against the embedded reference table (counts and caps must
match exactly, ratios within a printing-precision tolerance).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

from .approximate import approximate
from .numerics import Tolerance
from .partition import BoundKind
from .rv import RandomVariable, from_spec

__all__ = [
    "Instance",
    "ExperimentRow",
    "INSTANCES",
    "EPS_GRID",
    "run_instance",
    "run_experiment",
    "load_golden",
    "diff_against_golden",
    "format_table",
]

EPS_GRID = (0.1, 0.05, 0.01)

RATIO_TOL = 0.01


@dataclass(frozen=True)
class Instance:
    """A named distribution with its approximation range."""

    name: str
    dist: str
    a: float
    b: float

    def make_rv(self) -> RandomVariable:
        return from_spec(self.dist)


INSTANCES = (
    Instance("C-N1", "normal:mu=0,sigma=1", -3.0, 3.0),
    Instance("C-N2", "normal:mu=0,sigma=5", -15.0, 15.0),
    Instance("C-Exp", "exponential:lambda=1", 0.0, 4.0),
    Instance("C-Uni", "uniform:a=0,b=1", 0.0, 1.0),
    Instance("C-Bet", "beta:alpha=2,beta=5", 0.0, 0.8),
    Instance("C-Gam", "gamma:k=2,theta=1", 0.0, 6.2),
    Instance("C-Chi", "chi-squared:k=3", 0.0, 10.3),
    Instance("C-Stu", "student-t:nu=10", -3.4, 3.4),
    Instance("C-Log", "logistic:mu=0,s=1", -5.4, 5.4),
    Instance("C-Lgn", "lognormal:mu=0,sigma=1", 0.0, 8.1),
    Instance("D-Bin", "binomial:n=200,p=0.5", 78.0, 121.0),
    Instance("D-Poi", "poisson:lambda=100", 70.0, 130.0),
    Instance("D-Geo", "geometric:p=0.01", 1.0, 398.0),
    Instance("D-Neg", "negative-binomial:r=100,p=0.5", 57.0, 142.0),
)


@dataclass(frozen=True)
class ExperimentRow:
    """One (instance, eps) cell of the benchmark table.

    ``err_*`` columns are achieved-error ratios e / eps; count columns follow
    the bound used to produce them.
    """

    instance: str
    eps: float
    n_exact: int
    n_eighth: int
    n_quarter: int
    ub_eighth: int
    ub_quarter: int
    err_exact: float
    err_quarter: float
    err_eighth: float
    runtime_ms: float = 0.0


def run_instance(inst: Instance, eps: float,
                 tol: Tolerance | None = None) -> ExperimentRow:
    rv = inst.make_rv()
    results = {
        kind: approximate(rv, inst.a, inst.b, eps, kind, tol)
        for kind in BoundKind
    }
    ref = results[BoundKind.EXACT]
    return ExperimentRow(
        instance=inst.name,
        eps=eps,
        n_exact=ref.n_intervals,
        n_eighth=results[BoundKind.EIGHTH].n_intervals,
        n_quarter=results[BoundKind.QUARTER].n_intervals,
        ub_eighth=results[BoundKind.EIGHTH].upper,
        ub_quarter=results[BoundKind.QUARTER].upper,
        err_exact=ref.total_error / eps,
        err_quarter=results[BoundKind.QUARTER].total_error / eps,
        err_eighth=results[BoundKind.EIGHTH].total_error / eps,
        runtime_ms=sum(r.runtime_ms for r in results.values()),
    )


def run_experiment(instances=None, eps_grid=EPS_GRID,
                   tol: Tolerance | None = None) -> list:
    """Run every (instance, eps) cell; returns rows in table order."""
    if instances is None:
        instances = INSTANCES
    rows = []
    for inst in instances:
        for eps in eps_grid:
            rows.append(run_instance(inst, eps, tol))
    return rows


def load_golden() -> dict:
    """Reference table keyed by (instance, eps)."""
    golden = {}
    path = resources.files("plapprox").joinpath("data/reference_table.csv")
    with path.open(newline="") as fh:
        for rec in csv.DictReader(fh):
            key = (rec["instance"], float(rec["eps"]))
            golden[key] = ExperimentRow(
                instance=rec["instance"],
                eps=float(rec["eps"]),
                n_exact=int(rec["n_exact"]),
                n_eighth=int(rec["n_eighth"]),
                n_quarter=int(rec["n_quarter"]),
                ub_eighth=int(rec["ub_eighth"]),
                ub_quarter=int(rec["ub_quarter"]),
                err_exact=float(rec["err_exact"]),
                err_quarter=float(rec["err_quarter"]),
                err_eighth=float(rec["err_eighth"]),
            )
    return golden


_COUNT_FIELDS = ("n_exact", "n_eighth", "n_quarter", "ub_eighth", "ub_quarter")
_RATIO_FIELDS = ("err_exact", "err_quarter", "err_eighth")


def diff_against_golden(rows, ratio_tol: float = RATIO_TOL) -> list:
    """Mismatches between a run and the reference table.

    Count fields must agree exactly; ratio fields within ``ratio_tol``.
    Returns a list of dicts (empty when everything matches).
    """
    golden = load_golden()
    diffs = []
    for row in rows:
        key = (row.instance, row.eps)
        ref = golden.get(key)
        if ref is None:
            diffs.append({"instance": row.instance, "eps": row.eps,
                          "field": "<row>", "got": "present",
                          "expected": "absent from golden table"})
            continue
        for field in _COUNT_FIELDS:
            got, want = getattr(row, field), getattr(ref, field)
            if got != want:
                diffs.append({"instance": row.instance, "eps": row.eps,
                              "field": field, "got": got, "expected": want})
        for field in _RATIO_FIELDS:
            got, want = getattr(row, field), getattr(ref, field)
            if abs(got - want) > ratio_tol:
                diffs.append({"instance": row.instance, "eps": row.eps,
                              "field": field, "got": round(got, 4),
                              "expected": want})
    return diffs


def format_table(rows) -> str:
    """Fixed-width text rendering of experiment rows."""
    header = (f"{'instance':<8} {'eps':>6} {'exact':>6} {'1/8':>5} {'1/4':>5} "
              f"{'UB1/8':>6} {'UB1/4':>6} {'e/eps ex':>9} {'1/4':>6} {'1/8':>6}")
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(
            f"{r.instance:<8} {r.eps:>6.3f} {r.n_exact:>6d} {r.n_eighth:>5d} "
            f"{r.n_quarter:>5d} {r.ub_eighth:>6d} {r.ub_quarter:>6d} "
            f"{r.err_exact:>9.3f} {r.err_quarter:>6.3f} {r.err_eighth:>6.3f}"
        )
    return "\n".join(lines)
