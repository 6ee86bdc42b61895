"""End-to-end pipeline: partition, collapse, assemble, certify.

``approximate`` chains the greedy partition, the induced discrete variable,
the explicit piecewise linear loss, the exact error report, and the matching
closed-form count cap into one result object.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .analysis import ErrorReport, total_error, upper_bound
from .numerics import DEFAULT_TOLERANCE, Tolerance
from .partition import (
    BoundKind,
    InducedDiscrete,
    Partition,
    PiecewiseLinearFn,
    induce_discrete,
    run_partition,
    to_piecewise_linear,
)
from .rv import Interval, RandomVariable

__all__ = ["ApproxResult", "approximate"]


@dataclass(frozen=True)
class ApproxResult:
    """Everything a caller needs from one approximation run."""

    rv: RandomVariable
    kind: BoundKind
    a: float
    b: float
    eps: float
    partition: Partition
    atoms: InducedDiscrete
    pwl: PiecewiseLinearFn
    errors: ErrorReport
    upper: int
    runtime_ms: float

    @property
    def n_intervals(self) -> int:
        return self.partition.n

    @property
    def total_error(self) -> float:
        return self.errors.total


def approximate(rv: RandomVariable, a: float, b: float, eps: float,
                kind="exact", tol: Tolerance | None = None) -> ApproxResult:
    """Run the full approximation pipeline on (a, b] with budget eps."""
    kind = BoundKind.parse(kind)
    tol = tol or DEFAULT_TOLERANCE
    start = time.perf_counter()
    part = run_partition(rv, kind, a, b, eps, tol)
    atoms = induce_discrete(rv, part, tol)
    pwl = to_piecewise_linear(atoms)
    errors = total_error(rv, part, tol)
    ub = upper_bound(kind, rv.kind, b - a, eps, rv.prob(Interval(a, b)))
    runtime_ms = (time.perf_counter() - start) * 1000.0
    return ApproxResult(rv, kind, float(a), float(b), float(eps), part,
                        atoms, pwl, errors, ub, runtime_ms)
