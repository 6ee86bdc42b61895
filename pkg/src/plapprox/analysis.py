"""Error evaluation, breakpoint-count bounds, and adversarial constructions.

The exact per-interval error of the induced approximation has a closed form:
for an interval I = (lo, hi] with conditional mean mu, the worst gap between
the collapsed and true losses over I is E_(lo,mu][mu - X].  This module
evaluates that formula, cross-checks it with a dense-grid oracle, computes
the closed-form upper bounds on the number of intervals the greedy run can
emit, and builds the comb distributions that certify the matching lower
bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .loss import eval_loss
from .numerics import DEFAULT_TOLERANCE, Tolerance
from .partition import (
    BoundKind,
    InducedDiscrete,
    Partition,
    to_piecewise_linear,
)
from .rv import (
    EmpiricalDiscreteRV,
    Interval,
    PiecewiseUniformRV,
    RandomVariable,
)

__all__ = [
    "ErrorReport",
    "BoundsReport",
    "interval_error_exact",
    "total_error",
    "grid_oracle_error",
    "min_partition_bruteforce",
    "upper_bound",
    "guideline",
    "adversarial_N",
    "comb_discrete",
    "comb_continuous",
    "compute_bounds",
]

_MASS_FLOOR = 1e-12

_SQRT2 = math.sqrt(2.0)
# Leading coefficients of the count upper bounds, keyed by rv kind then bound
# kind.  The bound itself is (1 + P) * coeff * sqrt(W / eps) + 1.
_UB_COEFF = {
    "continuous": {BoundKind.QUARTER: 0.25, BoundKind.EIGHTH: 0.25 / _SQRT2},
    "discrete": {BoundKind.QUARTER: 0.5, BoundKind.EIGHTH: 0.5 / _SQRT2},
}


@dataclass(frozen=True)
class ErrorReport:
    """Exact per-interval errors for the working intervals I_1..I_n.

    ``per_interval`` pairs each interval with its error; ``total`` is the
    maximum and ``argmax_interval`` indexes the attaining pair.
    """

    per_interval: tuple
    total: float
    argmax_interval: int

    def __post_init__(self):
        if not self.per_interval:
            raise ValueError("per_interval must be nonempty")
        errs = [e for _, e in self.per_interval]
        if any(e < 0 for e in errs):
            raise ValueError("interval errors must be nonnegative")
        if self.total != max(errs):
            raise ValueError("total must equal the max per-interval error")


@dataclass(frozen=True)
class BoundsReport:
    """Precomputable breakpoint-count bounds for one rv kind."""

    width: float
    eps: float
    p_inside: float
    ub_quarter: int
    ub_eighth: int
    adversarial_n: int

    def __post_init__(self):
        if self.width <= 0 or self.eps <= 0:
            raise ValueError("width and eps must be positive")
        if not 0.0 <= self.p_inside <= 1.0:
            raise ValueError("p_inside must be a probability")
        if self.ub_eighth > self.ub_quarter:
            raise ValueError("ub_eighth cannot exceed ub_quarter")
        if min(self.ub_quarter, self.ub_eighth, self.adversarial_n) < 0:
            raise ValueError("bounds must be nonnegative")


def interval_error_exact(rv: RandomVariable, iv: Interval,
                         tol: Tolerance | None = None) -> float:
    """Worst-case gap on a bounded interval: E_(lo,mu][mu - X].

    Zero for zero-probability intervals and for intervals holding a single
    atom (mu coincides with the atom).
    """
    tol = tol or DEFAULT_TOLERANCE
    if not iv.is_bounded:
        raise ValueError(f"interval must be bounded, got {iv}")
    p = rv.prob(iv)
    if p <= _MASS_FLOOR:
        return 0.0
    mu = rv.conditional_mean(iv, tol)
    below = Interval(iv.lo, mu)
    err = mu * rv.prob(below) - rv.partial_expectation(below, tol)
    return max(err, 0.0)


def total_error(rv: RandomVariable, part: Partition,
                tol: Tolerance | None = None) -> ErrorReport:
    """Exact approximation error of a partition: the max per-interval error
    over the working intervals (the two tails contribute nothing because the
    collapsed loss is exact there)."""
    tol = tol or DEFAULT_TOLERANCE
    pairs = tuple(
        (iv, interval_error_exact(rv, iv, tol)) for iv in part.core_intervals
    )
    errs = [e for _, e in pairs]
    k = int(np.argmax(errs))
    return ErrorReport(pairs, errs[k], k)


def _true_loss_grid(rv: RandomVariable, s: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Vectorized E[min(s, X)] on an ascending grid."""
    if rv.kind == "discrete":
        # Every discrete family here has a finite lowest atom, so the "all
        # atoms up to s" query can use a bounded interval.
        lo_pt = rv.support_lo - 1.0
        if float(s[-1]) <= lo_pt:
            return s.copy()
        pts = rv.support_points(Interval(lo_pt, float(s[-1])))
        if pts.size == 0:
            return s.copy()
        w = rv.pmf(pts)
        cum_p = np.concatenate([[0.0], np.cumsum(w)])
        cum_pv = np.concatenate([[0.0], np.cumsum(w * pts)])
        idx = np.searchsorted(pts, s, side="right")
        # below-mass terms plus s times the remaining mass
        return cum_pv[idx] + s * (1.0 - cum_p[idx])
    # Continuous: f'(s) = 1 - F(s), so accumulate composite-Simpson panels of
    # the survival function between consecutive grid points.
    f0 = eval_loss(rv, float(s[0]), tol)
    if s.size == 1:
        return np.array([f0])
    lo = s[:-1]
    h = np.diff(s)
    frac = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    nodes = lo[:, None] + h[:, None] * frac[None, :]
    g = 1.0 - rv.cdf(nodes.ravel()).reshape(nodes.shape)
    panel = (h / 12.0) * (g[:, 0] + 4 * g[:, 1] + 2 * g[:, 2] + 4 * g[:, 3] + g[:, 4])
    return f0 + np.concatenate([[0.0], np.cumsum(panel)])


def grid_oracle_error(rv: RandomVariable, atoms: InducedDiscrete, a: float,
                      b: float, grid_size: int = 100_000,
                      tol: Tolerance | None = None) -> float:
    """Maximize the collapsed-minus-true loss gap over a dense grid on (a, b].

    The grid is augmented with every atom value inside (a, b] (where the gap
    attains its per-interval maxima) and, for discrete rvs, every support
    point, so the result is exact up to integration error.  Independent of
    the closed-form error path: it never calls interval_error_exact.
    """
    tol = tol or DEFAULT_TOLERANCE
    if grid_size < 1000:
        raise ValueError(f"grid_size must be at least 1000, got {grid_size}")
    s = np.linspace(a, b, grid_size + 1)[1:]
    extra = [np.asarray([v for v in atoms.values if a < v <= b])]
    if rv.kind == "discrete":
        extra.append(rv.support_points(Interval(a, b)))
    s = np.unique(np.concatenate([s, *extra]))
    f_true = _true_loss_grid(rv, s, tol)
    f_tilde = to_piecewise_linear(atoms).evaluate(s)
    return float(np.max(f_tilde - f_true))


def min_partition_bruteforce(rv: RandomVariable, a: float, b: float,
                             eps: float, tol: Tolerance | None = None) -> int:
    """Minimum number of intervals tiling (a, b] with exact error <= eps on
    each, by dynamic programming over support-point cut positions.

    Independent oracle for the greedy run: feasibility of every (cut_i,
    cut_j] pair is checked directly from prefix sums, with no greedy
    shortcuts.  Cuts may be restricted to support points without loss:
    sliding a cut down to the nearest support point leaves every interval's
    contents unchanged.
    """
    tol = tol or DEFAULT_TOLERANCE
    if rv.kind != "discrete":
        raise TypeError("bruteforce oracle requires a discrete rv")
    if not (a < b):
        raise ValueError(f"need a < b, got a={a}, b={b}")
    pts = rv.support_points(Interval(a, b))
    if pts.size > 200:
        raise ValueError(f"too many support points ({pts.size} > 200)")
    w = rv.pmf(pts)
    cum_p = np.concatenate([[0.0], np.cumsum(w)])
    cum_pv = np.concatenate([[0.0], np.cumsum(w * pts)])
    pos = np.concatenate([[a], pts[pts < b], [b]])

    def delta(x: float, y: float) -> float:
        i = np.searchsorted(pts, x, side="right")
        j = np.searchsorted(pts, y, side="right")
        p = cum_p[j] - cum_p[i]
        if p <= _MASS_FLOOR:
            return 0.0
        mu = (cum_pv[j] - cum_pv[i]) / p
        mu = min(max(mu, x), y)
        k = np.searchsorted(pts, mu, side="right")
        return max(mu * (cum_p[k] - cum_p[i]) - (cum_pv[k] - cum_pv[i]), 0.0)

    m = pos.size
    dp = [math.inf] * m
    dp[m - 1] = 0
    for i in range(m - 2, -1, -1):
        best = math.inf
        for j in range(i + 1, m):
            if delta(pos[i], pos[j]) <= eps and dp[j] + 1 < best:
                best = dp[j] + 1
        dp[i] = best
    if not math.isfinite(dp[0]):
        raise RuntimeError("no feasible partition found (unreachable: single-"
                           "atom intervals always have zero error)")
    return int(dp[0])


def upper_bound(kind, rv_kind: str, W: float, eps: float,
                p_inside: float = 1.0) -> int:
    """Closed-form cap on the interval count of a greedy run.

    Computes floor((1 + P) * coeff * sqrt(W / eps) + 1) with the coefficient
    determined by the rv kind and bound kind.  The exact bound never uses
    more intervals than the quarter bound, so it maps to the quarter cap.
    """
    kind = BoundKind.parse(kind)
    if kind is BoundKind.EXACT:
        kind = BoundKind.QUARTER
    if rv_kind not in _UB_COEFF:
        raise ValueError(f"rv_kind must be continuous or discrete, got {rv_kind!r}")
    if not (W > 0 and eps > 0):
        raise ValueError("W and eps must be positive")
    if not 0.0 <= p_inside <= 1.0:
        raise ValueError(f"p_inside must be a probability, got {p_inside}")
    coeff = _UB_COEFF[rv_kind][kind]
    raw = (1.0 + p_inside) * coeff * math.sqrt(W / eps) + 1.0
    # Nudge guards against values like 6.0 landing at 5.999999999999999.
    return int(math.floor(raw + 1e-9))


def guideline(W: float, eps: float) -> float:
    """Practical estimate of the minimum breakpoint count: sqrt(W/eps)/(2*sqrt(2))."""
    if not (W > 0 and eps > 0):
        raise ValueError("W and eps must be positive")
    return math.sqrt(W / eps) / (2.0 * _SQRT2)


def adversarial_N(W: float, eps: float) -> int:
    """Largest N with W / (2 N^2) > eps; 0 when even N = 1 fails.

    This is the tooth count for which the comb constructions force any
    eps-feasible partition to use more than N (discrete) intervals.
    """
    if not (W > 0 and eps > 0):
        raise ValueError("W and eps must be positive")
    r = W / (2.0 * eps)
    k = max(int(math.sqrt(r)), 0)
    while (k + 1) * (k + 1) < r:
        k += 1
    while k >= 1 and k * k >= r:
        k -= 1
    return k


def comb_discrete(a: float, b: float, N: int) -> EmpiricalDiscreteRV:
    """N equally spaced, equally weighted atoms on (a, b], the last at b.

    Merging any two adjacent atoms into one interval incurs an exact error of
    (b - a) / (2 N^2), which makes the construction adversarial for any eps
    below that value.
    """
    if N < 1:
        raise ValueError(f"N must be at least 1, got {N}")
    if not b > a:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    d = (b - a) / N
    values = a + d * np.arange(1, N + 1)
    values[-1] = b
    return EmpiricalDiscreteRV(values, np.full(N, 1.0 / N))


def comb_continuous(a: float, b: float, N: int,
                    w: float | None = None) -> PiecewiseUniformRV:
    """N uniform teeth (x_k - w, x_k] with x_k = a + k (b - a) / N, mass 1/N
    each.  Tooth width defaults to a tenth of the spacing; any w in
    (0, spacing) keeps the merged-teeth error at exactly (b - a) / (2 N^2).
    """
    if N < 1:
        raise ValueError(f"N must be at least 1, got {N}")
    if not b > a:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    d = (b - a) / N
    if w is None:
        w = d / 10.0
    if not 0.0 < w < d:
        raise ValueError(f"tooth width must lie in (0, {d}), got {w}")
    x = a + d * np.arange(1, N + 1)
    x[-1] = b
    pieces = [(xk - w, xk) for xk in x]
    return PiecewiseUniformRV(pieces, np.full(N, 1.0 / N))


def compute_bounds(W: float, eps: float, rv_kind: str,
                   p_inside: float = 1.0) -> BoundsReport:
    """Bundle the precomputable trade-off numbers for one rv kind."""
    return BoundsReport(
        width=W,
        eps=eps,
        p_inside=p_inside,
        ub_quarter=upper_bound(BoundKind.QUARTER, rv_kind, W, eps, p_inside),
        ub_eighth=upper_bound(BoundKind.EIGHTH, rv_kind, W, eps, p_inside),
        adversarial_n=adversarial_N(W, eps),
    )
