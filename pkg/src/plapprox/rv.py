"""One-dimensional random variables with half-open interval calculus.

Every distribution exposes a CDF, a mean, support bounds, and partial
expectations

    E_(lo, hi][X] = integral (or sum) of x dP over the half-open interval
    (lo, hi].

Interval probabilities are CDF differences, so an atom sitting exactly on the
left endpoint is excluded and one on the right endpoint is included.  This
convention is kept bit-exact on lattice points: it is what makes consecutive
intervals of a partition tile a range without double counting mass.

Unbounded integration is never performed directly.  Tail partial expectations
are obtained either as ``mean`` minus a bounded-interval integral (when the
support is bounded on one side) or through a closed-form lower partial
expectation for the doubly unbounded families (normal, Student-t, logistic).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .numerics import DEFAULT_TOLERANCE, Tolerance, integrate

__all__ = [
    "Interval",
    "FULL_LINE",
    "RandomVariable",
    "ContinuousRV",
    "DiscreteLatticeRV",
    "EmpiricalDiscreteRV",
    "PiecewiseUniformRV",
    "normal",
    "exponential",
    "uniform",
    "beta",
    "gamma",
    "chi_squared",
    "student_t",
    "logistic",
    "lognormal",
    "binomial",
    "poisson",
    "geometric",
    "negative_binomial",
    "empirical",
    "piecewise_uniform",
    "from_spec",
    "from_csv",
    "FAMILIES",
]


@dataclass(frozen=True)
class Interval:
    """Half-open interval ``(lo, hi]``.  ``lo == hi`` denotes an empty interval."""

    lo: float
    hi: float

    def __post_init__(self):
        lo = float(self.lo)
        hi = float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval endpoints must not be NaN")
        if lo > hi:
            raise ValueError(f"interval endpoints out of order: ({lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def is_empty(self) -> bool:
        return self.lo == self.hi

    @property
    def is_bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def __str__(self) -> str:
        return f"({self.lo}, {self.hi}]"


FULL_LINE = Interval(-math.inf, math.inf)


class RandomVariable:
    """Common interface for the distributions used throughout the package.

    Subclasses set ``kind`` ("continuous" or "discrete"), ``family``,
    ``params``, ``mean``, ``support_lo`` and ``support_hi``, and implement
    ``cdf`` plus kind-specific density/mass access.
    """

    kind: str
    family: str
    params: dict
    mean: float
    support_lo: float
    support_hi: float

    def cdf(self, x):
        """P(X <= x); accepts scalars or numpy arrays."""
        raise NotImplementedError

    def prob(self, interval: Interval) -> float:
        """P(X in (lo, hi]), computed as a CDF difference."""
        if interval.is_empty:
            return 0.0
        hi_cdf = 1.0 if interval.hi == math.inf else float(self.cdf(interval.hi))
        lo_cdf = 0.0 if interval.lo == -math.inf else float(self.cdf(interval.lo))
        p = hi_cdf - lo_cdf
        return min(max(p, 0.0), 1.0)

    def partial_expectation(self, interval: Interval,
                            tol: Tolerance | None = None) -> float:
        """E[X * 1{X in (lo, hi]}]."""
        raise NotImplementedError

    def conditional_mean(self, interval: Interval,
                         tol: Tolerance | None = None) -> float:
        """E[X | X in (lo, hi]].  Raises ValueError on zero-probability intervals."""
        p = self.prob(interval)
        if p <= 0.0:
            raise ValueError(
                f"conditional mean of zero-probability interval {interval}"
            )
        mu = self.partial_expectation(interval, tol) / p
        # Guard against float dust: the conditional mean lies in the closure of
        # the interval intersected with the support.
        lo = max(interval.lo, self.support_lo)
        hi = min(interval.hi, self.support_hi)
        return min(max(mu, lo), hi)

    def support_points(self, interval: Interval) -> np.ndarray:
        """Support atoms inside ``(lo, hi]``, ascending.  Discrete only."""
        raise TypeError(f"support_points is undefined for a {self.kind} rv")

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{type(self).__name__}({self.family}: {args})"


# ---------------------------------------------------------------------------
# continuous families
# ---------------------------------------------------------------------------

class ContinuousRV(RandomVariable):
    """Continuous distribution backed by a frozen scipy.stats object.

    ``lower_pe`` is an optional closed form for E[X * 1{X <= s}]; it is
    required when the support is unbounded below, because tail integrals are
    never evaluated as improper integrals.
    """

    kind = "continuous"

    def __init__(self, dist, family: str, params: dict, lower_pe=None):
        self._dist = dist
        self.family = family
        self.params = dict(params)
        self.mean = float(dist.mean())
        lo, hi = dist.support()
        self.support_lo = float(lo)
        self.support_hi = float(hi)
        self._lower_pe = lower_pe
        if self.support_lo == -math.inf and lower_pe is None:
            raise ValueError(
                f"{family}: a closed-form lower partial expectation is required "
                "for supports unbounded below"
            )

    def pdf(self, x):
        return self._dist.pdf(x)

    def cdf(self, x):
        return self._dist.cdf(x)

    def partial_expectation(self, interval: Interval,
                            tol: Tolerance | None = None) -> float:
        tol = tol or DEFAULT_TOLERANCE
        lo = max(interval.lo, self.support_lo)
        hi = min(interval.hi, self.support_hi)
        if lo >= hi:
            return 0.0
        lo_finite = math.isfinite(lo)
        hi_finite = math.isfinite(hi)
        if lo_finite and hi_finite:
            return integrate(lambda x: x * self.pdf(x), lo, hi, tol)
        if not lo_finite and not hi_finite:
            return self.mean
        if not lo_finite:
            return float(self._lower_pe(hi))
        # (lo, inf): complement against the full mean.
        return self.mean - self.partial_expectation(
            Interval(-math.inf, lo), tol
        )


def normal(mu: float = 0.0, sigma: float = 1.0) -> ContinuousRV:
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")

    def lower_pe(s, _mu=float(mu), _sigma=float(sigma)):
        z = (s - _mu) / _sigma
        return _mu * stats.norm.cdf(z) - _sigma * stats.norm.pdf(z)

    return ContinuousRV(stats.norm(mu, sigma), "normal",
                        {"mu": mu, "sigma": sigma}, lower_pe)


def exponential(lam: float = 1.0) -> ContinuousRV:
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    return ContinuousRV(stats.expon(scale=1.0 / lam), "exponential",
                        {"lambda": lam})


def uniform(a: float = 0.0, b: float = 1.0) -> ContinuousRV:
    if not a < b:
        raise ValueError(f"uniform needs a < b, got a={a}, b={b}")
    return ContinuousRV(stats.uniform(a, b - a), "uniform", {"a": a, "b": b})


def beta(alpha: float, beta: float) -> ContinuousRV:
    if not (alpha > 0 and beta > 0):
        raise ValueError(f"beta shape parameters must be positive, got ({alpha}, {beta})")
    return ContinuousRV(stats.beta(alpha, beta), "beta",
                        {"alpha": alpha, "beta": beta})


def gamma(k: float, theta: float = 1.0) -> ContinuousRV:
    if not (k > 0 and theta > 0):
        raise ValueError(f"gamma needs k > 0 and theta > 0, got ({k}, {theta})")
    return ContinuousRV(stats.gamma(k, scale=theta), "gamma",
                        {"k": k, "theta": theta})


def chi_squared(k: float) -> ContinuousRV:
    if not k > 0:
        raise ValueError(f"degrees of freedom must be positive, got {k}")
    return ContinuousRV(stats.chi2(k), "chi-squared", {"k": k})


def student_t(nu: float) -> ContinuousRV:
    # The mean (and hence every partial expectation trick used here) only
    # exists for nu > 1.
    if not nu > 1:
        raise ValueError(f"student-t requires nu > 1, got {nu}")

    def lower_pe(s, _nu=float(nu)):
        return -float(stats.t.pdf(s, _nu)) * (_nu + s * s) / (_nu - 1.0)

    return ContinuousRV(stats.t(nu), "student-t", {"nu": nu}, lower_pe)


def logistic(mu: float = 0.0, s: float = 1.0) -> ContinuousRV:
    if not s > 0:
        raise ValueError(f"scale must be positive, got {s}")

    def lower_pe(t, _mu=float(mu), _s=float(s)):
        z = (t - _mu) / _s
        # integral of the CDF is s * softplus(z); integration by parts gives
        # E[X 1{X<=t}] = t F(t) - s * softplus(z).
        return t / (1.0 + math.exp(-z)) - _s * float(np.logaddexp(0.0, z))

    return ContinuousRV(stats.logistic(mu, s), "logistic",
                        {"mu": mu, "s": s}, lower_pe)


def lognormal(mu: float = 0.0, sigma: float = 1.0) -> ContinuousRV:
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return ContinuousRV(stats.lognorm(sigma, scale=math.exp(mu)), "lognormal",
                        {"mu": mu, "sigma": sigma})


# ---------------------------------------------------------------------------
# discrete families
# ---------------------------------------------------------------------------

class _DiscreteRV(RandomVariable):
    kind = "discrete"

    def atoms_in(self, interval: Interval):
        """(values, weights) arrays for the atoms inside ``(lo, hi]``."""
        pts = self.support_points(interval)
        return pts, self._mass(pts)

    def _mass(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def partial_expectation(self, interval: Interval,
                            tol: Tolerance | None = None) -> float:
        lo, hi = interval.lo, interval.hi
        lo = max(lo, self.support_lo - 1.0) if math.isfinite(self.support_lo) else lo
        if lo >= hi:
            return 0.0
        if hi == math.inf:
            if lo == -math.inf:
                return self.mean
            return self.mean - self.partial_expectation(Interval(-math.inf, lo), tol)
        pts, w = self.atoms_in(Interval(lo, hi))
        if pts.size == 0:
            return 0.0
        return float(np.dot(pts, w))


class DiscreteLatticeRV(_DiscreteRV):
    """Integer-lattice distribution backed by a frozen scipy.stats object."""

    def __init__(self, dist, family: str, params: dict):
        self._dist = dist
        self.family = family
        self.params = dict(params)
        self.mean = float(dist.mean())
        lo, hi = dist.support()
        self.support_lo = float(lo)
        self.support_hi = float(hi)

    def pmf(self, x):
        return self._dist.pmf(x)

    def cdf(self, x):
        return self._dist.cdf(x)

    def support_points(self, interval: Interval) -> np.ndarray:
        if not interval.is_bounded:
            raise ValueError("support_points requires a bounded interval")
        lo, hi = interval.lo, interval.hi
        first = math.floor(lo) + 1 if lo == math.floor(lo) else math.ceil(lo)
        last = math.floor(hi)
        first = max(first, int(self.support_lo))
        if math.isfinite(self.support_hi):
            last = min(last, int(self.support_hi))
        if first > last:
            return np.empty(0, dtype=float)
        return np.arange(first, last + 1, dtype=float)

    def _mass(self, pts: np.ndarray) -> np.ndarray:
        if pts.size == 0:
            return pts
        return np.asarray(self.pmf(pts), dtype=float)


def binomial(n: int, p: float) -> DiscreteLatticeRV:
    if not (int(n) == n and n >= 1):
        raise ValueError(f"n must be a positive integer, got {n}")
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return DiscreteLatticeRV(stats.binom(int(n), p), "binomial", {"n": int(n), "p": p})


def poisson(lam: float) -> DiscreteLatticeRV:
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    return DiscreteLatticeRV(stats.poisson(lam), "poisson", {"lambda": lam})


def geometric(p: float) -> DiscreteLatticeRV:
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return DiscreteLatticeRV(stats.geom(p), "geometric", {"p": p})


def negative_binomial(r: float, p: float) -> DiscreteLatticeRV:
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return DiscreteLatticeRV(stats.nbinom(r, p), "negative-binomial",
                             {"r": r, "p": p})


class EmpiricalDiscreteRV(_DiscreteRV):
    """Finite discrete distribution on arbitrary real atoms.

    Duplicate atom values are merged.  Weights must sum to one within 1e-12;
    callers loading unnormalized data should normalize first (see
    :func:`from_csv`).
    """

    family = "empirical"

    def __init__(self, values, weights):
        v = np.asarray(values, dtype=float)
        w = np.asarray(weights, dtype=float)
        if v.ndim != 1 or v.shape != w.shape or v.size == 0:
            raise ValueError("values and weights must be equal-length 1-d arrays")
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(w))):
            raise ValueError("values and weights must be finite")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        order = np.argsort(v, kind="stable")
        v = v[order]
        w = w[order]
        if v.size > 1:  # merge duplicates
            uniq, inverse = np.unique(v, return_inverse=True)
            merged = np.zeros_like(uniq)
            np.add.at(merged, inverse, w)
            v, w = uniq, merged
        total = float(np.sum(w))
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1 within 1e-12, got {total!r}")
        self.values = v
        self.weights = w
        self._cum = np.concatenate([[0.0], np.cumsum(w)])
        self._cum_xw = np.concatenate([[0.0], np.cumsum(v * w)])
        self.params = {"n_atoms": int(v.size)}
        self.mean = float(np.dot(v, w))
        self.support_lo = float(v[0])
        self.support_hi = float(v[-1])

    def pmf(self, x):
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        idx = np.searchsorted(self.values, x_arr)
        idx = np.clip(idx, 0, self.values.size - 1)
        out = np.where(self.values[idx] == x_arr, self.weights[idx], 0.0)
        return out if np.ndim(x) else float(out[0])

    def cdf(self, x):
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        idx = np.searchsorted(self.values, x_arr, side="right")
        out = self._cum[idx]
        return out if np.ndim(x) else float(out[0])

    def support_points(self, interval: Interval) -> np.ndarray:
        lo_i = np.searchsorted(self.values, interval.lo, side="right")
        hi_i = np.searchsorted(self.values, interval.hi, side="right")
        return self.values[lo_i:hi_i].copy()

    def _mass(self, pts: np.ndarray) -> np.ndarray:
        if pts.size == 0:
            return pts
        idx = np.searchsorted(self.values, pts)
        return self.weights[idx].copy()

    def partial_expectation(self, interval: Interval,
                            tol: Tolerance | None = None) -> float:
        lo_i = np.searchsorted(self.values, interval.lo, side="right")
        hi_i = np.searchsorted(self.values, interval.hi, side="right")
        return float(self._cum_xw[hi_i] - self._cum_xw[lo_i])


class PiecewiseUniformRV(RandomVariable):
    """Continuous distribution that is uniform on each of a list of disjoint
    pieces, with piece masses summing to one.  CDF and partial expectations
    are in closed form, so no quadrature is involved.
    """

    kind = "continuous"
    family = "piecewise-uniform"

    def __init__(self, pieces, weights=None):
        arr = np.asarray(pieces, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
            raise ValueError("pieces must be a nonempty list of (lo, hi) pairs")
        lo = arr[:, 0]
        hi = arr[:, 1]
        if not np.all(np.isfinite(arr)):
            raise ValueError("piece endpoints must be finite")
        if not np.all(hi > lo):
            raise ValueError("every piece needs positive width")
        if not np.all(lo[1:] >= hi[:-1]):
            raise ValueError("pieces must be disjoint and ascending")
        k = arr.shape[0]
        if weights is None:
            w = np.full(k, 1.0 / k)
        else:
            w = np.asarray(weights, dtype=float)
            if w.shape != (k,) or np.any(w <= 0):
                raise ValueError("weights must be positive, one per piece")
            if abs(float(np.sum(w)) - 1.0) > 1e-12:
                raise ValueError("piece weights must sum to 1 within 1e-12")
        self.piece_lo = lo
        self.piece_hi = hi
        self.piece_w = w
        self.density = w / (hi - lo)
        self.params = {"n_pieces": int(k)}
        self.support_lo = float(lo[0])
        self.support_hi = float(hi[-1])
        self.mean = float(np.dot(w, 0.5 * (lo + hi)))

    def pdf(self, x):
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        inside = (x_arr[:, None] > self.piece_lo) & (x_arr[:, None] <= self.piece_hi)
        out = inside @ self.density
        return out if np.ndim(x) else float(out[0])

    def cdf(self, x):
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        frac = (x_arr[:, None] - self.piece_lo) / (self.piece_hi - self.piece_lo)
        out = np.clip(frac, 0.0, 1.0) @ self.piece_w
        return out if np.ndim(x) else float(out[0])

    def partial_expectation(self, interval: Interval,
                            tol: Tolerance | None = None) -> float:
        lo = max(interval.lo, self.support_lo)
        hi = min(interval.hi, self.support_hi)
        if lo >= hi:
            return 0.0
        a = np.maximum(lo, self.piece_lo)
        b = np.minimum(hi, self.piece_hi)
        m = b > a
        if not np.any(m):
            return 0.0
        return float(np.sum(self.density[m] * (b[m] ** 2 - a[m] ** 2) / 2.0))


def empirical(values, weights=None) -> EmpiricalDiscreteRV:
    values = np.asarray(values, dtype=float)
    if weights is None:
        weights = np.full(values.size, 1.0 / values.size)
    return EmpiricalDiscreteRV(values, weights)


def piecewise_uniform(pieces, weights=None) -> PiecewiseUniformRV:
    return PiecewiseUniformRV(pieces, weights)


# ---------------------------------------------------------------------------
# spec-string parsing and CSV loading
# ---------------------------------------------------------------------------

FAMILIES = {
    "normal": (normal, {"mu": "mu", "sigma": "sigma"}),
    "exponential": (exponential, {"lambda": "lam"}),
    "uniform": (uniform, {"a": "a", "b": "b"}),
    "beta": (beta, {"alpha": "alpha", "beta": "beta"}),
    "gamma": (gamma, {"k": "k", "theta": "theta"}),
    "chi-squared": (chi_squared, {"k": "k"}),
    "student-t": (student_t, {"nu": "nu"}),
    "logistic": (logistic, {"mu": "mu", "s": "s"}),
    "lognormal": (lognormal, {"mu": "mu", "sigma": "sigma"}),
    "binomial": (binomial, {"n": "n", "p": "p"}),
    "poisson": (poisson, {"lambda": "lam"}),
    "geometric": (geometric, {"p": "p"}),
    "negative-binomial": (negative_binomial, {"r": "r", "p": "p"}),
}


def from_spec(spec: str) -> RandomVariable:
    """Build a distribution from a ``family:key=value,...`` string.

    Example: ``from_spec("normal:mu=0,sigma=1")``.  The ``empirical`` family
    has no inline parameters; load it from data with :func:`from_csv`.
    """
    name, _, rest = spec.partition(":")
    name = name.strip()
    if name == "empirical":
        raise ValueError("empirical distributions are loaded from a CSV file")
    if name not in FAMILIES:
        known = ", ".join(sorted(FAMILIES) + ["empirical"])
        raise ValueError(f"unknown distribution family {name!r} (known: {known})")
    factory, key_map = FAMILIES[name]
    kwargs = {}
    if rest.strip():
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in key_map:
                raise ValueError(
                    f"bad parameter {item!r} for family {name!r} "
                    f"(expected keys: {', '.join(key_map)})"
                )
            try:
                kwargs[key_map[key]] = float(value)
            except ValueError:
                raise ValueError(f"parameter {key!r} must be a number, got {value!r}")
    if name == "binomial" and "n" in kwargs:
        kwargs["n"] = int(kwargs["n"])
    return factory(**kwargs)


def from_csv(path) -> EmpiricalDiscreteRV:
    """Load an empirical distribution from a CSV file with ``value,weight``
    columns.  Weights are normalized to sum to one before construction."""
    values = []
    weights = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"value", "weight"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected CSV header with value,weight columns")
        for row in reader:
            values.append(float(row["value"]))
            weights.append(float(row["weight"]))
    if not values:
        raise ValueError(f"{path}: no scenario rows found")
    w = np.asarray(weights, dtype=float)
    total = float(np.sum(w))
    if total <= 0:
        raise ValueError(f"{path}: weights must have a positive sum")
    return empirical(np.asarray(values), w / total)
