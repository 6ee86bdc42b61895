"""Scikit-learn style wrapper around the approximation pipeline.

``PiecewiseLinearApproximator`` fits either a distribution object or raw
scenario samples, exposing the fitted piecewise linear loss through
``predict`` and the scenario-reduction mapping through ``transform``.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .approximate import approximate
from .rv import RandomVariable, empirical

__all__ = ["PiecewiseLinearApproximator"]


def _as_values(X) -> np.ndarray:
    """Accept a 1-d array or a single-column 2-d array of scenario values."""
    arr = check_array(X, ensure_2d=False, dtype=float)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(
                f"scenario input must be one-dimensional, got shape {arr.shape}"
            )
        arr = arr[:, 0]
    return arr


class PiecewiseLinearApproximator(TransformerMixin, BaseEstimator):
    """Error-certified piecewise linear approximation of E[min(s, X)].

    Parameters
    ----------
    eps : float, default 0.01
        Absolute error budget for the approximation over (a, b].
    bound : {"exact", "quarter", "eighth"}, default "exact"
        Bound function driving the greedy partition.  "exact" uses the fewest
        intervals; "eighth" halves the interval count in exchange for a 2*eps
        guarantee.
    a, b : float, optional
        Approximation range.  Required when fitting a distribution object;
        inferred from the data range when fitting scenario samples.

    Attributes
    ----------
    result_ : ApproxResult
        Full pipeline output.
    breakpoints_, slopes_, intercepts_ : ndarray
        The fitted piecewise linear function.
    scenario_values_, scenario_probs_ : ndarray
        The reduced scenario set (induced atoms).
    n_intervals_ : int
        Number of working intervals in the fitted partition.
    total_error_ : float
        Certified maximum gap to the true loss over (a, b].
    """

    def __init__(self, eps: float = 0.01, bound: str = "exact",
                 a: float | None = None, b: float | None = None):
        self.eps = eps
        self.bound = bound
        self.a = a
        self.b = b

    def _resolve_rv(self, X, sample_weight):
        if isinstance(X, RandomVariable):
            if sample_weight is not None:
                raise ValueError("sample_weight only applies to scenario input")
            if self.a is None or self.b is None:
                raise ValueError(
                    "a and b are required when fitting a distribution object"
                )
            return X, float(self.a), float(self.b)
        values = _as_values(X)
        if sample_weight is None:
            weights = np.full(values.size, 1.0 / values.size)
        else:
            weights = check_array(sample_weight, ensure_2d=False, dtype=float)
            if weights.shape != values.shape:
                raise ValueError("sample_weight must match the sample count")
            total = float(weights.sum())
            if total <= 0:
                raise ValueError("sample_weight must have a positive sum")
            weights = weights / total
        rv = empirical(values, weights)
        # The range must start strictly below the smallest atom for the
        # half-open intervals to cover it.
        a = float(self.a) if self.a is not None else math.nextafter(
            rv.support_lo, -math.inf)
        b = float(self.b) if self.b is not None else rv.support_hi
        return rv, a, b

    def fit(self, X, y=None, sample_weight=None):
        """Fit the approximation to a distribution or to scenario samples.

        Parameters
        ----------
        X : RandomVariable or array-like of shape (n,) or (n, 1)
            Either a distribution object or scenario values.
        y : ignored
        sample_weight : array-like, optional
            Scenario weights (normalized internally); scenario input only.
        """
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        rv, a, b = self._resolve_rv(X, sample_weight)
        result = approximate(rv, a, b, self.eps, self.bound)
        self.result_ = result
        self.rv_ = rv
        self.a_ = a
        self.b_ = b
        self.breakpoints_ = np.asarray(result.pwl.breakpoints)
        self.slopes_ = np.asarray(result.pwl.slopes)
        self.intercepts_ = np.asarray(result.pwl.intercepts)
        self.scenario_values_ = np.asarray(result.atoms.values)
        self.scenario_probs_ = np.asarray(result.atoms.probs)
        self.n_intervals_ = result.partition.n
        self.total_error_ = result.errors.total
        return self

    def predict(self, X) -> np.ndarray:
        """Evaluate the fitted piecewise linear loss at the given points."""
        check_is_fitted(self, "result_")
        s = _as_values(X)
        return np.asarray(self.result_.pwl.evaluate(s))

    def transform(self, X) -> np.ndarray:
        """Map each scenario value to its reduced representative.

        Points are assigned to the atom of the partition interval containing
        them; points falling in a zero-probability interval (which holds no
        atom) snap to the nearest atom value.  Returns a column vector.
        """
        check_is_fitted(self, "result_")
        s = _as_values(X)
        atoms = self.scenario_values_
        cuts = np.asarray(self.result_.partition.cuts)
        # Interval index for each point: 0 is the left tail, n+1 the right.
        idx = np.searchsorted(cuts, s, side="left")
        # Atom index per interval (or -1 where the interval carries no mass);
        # atoms are binned by the same rule as the query points, so a query
        # equal to an atom value always maps to that atom.
        atom_of = np.full(cuts.size + 1, -1)
        for k, v in enumerate(atoms):
            atom_of[np.searchsorted(cuts, v, side="left")] = k
        mapped = np.empty_like(s)
        for i, j in enumerate(idx):
            aj = atom_of[j]
            if aj < 0:
                aj = int(np.argmin(np.abs(atoms - s[i])))
            mapped[i] = atoms[aj]
        return mapped.reshape(-1, 1)

    def to_scenarios(self):
        """(values, probabilities) of the reduced scenario set."""
        check_is_fitted(self, "result_")
        return self.scenario_values_.copy(), self.scenario_probs_.copy()
