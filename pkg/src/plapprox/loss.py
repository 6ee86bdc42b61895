"""Expected-min loss functions and the reduction of general two-piece losses.

The basic object is f_X(s) = E[min(s, X)], a concave nondecreasing function of
s.  A general loss E[min(a1*s + b1*X + c1, a2*s + b2*X + c2)] (or max) reduces
to an affine function of s plus f evaluated on a rescaled argument and a
rescaled variable; :func:`reduce_general_loss` computes the coefficients and
:func:`eval_general_loss` evaluates the whole thing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import Tolerance
from .rv import Interval, RandomVariable

__all__ = [
    "eval_loss",
    "eval_induced_loss",
    "pointwise_gap",
    "GeneralLossCoeffs",
    "CanonicalLoss",
    "reduce_general_loss",
    "eval_general_loss",
]


def eval_loss(rv: RandomVariable, s: float, tol: Tolerance | None = None) -> float:
    """E[min(s, X)] = E[X 1{X <= s}] + s * P(X > s)."""
    s = float(s)
    below = rv.partial_expectation(Interval(-math.inf, s), tol)
    return below + s * (1.0 - float(rv.cdf(s)))


def eval_induced_loss(atoms, s: float) -> float:
    """E[min(s, X~)] for a finite discrete X~ given as an object with
    ``values`` and ``probs`` sequences (see ``partition.InducedDiscrete``)."""
    v = np.asarray(atoms.values, dtype=float)
    p = np.asarray(atoms.probs, dtype=float)
    return float(np.dot(p, np.minimum(float(s), v)))


def pointwise_gap(rv: RandomVariable, atoms, s: float,
                  tol: Tolerance | None = None) -> float:
    """f_X~(s) - f_X(s); nonnegative when X~ is induced by conditional means."""
    return eval_induced_loss(atoms, s) - eval_loss(rv, s, tol)


@dataclass(frozen=True)
class GeneralLossCoeffs:
    """Coefficients of E[minmax(a1*s + b1*X + c1, a2*s + b2*X + c2)].

    ``sense`` is "min" or "max".  The reduction requires a1 != a2 and
    b1 != b2; equal coefficients make the loss affine in s or X, which needs
    no approximation machinery.
    """

    a1: float
    b1: float
    c1: float
    a2: float
    b2: float
    c2: float
    sense: str = "min"

    def __post_init__(self):
        for name in ("a1", "b1", "c1", "a2", "b2", "c2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")

    def negated(self) -> "GeneralLossCoeffs":
        return GeneralLossCoeffs(-self.a1, -self.b1, -self.c1,
                                 -self.a2, -self.b2, -self.c2, "min")


@dataclass(frozen=True)
class CanonicalLoss:
    """Reduced form: loss(s) = sign * [A*s' + B*E[Y] + C + E[min(s', Y)]]
    with s' = s_scale * s + s_shift and Y = y_scale * X; sign is -1 when
    ``negate`` (max-sense input), else +1.
    """

    A: float
    B: float
    C: float
    y_scale: float
    s_scale: float
    s_shift: float
    negate: bool


def reduce_general_loss(coeffs: GeneralLossCoeffs) -> CanonicalLoss:
    """Rewrite a two-piece min/max loss around E[min(s', Y)].

    A max-sense loss is handled by negating all six coefficients (turning it
    into a min) and flagging the result for negation.
    """
    negate = coeffs.sense == "max"
    c = coeffs.negated() if negate else coeffs
    if c.a1 == c.a2:
        raise ValueError("reduction requires a1 != a2 (loss is affine in X otherwise)")
    if c.b1 == c.b2:
        raise ValueError("reduction requires b1 != b2 (loss is affine in s otherwise)")
    a_diff = c.a1 - c.a2
    b_diff = c.b2 - c.b1
    return CanonicalLoss(
        A=c.a2 / a_diff,
        B=c.b1 / b_diff,
        C=(c.a1 * c.c2 - c.a2 * c.c1) / a_diff,
        y_scale=b_diff,
        s_scale=a_diff,
        s_shift=c.c1 - c.c2,
        negate=negate,
    )


def _expected_min_scaled(rv: RandomVariable, s_prime: float, c: float,
                         tol: Tolerance | None) -> float:
    """E[min(s', c*X)] without materializing the scaled variable.

    For c > 0 this is c * f_X(s'/c).  For c < 0, min(s', c*X) equals s'
    exactly when X <= s'/c (the boundary value coincides from both branches),
    giving s' * F(t) + c * E[X 1{X > t}] with t = s'/c.
    """
    t = s_prime / c
    if c > 0:
        return c * eval_loss(rv, t, tol)
    below = rv.partial_expectation(Interval(-math.inf, t), tol)
    return s_prime * float(rv.cdf(t)) + c * (rv.mean - below)


def eval_general_loss(coeffs: GeneralLossCoeffs, rv: RandomVariable, s: float,
                      tol: Tolerance | None = None) -> float:
    """Evaluate the general two-piece loss at s through its canonical form."""
    canon = reduce_general_loss(coeffs)
    s_prime = canon.s_scale * float(s) + canon.s_shift
    value = (
        canon.A * s_prime
        + canon.B * (canon.y_scale * rv.mean)
        + canon.C
        + _expected_min_scaled(rv, s_prime, canon.y_scale, tol)
    )
    return -value if canon.negate else value
