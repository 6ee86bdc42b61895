"""Scalar numerical primitives: adaptive definite integration and bracketed
root finding.

Integration uses adaptive Simpson panels with Richardson extrapolation.  The
integrand is evaluated in batches, so callables should accept numpy arrays;
plain scalar functions are handled through a fallback loop.  Root finding is
plain bisection on a strict sign-change bracket and returns the lower end of
the final bracket, so the returned point always satisfies ``g(y) < 0`` (or is
an exact root).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "NumericError",
    "BracketError",
    "integrate",
    "bisect",
]


class NumericError(RuntimeError):
    """Raised when a numerical routine fails to converge or meets a
    non-finite value.

    Attributes
    ----------
    estimate : float or None
        Best available estimate at the point of failure, when one exists.
    """

    def __init__(self, message: str, estimate: float | None = None):
        super().__init__(message)
        self.estimate = estimate


class BracketError(ValueError):
    """The endpoints passed to :func:`bisect` do not bracket a sign change."""


@dataclass(frozen=True)
class Tolerance:
    """Absolute tolerance and iteration budget shared by the numeric routines.

    ``abs_tol`` bounds the absolute integration error and the width of the
    final bisection bracket.  ``max_iterations`` caps refinement levels
    (integration) and bisection steps.
    """

    abs_tol: float = 1e-8
    max_iterations: int = 200

    def __post_init__(self):
        if not (isinstance(self.abs_tol, (int, float)) and self.abs_tol > 0):
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol!r}")
        if self.max_iterations < 1:
            raise ValueError(
                f"max_iterations must be at least 1, got {self.max_iterations!r}"
            )


DEFAULT_TOLERANCE = Tolerance()

_INITIAL_PANELS = 8


def _eval_batch(f: Callable, x: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` on the 1-d array ``x``, tolerating scalar-only callables."""
    try:
        out = np.asarray(f(x), dtype=float)
        if out.shape == x.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(f(xi)) for xi in x], dtype=float)


def integrate(f: Callable, lo: float, hi: float, tol: Tolerance | None = None) -> float:
    """Definite integral of ``f`` over ``[lo, hi]`` to absolute accuracy
    ``tol.abs_tol``.

    Parameters
    ----------
    f : callable
        Integrand; should map a numpy array to an array of the same shape
        (scalar callables work but are slower).
    lo, hi : float
        Finite bounds with ``lo <= hi``.  ``lo == hi`` returns 0.0 without
        evaluating ``f``.
    tol : Tolerance, optional

    Raises
    ------
    NumericError
        If the panel subdivision does not converge within
        ``tol.max_iterations`` refinement levels, or the integrand returns a
        non-finite value.  The exception carries the best estimate.
    """
    tol = tol or DEFAULT_TOLERANCE
    lo = float(lo)
    hi = float(hi)
    if lo > hi:
        raise ValueError(f"integration bounds out of order: lo={lo} > hi={hi}")
    if lo == hi:
        return 0.0
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("integration bounds must be finite")

    width = hi - lo
    edges = np.linspace(lo, hi, _INITIAL_PANELS + 1)
    a = edges[:-1].copy()
    b = edges[1:].copy()
    m = 0.5 * (a + b)
    fa = _eval_batch(f, a)
    fm = _eval_batch(f, m)
    fb = _eval_batch(f, b)

    total = 0.0
    for _ in range(tol.max_iterations):
        if not (
            np.all(np.isfinite(fa)) and np.all(np.isfinite(fm)) and np.all(np.isfinite(fb))
        ):
            raise NumericError(
                "integrand returned a non-finite value", estimate=total
            )
        h = b - a
        s_whole = h / 6.0 * (fa + 4.0 * fm + fb)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = _eval_batch(f, lm)
        frm = _eval_batch(f, rm)
        s_left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        s_right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        s_two = s_left + s_right
        err = np.abs(s_two - s_whole) / 15.0
        budget = tol.abs_tol * (h / width)
        # Panels narrower than float resolution cannot be refined further.
        exhausted = h <= 1e-14 * width
        done = (err <= budget) | exhausted
        refined = s_two + (s_two - s_whole) / 15.0
        total += float(np.sum(refined[done]))
        if np.all(done):
            return total
        keep = ~done
        a = np.concatenate([a[keep], m[keep]])
        b = np.concatenate([m[keep], b[keep]])
        new_m = np.concatenate([lm[keep], rm[keep]])
        fa = np.concatenate([fa[keep], fm[keep]])
        fb = np.concatenate([fm[keep], fb[keep]])
        fm = np.concatenate([flm[keep], frm[keep]])
        m = new_m

    best = total + float(np.sum((b - a) / 6.0 * (fa + 4.0 * fm + fb)))
    raise NumericError(
        f"integration did not converge within {tol.max_iterations} refinement levels",
        estimate=best,
    )


def bisect(g: Callable[[float], float], lo: float, hi: float,
           tol: Tolerance | None = None) -> float:
    """Find a root of ``g`` inside the strict bracket ``g(lo) < 0 < g(hi)``.

    Returns the lower end of the final bracket, which is within
    ``tol.abs_tol`` of the true root and satisfies ``g(y) < 0`` (unless an
    exact zero was hit, which is returned directly).

    Raises
    ------
    BracketError
        If the endpoints do not strictly bracket a sign change.
    NumericError
        On non-finite values of ``g`` or iteration exhaustion.
    """
    tol = tol or DEFAULT_TOLERANCE
    lo = float(lo)
    hi = float(hi)
    if not lo < hi:
        raise BracketError(f"bracket endpoints out of order: [{lo}, {hi}]")
    g_lo = float(g(lo))
    g_hi = float(g(hi))
    if math.isnan(g_lo) or math.isnan(g_hi):
        raise NumericError("g returned NaN at a bracket endpoint")
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if not (g_lo < 0.0 < g_hi):
        raise BracketError(
            f"g must satisfy g(lo) < 0 < g(hi); got g({lo})={g_lo}, g({hi})={g_hi}"
        )

    for _ in range(tol.max_iterations):
        if hi - lo <= tol.abs_tol:
            return lo
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # interval no longer splittable in floats
            return lo
        g_mid = float(g(mid))
        if math.isnan(g_mid):
            raise NumericError("g returned NaN inside the bracket", estimate=mid)
        if g_mid < 0.0:
            lo = mid
        elif g_mid > 0.0:
            hi = mid
        else:
            return mid
    raise NumericError(
        f"bisection did not converge within {tol.max_iterations} iterations",
        estimate=lo,
    )
