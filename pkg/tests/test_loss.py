"""Expected-min losses and the two-piece min/max reduction.

The reduction is checked against direct enumeration over discrete outcomes,
which never goes through the canonical form.
"""

import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from plapprox.loss import (
    CanonicalLoss,
    GeneralLossCoeffs,
    eval_general_loss,
    eval_induced_loss,
    eval_loss,
    pointwise_gap,
    reduce_general_loss,
)
from plapprox.partition import InducedDiscrete, induce_discrete, run_partition
from plapprox.rv import empirical, normal, uniform


def bruteforce_general_loss(coeffs, values, probs, s):
    """E[minmax(a1 s + b1 X + c1, a2 s + b2 X + c2)] by direct enumeration."""
    pick = min if coeffs.sense == "min" else max
    total = 0.0
    for v, p in zip(values, probs):
        total += p * pick(coeffs.a1 * s + coeffs.b1 * v + coeffs.c1,
                          coeffs.a2 * s + coeffs.b2 * v + coeffs.c2)
    return total


class TestEvalLoss:
    def test_uniform_closed_form(self):
        # E[min(s, X)] for X ~ U(0,1) is s - s^2/2 on [0, 1]
        rv = uniform(0.0, 1.0)
        for s in (0.0, 0.25, 0.5, 0.9, 1.0):
            assert eval_loss(rv, s) == pytest.approx(s - s * s / 2, abs=1e-12)

    def test_saturates_at_mean(self):
        rv = normal(2.0, 3.0)
        assert eval_loss(rv, 1e6) == pytest.approx(2.0, abs=1e-9)

    def test_matches_quadrature(self):
        rv = normal(0.0, 1.0)
        for s in (-1.0, 0.0, 0.7):
            tail, _ = sp_integrate.quad(lambda x: x * rv.pdf(x), -40, s)
            want = tail + s * (1.0 - float(rv.cdf(s)))
            assert eval_loss(rv, s) == pytest.approx(want, abs=1e-9)

    def test_discrete_two_point(self):
        rv = empirical([0.0, 1.0], [0.5, 0.5])
        assert eval_loss(rv, 0.5) == pytest.approx(0.25)


class TestEvalInducedLoss:
    def test_single_atom(self):
        atoms = InducedDiscrete((0.5,), (1.0,))
        assert eval_induced_loss(atoms, 0.25) == pytest.approx(0.25)
        assert eval_induced_loss(atoms, 0.75) == pytest.approx(0.5)

    def test_two_atoms(self):
        atoms = InducedDiscrete((0.25, 0.75), (0.5, 0.5))
        assert eval_induced_loss(atoms, 0.5) == pytest.approx(0.375)

    def test_gap_for_single_interval_uniform(self):
        atoms = InducedDiscrete((0.5,), (1.0,))
        rv = uniform(0.0, 1.0)
        assert pointwise_gap(rv, atoms, 0.5) == pytest.approx(0.125, abs=1e-12)

    def test_gap_nonnegative_for_induced_atoms(self):
        rv = normal(0.0, 1.0)
        part = run_partition(rv, "exact", -3.0, 3.0, 0.1)
        atoms = induce_discrete(rv, part)
        for s in np.linspace(-4, 4, 41):
            assert pointwise_gap(rv, atoms, float(s)) >= -1e-10


class TestCoeffsValidation:
    def test_bad_sense(self):
        with pytest.raises(ValueError):
            GeneralLossCoeffs(1, 1, 0, 0, 0, 0, sense="avg")

    def test_nonfinite_coefficient(self):
        with pytest.raises(ValueError):
            GeneralLossCoeffs(math.inf, 1, 0, 0, 0, 0)

    def test_negated_flips_everything(self):
        c = GeneralLossCoeffs(1, 2, 3, 4, 5, 6, sense="max").negated()
        assert (c.a1, c.b1, c.c1, c.a2, c.b2, c.c2) == (-1, -2, -3, -4, -5, -6)
        assert c.sense == "min"

    def test_reduction_requires_distinct_s_coefficients(self):
        with pytest.raises(ValueError):
            reduce_general_loss(GeneralLossCoeffs(1, 1, 0, 1, 2, 0))

    def test_reduction_requires_distinct_x_coefficients(self):
        with pytest.raises(ValueError):
            reduce_general_loss(GeneralLossCoeffs(1, 1, 0, 2, 1, 0))


class TestReduction:
    def test_identity_on_plain_min(self):
        # E[min(s, X)] itself: a1=1,b1=0,c1=0 / a2=0,b2=1,c2=0.
        canon = reduce_general_loss(GeneralLossCoeffs(1, 0, 0, 0, 1, 0))
        assert canon == CanonicalLoss(A=0.0, B=0.0, C=0.0, y_scale=1.0,
                                      s_scale=1.0, s_shift=0.0, negate=False)

    def test_plain_min_evaluates_like_eval_loss(self):
        rv = uniform(0.0, 1.0)
        coeffs = GeneralLossCoeffs(1, 0, 0, 0, 1, 0)
        for s in (0.1, 0.5, 0.9):
            assert eval_general_loss(coeffs, rv, s) == pytest.approx(
                eval_loss(rv, s), abs=1e-12
            )

    def test_max_of_shortfall_two_point(self):
        # E[max(s - X, 0)] with X uniform on {0, 1}; at s=0.5 this is 0.25.
        coeffs = GeneralLossCoeffs(1, -1, 0, 0, 0, 0, sense="max")
        rv = empirical([0.0, 1.0], [0.5, 0.5])
        assert eval_general_loss(coeffs, rv, 0.5) == pytest.approx(0.25, abs=1e-12)

    def test_random_coefficients_match_enumeration(self):
        rng = np.random.default_rng(41)
        checked = 0
        while checked < 150:
            a1, b1, c1, a2, b2, c2 = rng.uniform(-3, 3, size=6)
            if abs(a1 - a2) < 1e-3 or abs(b1 - b2) < 1e-3:
                continue
            sense = "min" if rng.random() < 0.5 else "max"
            coeffs = GeneralLossCoeffs(a1, b1, c1, a2, b2, c2, sense)
            n = int(rng.integers(2, 8))
            values = np.sort(rng.uniform(-5, 5, size=n))
            values += np.arange(n) * 1e-6  # keep atoms distinct
            probs = rng.uniform(0.1, 1.0, size=n)
            probs /= probs.sum()
            rv = empirical(values, probs)
            s = float(rng.uniform(-6, 6))
            want = bruteforce_general_loss(coeffs, values, probs, s)
            got = eval_general_loss(coeffs, rv, s)
            assert got == pytest.approx(want, abs=1e-10)
            checked += 1

    def test_negative_x_scale_against_quadrature(self):
        # b2 < b1 makes the scaled variable's coefficient negative, which
        # exercises the survival-function branch of the evaluation.
        coeffs = GeneralLossCoeffs(2.0, 3.0, 1.0, -1.0, -2.0, 0.5)
        rv = uniform(0.0, 1.0)
        for s in (-0.5, 0.2, 1.3):
            kink = (-3 * s - 0.5) / 5  # where the two pieces cross
            pts = [kink] if 0.0 < kink < 1.0 else None
            want, _ = sp_integrate.quad(
                lambda x: min(2 * s + 3 * x + 1, -s - 2 * x + 0.5), 0.0, 1.0,
                points=pts,
            )
            assert eval_general_loss(coeffs, rv, s) == pytest.approx(want, abs=1e-9)
