"""Distribution layer: CDFs, interval probabilities, partial expectations.

Closed-form oracles (error function, antiderivatives) and scipy quadrature
cross-check the family implementations; property loops are seeded.
"""

import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate
from scipy import stats

from plapprox.rv import (
    EmpiricalDiscreteRV,
    Interval,
    PiecewiseUniformRV,
    beta,
    binomial,
    chi_squared,
    empirical,
    exponential,
    from_csv,
    from_spec,
    gamma,
    geometric,
    logistic,
    lognormal,
    negative_binomial,
    normal,
    piecewise_uniform,
    poisson,
    student_t,
    uniform,
)


def normal_lower_pe(s, mu=0.0, sigma=1.0):
    """E[X 1{X <= s}] for a normal, via the error function."""
    z = (s - mu) / sigma
    Phi = 0.5 * (1.0 + math.erf(z / math.sqrt(2)))
    phi = math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
    return mu * Phi - sigma * phi


class TestInterval:
    def test_width_and_flags(self):
        iv = Interval(1.0, 3.5)
        assert iv.width == 2.5
        assert not iv.is_empty
        assert iv.is_bounded

    def test_empty_and_unbounded(self):
        assert Interval(2.0, 2.0).is_empty
        assert not Interval(-math.inf, 0.0).is_bounded

    def test_rejects_reversed_and_nan(self):
        with pytest.raises(ValueError):
            Interval(1.0, 0.0)
        with pytest.raises(ValueError):
            Interval(float("nan"), 1.0)

    def test_str(self):
        assert str(Interval(0.0, 1.0)) == "(0.0, 1.0]"


class TestContinuousFamilies:
    def test_normal_lower_tail_matches_erf_oracle(self):
        # The half-line path is closed form, so machine accuracy applies.
        rv = normal(0.0, 1.0)
        for s in (-3.0, -0.7, 0.0, 1.3, 4.0):
            got = rv.partial_expectation(Interval(-math.inf, s))
            assert got == pytest.approx(normal_lower_pe(s), abs=1e-14)

    def test_normal_partial_expectation_matches_erf_oracle(self):
        # Bounded intervals go through quadrature with abs_tol 1e-8.
        rv = normal(0.0, 1.0)
        rng = np.random.default_rng(3)
        for _ in range(100):
            x, y = np.sort(rng.uniform(-4, 4, size=2))
            want = normal_lower_pe(y) - normal_lower_pe(x)
            got = rv.partial_expectation(Interval(x, y))
            assert got == pytest.approx(want, abs=2e-9)

    def test_normal_shifted_scaled(self):
        rv = normal(2.0, 3.0)
        got = rv.partial_expectation(Interval(-math.inf, 4.0))
        assert got == pytest.approx(normal_lower_pe(4.0, 2.0, 3.0), abs=1e-12)
        assert rv.mean == pytest.approx(2.0)

    def test_exponential_partial_expectation_closed_form(self):
        lam = 1.7
        rv = exponential(lam)

        def lower(s):
            # integral of x lam e^(-lam x) over (0, s]
            return (1.0 - math.exp(-lam * s) * (1.0 + lam * s)) / lam

        rng = np.random.default_rng(5)
        for _ in range(50):
            x, y = np.sort(rng.uniform(0, 6, size=2))
            got = rv.partial_expectation(Interval(x, y))
            assert got == pytest.approx(lower(y) - lower(x), abs=2e-9)

    def test_uniform_prob_and_pe(self):
        rv = uniform(0.0, 1.0)
        assert rv.prob(Interval(0.2, 0.7)) == pytest.approx(0.5)
        # integral of x over (0.2, 0.7]
        assert rv.partial_expectation(Interval(0.2, 0.7)) == pytest.approx(
            (0.7 ** 2 - 0.2 ** 2) / 2, abs=1e-12
        )
        assert rv.conditional_mean(Interval(0.2, 0.7)) == pytest.approx(0.45)

    @pytest.mark.parametrize(
        "rv,lo,hi",
        [
            (student_t(10.0), -3.4, 3.4),
            (logistic(0.0, 1.0), -5.4, 5.4),
            (beta(2.0, 5.0), 0.0, 0.8),
            (gamma(2.0, 1.0), 0.0, 6.2),
            (chi_squared(3.0), 0.0, 10.3),
            (lognormal(0.0, 1.0), 0.0, 8.1),
        ],
    )
    def test_partial_expectation_matches_quadrature(self, rv, lo, hi):
        rng = np.random.default_rng(17)
        for _ in range(8):
            x, y = np.sort(rng.uniform(lo, hi, size=2))
            want, err = sp_integrate.quad(lambda t: t * rv.pdf(t), x, y, limit=200)
            got = rv.partial_expectation(Interval(x, y))
            assert got == pytest.approx(want, abs=max(1e-9, 10 * err))

    def test_conditional_mean_lies_inside_interval(self):
        rng = np.random.default_rng(23)
        for rv in (normal(0, 1), exponential(1.0), logistic(0, 1)):
            for _ in range(50):
                x, y = np.sort(rng.uniform(-3, 3, size=2))
                if rv.prob(Interval(x, y)) < 1e-9:
                    continue
                mu = rv.conditional_mean(Interval(x, y))
                assert x <= mu <= y

    def test_cdf_array_evaluation(self):
        rv = normal(0, 1)
        s = np.array([-1.0, 0.0, 1.0])
        out = np.asarray(rv.cdf(s))
        assert out.shape == (3,)
        assert out[1] == pytest.approx(0.5)


class TestDiscreteFamilies:
    def test_binomial_partial_expectation_is_weighted_sum(self):
        rv = binomial(200, 0.5)
        iv = Interval(78.0, 121.0)
        k = np.arange(79, 122)
        want = float(np.sum(k * stats.binom.pmf(k, 200, 0.5)))
        assert rv.partial_expectation(iv) == pytest.approx(want, abs=1e-12)
        assert rv.prob(iv) == pytest.approx(
            float(np.sum(stats.binom.pmf(k, 200, 0.5))), abs=1e-12
        )

    def test_support_points_are_lattice_points_in_half_open_interval(self):
        rv = poisson(100.0)
        pts = rv.support_points(Interval(70.0, 130.0))
        assert pts[0] == 71.0 and pts[-1] == 130.0
        assert np.array_equal(pts, np.arange(71.0, 131.0))

    def test_geometric_mean_and_masses(self):
        rv = geometric(0.01)
        assert rv.mean == pytest.approx(100.0)
        pts = rv.support_points(Interval(0.0, 5.0))
        assert np.array_equal(pts, np.arange(1.0, 6.0))
        assert rv.pmf(1.0) == pytest.approx(0.01)

    def test_negative_binomial_against_scipy(self):
        rv = negative_binomial(100.0, 0.5)
        iv = Interval(57.0, 142.0)
        k = np.arange(58, 143)
        want = float(np.sum(k * stats.nbinom.pmf(k, 100, 0.5)))
        assert rv.partial_expectation(iv) == pytest.approx(want, abs=1e-10)

    def test_kind_flags(self):
        assert binomial(10, 0.5).kind == "discrete"
        assert normal(0, 1).kind == "continuous"


class TestEmpirical:
    def test_basic_queries(self):
        rv = empirical([0.0, 1.0, 3.0], [0.2, 0.3, 0.5])
        assert rv.mean == pytest.approx(1.8)
        assert rv.cdf(1.0) == pytest.approx(0.5)
        assert rv.prob(Interval(0.0, 3.0)) == pytest.approx(0.8)
        assert rv.partial_expectation(Interval(0.0, 3.0)) == pytest.approx(1.8)
        assert rv.support_lo == 0.0 and rv.support_hi == 3.0

    def test_uniform_weights_by_default(self):
        rv = empirical([1.0, 2.0, 3.0, 4.0])
        assert rv.pmf(2.0) == pytest.approx(0.25)

    def test_duplicates_merge(self):
        rv = empirical([1.0, 1.0, 2.0], [0.25, 0.25, 0.5])
        assert rv.values.tolist() == [1.0, 2.0]
        assert rv.pmf(1.0) == pytest.approx(0.5)

    def test_rejects_unnormalized_weights(self):
        with pytest.raises(ValueError):
            EmpiricalDiscreteRV([0.0, 1.0], [0.5, 0.6])

    def test_rejects_negative_weights(self):
        with pytest.raises(ValueError):
            EmpiricalDiscreteRV([0.0, 1.0], [-0.5, 1.5])

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            EmpiricalDiscreteRV([0.0, 1.0], [1.0])


class TestPiecewiseUniform:
    def test_two_teeth(self):
        rv = piecewise_uniform([(0.4, 0.5), (0.9, 1.0)])
        assert rv.pdf(0.45) == pytest.approx(5.0)
        assert rv.pdf(0.7) == 0.0
        assert rv.prob(Interval(0.4, 0.5)) == pytest.approx(0.5)
        assert rv.cdf(0.7) == pytest.approx(0.5)
        assert rv.mean == pytest.approx(0.7)
        # integral of 5x over (0.4, 0.45]
        got = rv.partial_expectation(Interval(0.4, 0.45))
        assert got == pytest.approx(2.5 * (0.45 ** 2 - 0.4 ** 2), abs=1e-14)

    def test_partial_tooth_probability(self):
        rv = piecewise_uniform([(0.0, 1.0)])
        assert rv.prob(Interval(0.25, 0.5)) == pytest.approx(0.25)

    def test_weighted_pieces(self):
        rv = PiecewiseUniformRV([(0.0, 1.0), (2.0, 3.0)], [0.25, 0.75])
        assert rv.prob(Interval(2.0, 3.0)) == pytest.approx(0.75)
        assert rv.mean == pytest.approx(0.25 * 0.5 + 0.75 * 2.5)

    def test_matches_quadrature(self):
        rv = piecewise_uniform([(0.0, 0.2), (0.5, 0.6), (0.8, 1.0)])
        rng = np.random.default_rng(29)
        for _ in range(20):
            x, y = np.sort(rng.uniform(0, 1, size=2))
            want, _ = sp_integrate.quad(lambda t: t * rv.pdf(t), x, y,
                                        points=[0.2, 0.5, 0.6, 0.8], limit=100)
            assert rv.partial_expectation(Interval(x, y)) == pytest.approx(
                want, abs=1e-10
            )


class TestSpecStringsAndCsv:
    @pytest.mark.parametrize(
        "spec,family,kind",
        [
            ("normal:mu=0,sigma=1", "normal", "continuous"),
            ("exponential:lambda=1", "exponential", "continuous"),
            ("uniform:a=0,b=1", "uniform", "continuous"),
            ("beta:alpha=2,beta=5", "beta", "continuous"),
            ("gamma:k=2,theta=1", "gamma", "continuous"),
            ("chi-squared:k=3", "chi-squared", "continuous"),
            ("student-t:nu=10", "student-t", "continuous"),
            ("logistic:mu=0,s=1", "logistic", "continuous"),
            ("lognormal:mu=0,sigma=1", "lognormal", "continuous"),
            ("binomial:n=200,p=0.5", "binomial", "discrete"),
            ("poisson:lambda=100", "poisson", "discrete"),
            ("geometric:p=0.01", "geometric", "discrete"),
            ("negative-binomial:r=100,p=0.5", "negative-binomial", "discrete"),
        ],
    )
    def test_from_spec_builds_every_family(self, spec, family, kind):
        rv = from_spec(spec)
        assert rv.family == family
        assert rv.kind == kind

    def test_from_spec_unknown_family(self):
        with pytest.raises(ValueError):
            from_spec("cauchy:x0=0")

    def test_from_spec_unknown_parameter(self):
        with pytest.raises(ValueError):
            from_spec("normal:mu=0,spread=1")

    def test_from_spec_empirical_needs_csv(self):
        with pytest.raises(ValueError):
            from_spec("empirical")

    def test_from_csv_normalizes_weights(self, tmp_path):
        path = tmp_path / "scen.csv"
        path.write_text("value,weight\n1.0,2\n2.0,2\n4.0,4\n")
        rv = from_csv(path)
        assert rv.pmf(4.0) == pytest.approx(0.5)
        assert rv.mean == pytest.approx((1.0 * 2 + 2.0 * 2 + 4.0 * 4) / 8)

    def test_from_csv_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            from_csv(tmp_path / "absent.csv")
