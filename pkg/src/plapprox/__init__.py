"""Error-certified piecewise linear approximation of expected-min losses.

The expected shortfall-style loss f_X(s) = E[min(s, X)] is concave and, for
a finite discrete X, piecewise linear.  This package partitions a working
range (a, b] into the fewest intervals whose per-interval approximation
error stays within a budget, collapses each interval to its conditional
mean, and returns the resulting piecewise linear function together with an
exact error certificate.

Quick start::

    import plapprox as pla

    rv = pla.normal(0.0, 1.0)
    result = pla.approximate(rv, a=-3.0, b=3.0, eps=0.05, kind="exact")
    result.n_intervals     # 4
    result.total_error     # <= 0.05
    result.pwl(0.7)        # approximate E[min(0.7, X)]
"""

from .analysis import (
    BoundsReport,
    ErrorReport,
    adversarial_N,
    comb_continuous,
    comb_discrete,
    compute_bounds,
    grid_oracle_error,
    guideline,
    interval_error_exact,
    min_partition_bruteforce,
    total_error,
    upper_bound,
)
from .approximate import ApproxResult, approximate
from .estimator import PiecewiseLinearApproximator
from .loss import (
    CanonicalLoss,
    GeneralLossCoeffs,
    eval_general_loss,
    eval_induced_loss,
    eval_loss,
    pointwise_gap,
    reduce_general_loss,
)
from .numerics import (
    DEFAULT_TOLERANCE,
    BracketError,
    NumericError,
    Tolerance,
    bisect,
    integrate,
)
from .partition import (
    BoundKind,
    InducedDiscrete,
    MonotonicityError,
    Partition,
    PiecewiseLinearFn,
    bound_value,
    induce_discrete,
    next_point_continuous,
    next_point_discrete,
    run_partition,
    to_piecewise_linear,
)
from .rv import (
    FULL_LINE,
    ContinuousRV,
    DiscreteLatticeRV,
    EmpiricalDiscreteRV,
    Interval,
    PiecewiseUniformRV,
    RandomVariable,
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

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # numerics
    "Tolerance", "DEFAULT_TOLERANCE", "NumericError", "BracketError",
    "integrate", "bisect",
    # random variables
    "Interval", "FULL_LINE", "RandomVariable", "ContinuousRV",
    "DiscreteLatticeRV", "EmpiricalDiscreteRV", "PiecewiseUniformRV",
    "normal", "exponential", "uniform", "beta", "gamma", "chi_squared",
    "student_t", "logistic", "lognormal", "binomial", "poisson", "geometric",
    "negative_binomial", "empirical", "piecewise_uniform", "from_spec",
    "from_csv",
    # losses
    "eval_loss", "eval_induced_loss", "pointwise_gap", "GeneralLossCoeffs",
    "CanonicalLoss", "reduce_general_loss", "eval_general_loss",
    # partitioning
    "BoundKind", "MonotonicityError", "Partition", "InducedDiscrete",
    "PiecewiseLinearFn", "bound_value", "next_point_continuous",
    "next_point_discrete", "run_partition", "induce_discrete",
    "to_piecewise_linear",
    # analysis
    "ErrorReport", "BoundsReport", "interval_error_exact", "total_error",
    "grid_oracle_error", "min_partition_bruteforce", "upper_bound",
    "guideline", "adversarial_N", "comb_discrete", "comb_continuous",
    "compute_bounds",
    # pipeline
    "ApproxResult", "approximate", "PiecewiseLinearApproximator",
]
