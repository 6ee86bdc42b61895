"""Shared fixtures.

The full benchmark sweep (14 instances, three budgets, three bound kinds)
takes a few seconds, so it runs once per session and is shared by the
experiment and acceptance tests.
"""

import pytest

from plapprox.experiment import load_golden, run_experiment


@pytest.fixture(scope="session")
def experiment_rows():
    """Every (instance, eps) row of the benchmark, in table order."""
    return run_experiment()


@pytest.fixture(scope="session")
def golden():
    """Reference rows keyed by (instance, eps)."""
    return load_golden()
