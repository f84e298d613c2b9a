"""
Shared fixtures and brute-force oracles for the test suite.
"""

import numpy as np
import pytest

from src.empirical_copula import EmpiricalCopula, RankMatrix, Sample
from src.utils import configure_logger


@pytest.fixture(autouse=True)
def quiet_logger():
    """Fresh process-wide logger per test (warnings on stderr)."""
    configure_logger(level="WARNING")
    yield


@pytest.fixture
def hand_ranks():
    """n = 3 with observations (1,1), (2,3), (3,2)."""
    return RankMatrix([1, 2, 3], [1, 3, 2])


@pytest.fixture
def hand_ec(hand_ranks):
    return EmpiricalCopula(hand_ranks)


@pytest.fixture
def comonotone_sample():
    x = np.linspace(0.1, 5.0, 200)
    return Sample.from_columns(x, x)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_ec(n, seed):
    """Empirical copula of a random permutation pair."""
    gen = np.random.default_rng(seed)
    return EmpiricalCopula(RankMatrix(gen.permutation(n) + 1, gen.permutation(n) + 1))


def brute_count(ec, i, j):
    """#{k : R_k1 <= i, R_k2 <= j} by direct summation."""
    return int(np.sum((ec.r1 <= i) & (ec.r2 <= j)))


def brute_cn(ec, u1, u2):
    """C_n(u1, u2) by the O(n) indicator sum."""
    n = ec.n
    i = int(np.ceil(n * u1 - 1e-9)) if u1 > 0 else 0
    j = int(np.ceil(n * u2 - 1e-9)) if u2 > 0 else 0
    return brute_count(ec, min(i, n), min(j, n)) / n
