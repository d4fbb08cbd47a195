from __future__ import annotations

import numpy as np
import pytest

from efl import arith, liweil, zeros
from efl.zetacore import ZetaEvalConfig


@pytest.fixture(scope="session")
def zero_table():
    """The full bundled zero table (1e5 ordinates) or None if absent."""
    path = zeros.bundled_zero_table()
    if path is None:
        return None
    return zeros.load_zeros(path)


@pytest.fixture(scope="session")
def zeros_1e5(zero_table):
    if zero_table is None or len(zero_table) < 10 ** 5:
        pytest.skip("bundled 1e5 zero table not available")
    return zero_table


@pytest.fixture(scope="session")
def zeros_1e4(zeros_1e5):
    return zeros_1e5.first(10 ** 4)


@pytest.fixture(scope="session")
def zeros_2k(zeros_1e5):
    return zeros_1e5.first(2000)


@pytest.fixture(scope="session")
def computed_29():
    return zeros.find_zeros(29, ZetaEvalConfig(working_digits=20))


@pytest.fixture(scope="session")
def sieve_1e6():
    return arith.sieve(10 ** 6)


@pytest.fixture(scope="session")
def sieve_1e7():
    return arith.sieve(10 ** 7)


@pytest.fixture(scope="session")
def coeffs20():
    return liweil.laurent_coefficients(20)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20080914)
