import numpy as np
import pytest

from bhlab.arith import von_mangoldt_table
from bhlab.poly import IntPolynomial


@pytest.fixture(scope="session")
def lam_table_1e6():
    return von_mangoldt_table(10**6)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_polynomial(rng, d, H, positive=False):
    """Uniform draw from the degree-d height-H family.

    positive=True shifts the constant term up so every value on m >= 1
    is positive.
    """
    coeffs = list(rng.integers(-H, H + 1, size=d))
    coeffs.append(int(rng.integers(1, H + 1)))
    if positive:
        coeffs[0] = abs(coeffs[0]) + (d + 1) * H * 20**d + 1
    return IntPolynomial(tuple(int(c) for c in coeffs))
