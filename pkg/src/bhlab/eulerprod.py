"""Truncated singular-series products and totient partial sums.

Products accumulate factor by factor in ascending prime order in extended
(80-bit) precision; sums use exact compensated summation (math.fsum).
"""

import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .arith import phi_table, sieve_primes
from .poly import roots_count_mod_prime

# Truncation standing in for the full prime product in reference values.
FULL_PRODUCT_Z = 10**5


@lru_cache(maxsize=8)
def _primes_below(z):
    return tuple(sieve_primes(int(math.ceil(z)) + 1).below(z))


def truncated_bh_constant(P, z):
    """Truncated singular series of P at cutoff z.

    Product over primes l < z of (1 - 1/l)^(-1) * (1 - w_P(l)/l), where
    w_P(l) counts roots of P mod l.  Zero as soon as some prime has every
    residue as a root.
    """
    if z <= 1:
        raise ValueError(f"cutoff must exceed 1, got {z}")
    acc = np.longdouble(1.0)
    for ell in _primes_below(z):
        w = roots_count_mod_prime(P, ell)
        if w == ell:
            return 0.0
        acc *= np.longdouble(ell - w) / np.longdouble(ell - 1)
    return float(acc)


def singular_factor(P, ell):
    """Single prime factor (1 - 1/l)^(-1) (1 - w_P(l)/l) of the product."""
    w = roots_count_mod_prime(P, ell)
    return (ell - w) / (ell - 1)


def reference_product(z):
    """Product over primes l < z of (1 + 1/(l(l-1))).

    The z -> infinity limit is zeta(2)zeta(3)/zeta(6); that identity is used
    only as a test oracle.
    """
    if z <= 1:
        raise ValueError(f"cutoff must exceed 1, got {z}")
    acc = np.longdouble(1.0)
    for ell in _primes_below(z):
        acc *= 1 + np.longdouble(1.0) / (np.longdouble(ell) * (ell - 1))
    return float(acc)


@lru_cache(maxsize=1)
def full_reference_product():
    """reference_product at the standing full-product truncation."""
    return reference_product(FULL_PRODUCT_Z)


class TotientSums(NamedTuple):
    s1: float        # sum_{t<=x} t/phi(t)
    s2: float        # sum_{t<=x} t^2/phi(t)
    s1_main: float   # predicted main term x * C
    s2_main: float   # predicted main term (x^2/2) * C


def totient_ratio_sums(x):
    """Partial sums of t/phi(t) and t^2/phi(t), with predicted main terms.

    The terms are exact float ratios of exact integers, combined with
    compensated summation; the predicted mains use the full-product
    surrogate constant C.
    """
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    phi = phi_table(x).astype(np.float64)
    t = np.arange(x + 1, dtype=np.float64)
    ratio = np.divide(t[1:], phi[1:])
    s1 = math.fsum(ratio.tolist())
    s2 = math.fsum((t[1:] * ratio).tolist())
    c = full_reference_product()
    return TotientSums(s1=s1, s2=s2, s1_main=x * c, s2_main=x * x / 2 * c)


def nondiagonal_phi_sum(x):
    """Double sum of (m2-m1)/phi(m2-m1) over 1 <= m1 < m2 <= x.

    Collapsed over the gap t = m2 - m1, which occurs x - t times:
    sum_{t<x} (x-t) * t/phi(t).  Returns 0 for x < 2.
    """
    if x < 2:
        return 0.0
    phi = phi_table(x - 1).astype(np.float64)
    t = np.arange(x, dtype=np.float64)
    terms = (x - t[1:]) * t[1:] / phi[1:]
    return math.fsum(terms.tolist())
