"""Exact averages over residue-class polynomial families.

Everything here enumerates polynomials over Z/kZ of bounded degree and
verifies multiplicativity / closed forms by comparing a brute-force side
against a product side.  Left sides use exact rational arithmetic.
"""

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import budgets
from .arith import factorize, is_prime_u64, is_squarefree


@lru_cache(maxsize=64)
def _root_count_table(ell, d):
    """Flat table T of length ell**(d+1) with T[key] = root count mod ell.

    key encodes residue coefficients (c0, ..., cd) mod ell in mixed radix,
    c0 least significant.  The identically-zero polynomial gets count ell
    (every residue is a root), which the enumeration produces naturally.
    """
    size = ell ** (d + 1)
    idx = np.arange(size, dtype=np.int64)
    counts = np.zeros(size, dtype=np.int64)
    for r in range(ell):
        val = np.zeros(size, dtype=np.int64)
        for j in range(d, -1, -1):
            digit = idx // ell**j % ell
            val = (val * r + digit) % ell
        counts += val == 0
    return counts


def residue_root_count(coeffs, ell):
    """Root count mod ell of the residue polynomial with these coefficients."""
    if not is_prime_u64(ell):
        raise ValueError(f"modulus must be prime, got {ell}")
    key = 0
    for c in reversed(tuple(coeffs)):
        key = key * ell + c % ell
    return int(_root_count_table(ell, len(tuple(coeffs)) - 1)[key])


class OmegaMoment(NamedTuple):
    enumerated: int
    closed_form: int


def omega_moment(ell, d, j):
    """j-th moment of the root count over all residue polynomials mod ell.

    Brute-force sum of root_count**j over the ell**(d+1) residue
    polynomials of degree <= d, next to the closed forms ell**(d+1) (j=1)
    and ell**d * (2*ell - 1) (j=2).
    """
    if not is_prime_u64(ell):
        raise ValueError(f"modulus must be prime, got {ell}")
    if j not in (1, 2):
        raise ValueError(f"moment order must be 1 or 2, got {j}")
    budgets.check("residue moment enumeration", ell ** (d + 1),
                  budgets.residue_budget())
    counts = _root_count_table(ell, d)
    enumerated = int(np.sum(counts**j))
    closed = ell ** (d + 1) if j == 1 else ell**d * (2 * ell - 1)
    return OmegaMoment(enumerated=enumerated, closed_form=closed)


class AveragePair(NamedTuple):
    direct: object
    product: object


def multiplicative_average(g, k, d):
    """Average of a per-prime local factor over residue polynomials mod k.

    G(k) = sum over P0 in (Z/kZ)[t], deg <= d, of prod_{l | k} g(P0 mod l, l),
    computed two ways: by direct enumeration mod k (no Chinese remainder
    shortcut) and as the product of the single-prime sums G(l).  Both are
    returned so the multiplicativity claim is genuinely tested.

    g takes (coeff tuple reduced mod l, l) and may return any numeric type
    (Fraction included); sums stay in that type.
    """
    if k < 1:
        raise ValueError(f"modulus must be positive, got {k}")
    if not is_squarefree(k):
        raise ValueError(f"modulus must be squarefree, got {k}")
    budgets.check("residue average enumeration", k ** (d + 1),
                  budgets.residue_budget())
    primes = [ell for ell, _ in factorize(k)] if k > 1 else []

    direct = 0
    for coeffs in itertools.product(range(k), repeat=d + 1):
        term = 1
        for ell in primes:
            term *= g(tuple(c % ell for c in coeffs), ell)
        direct += term
    if k == 1:
        direct = 1  # single constant class, empty product

    product = 1
    for ell in primes:
        local = 0
        for coeffs in itertools.product(range(ell), repeat=d + 1):
            local += g(coeffs, ell)
        product *= local
    return AveragePair(direct=direct, product=product)


class FactorSumPair(NamedTuple):
    enumerated: Fraction
    closed_form: Fraction


def squared_factor_sum(k, d):
    """Both sides of the squared-density average over residue polynomials.

    Left: sum over P0 mod k of prod_{l|k} (2*w/l - w**2/l**2) with
    w = root count of P0 mod l, in exact rationals.  Right: the closed form
    prod_{l|k} (2*l**d - 2*l**(d-1) + l**(d-2)).
    """
    if k < 1:
        raise ValueError(f"modulus must be positive, got {k}")
    if not is_squarefree(k):
        raise ValueError(f"modulus must be squarefree, got {k}")
    budgets.check("residue squared-factor enumeration", k ** (d + 1),
                  budgets.residue_budget())
    primes = [ell for ell, _ in factorize(k)] if k > 1 else []

    enumerated = Fraction(0)
    for coeffs in itertools.product(range(k), repeat=d + 1):
        term = Fraction(1)
        for ell in primes:
            w = residue_root_count(tuple(c % ell for c in coeffs), ell)
            term *= Fraction(2 * w, ell) - Fraction(w * w, ell * ell)
        enumerated += term
    if k == 1:
        enumerated = Fraction(1)

    closed = Fraction(1)
    for ell in primes:
        closed *= (2 * Fraction(ell) ** d - 2 * Fraction(ell) ** (d - 1)
                   + Fraction(ell) ** (d - 2))
    return FactorSumPair(enumerated=enumerated, closed_form=closed)
