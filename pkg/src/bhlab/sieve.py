"""Bonferroni-truncated sieve weights and Hooley-style sandwich bounds.

The weights are the Mobius function restricted to squarefree products of
fewer than a parity-matched number of primes below the cutoff w: an even
truncation level gives upper weights, an odd level lower weights.  They are
supported on divisors of the primorial of w and vanish from y upward.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .arith import sieve_primes
from .poly import roots_count_mod_prime

_MAX_SUPPORT_PRIMES = 24  # 2**24 subset enumerations; far beyond desk scale


@dataclass(frozen=True)
class SieveWeights:
    """Signed weight table k -> lambda_k on squarefree divisors of P(w)."""

    w: float
    y: float
    parity: str                 # "upper" or "lower"
    level: int                  # retained number-of-prime-factors bound
    table: dict = field(repr=False)

    @property
    def support(self):
        return sorted(self.table)

    def weight(self, k):
        return self.table.get(k, 0)

    def divisor_sum(self, n):
        """Sum of lambda_k over divisors k of n within the support."""
        return sum(lam for k, lam in self.table.items() if n % k == 0)


def truncation_level(w, y, parity):
    """Default retained-factor bound: largest parity-matched m with w**m <= y.

    Capping by w**m <= y guarantees every retained k < y.  When no even
    level fits, upper weights degrade to the bare normalization {1: 1};
    lower weights need at least level 1, i.e. y > w.
    """
    cap = math.floor(math.log(y) / math.log(max(w, 2.0)))
    if parity == "upper":
        return max(0, cap - (cap % 2))
    level = cap if cap % 2 else cap - 1
    if level < 1:
        raise ValueError(
            f"no odd truncation level fits w={w}, y={y}; need y > w")
    return level


def build_brun_weights(w, y, parity, level=None):
    """Bonferroni weights at prime cutoff w and support cutoff y.

    lambda_k = mu(k) for squarefree k composed of primes below w with at
    most `level` prime factors and k < y, else 0.  `level` defaults to the
    parity-matched bound from truncation_level and may be overridden with
    any integer of the right parity.
    """
    if parity not in ("upper", "lower"):
        raise ValueError(f"parity must be 'upper' or 'lower', got {parity!r}")
    if w < 2:
        raise ValueError(f"prime cutoff must be >= 2, got {w}")
    if y < 2:
        raise ValueError(f"support cutoff must be >= 2, got {y}")
    if level is None:
        level = truncation_level(w, y, parity)
    elif level % 2 != (0 if parity == "upper" else 1):
        raise ValueError(f"level {level} has the wrong parity for {parity}")
    primes = sieve_primes(int(math.ceil(w))).below(w)
    if len(primes) > _MAX_SUPPORT_PRIMES:
        raise ValueError(f"prime cutoff w={w} gives an unmanageable support")
    table = {1: 1}
    for r in range(1, min(level, len(primes)) + 1):
        sign = -1 if r % 2 else 1
        for combo in itertools.combinations(primes, r):
            k = math.prod(combo)
            if k < y:
                table[k] = sign
    return SieveWeights(w=w, y=y, parity=parity, level=level, table=table)


class SandwichReport(NamedTuple):
    checked: int
    violations: int
    first_violation: Optional[int]


def sandwich_check(lower, upper, n_max):
    """Verify the divisor-sum sandwich for every n <= n_max.

    Checks  sum_{k|n} lambda_k^-  <=  ind(n)  <=  sum_{k|n} lambda_k^+,
    where ind(n) is 1 when n has no prime factor below w and 0 otherwise.
    On divisors of the primorial of w (the only values the neutraliser
    bounds consume) ind(n) coincides with the indicator of n = 1.
    A violation is reported, not raised.
    """
    if (lower.w, lower.y) != (upper.w, upper.y):
        raise ValueError("weight pair must share the same w and y")
    if lower.parity != "lower" or upper.parity != "upper":
        raise ValueError("pass (lower, upper) weights in that order")
    lo = np.zeros(n_max + 1, dtype=np.int64)
    hi = np.zeros(n_max + 1, dtype=np.int64)
    for k, lam in lower.table.items():
        if k <= n_max:
            lo[k::k] += lam
    for k, lam in upper.table.items():
        if k <= n_max:
            hi[k::k] += lam
    ind = np.ones(n_max + 1, dtype=np.int64)
    for p in sieve_primes(int(math.ceil(lower.w))).below(lower.w):
        ind[p::p] = 0
    bad = np.nonzero((lo[1:] > ind[1:]) | (hi[1:] < ind[1:]))[0] + 1
    return SandwichReport(
        checked=n_max,
        violations=len(bad),
        first_violation=int(bad[0]) if len(bad) else None,
    )


def sieve_sum(weights, h):
    """Weighted sum of the density h over the support.

    h maps primes below w into [0, 1) and is extended multiplicatively to
    the squarefree support.  With the truncation inactive this telescopes
    to the product of (1 - h(l)) over primes below w.
    """
    terms = []
    for k in weights.support:
        lam = weights.table[k]
        val = 1.0
        if k > 1:
            for ell in _prime_factors_in_support(k, weights.w):
                hv = h(ell)
                if not 0.0 <= hv < 1.0:
                    raise ValueError(f"density out of [0,1) at prime {ell}: {hv}")
                val *= hv
        terms.append(lam * val)
    return math.fsum(terms)


def _prime_factors_in_support(k, w):
    # Support values are products of distinct primes below w by
    # construction; trial division by those primes is exact.
    out = []
    for p in sieve_primes(int(math.ceil(w))).below(w):
        if k % p == 0:
            out.append(p)
            k //= p
    assert k == 1
    return out


class NeutralisedBounds(NamedTuple):
    lower: float
    upper: float


def neutralised_bounds(P, z, lower, upper, squared=True):
    """Sandwich bounds for the truncated squarefree density product of P.

    For f(l) = (1 - w_P(l)/l)**2 (or the first power with squared=False)
    and its complement density fhat(l) = 1 - f(l), the weighted sums
    sum_k lambda_k^{+/-} prod_{l|k} fhat(l) bracket the direct product
    f(P(z)-primorial) = prod_{l<z} f(l).  The weights must be built with
    w = z.
    """
    if lower.w != z or upper.w != z:
        raise ValueError("weights must share their prime cutoff with z")
    if lower.y != upper.y or lower.parity != "lower" \
            or upper.parity != "upper":
        raise ValueError("pass (lower, upper) weights built with equal y")
    fhat = {}
    for ell in sieve_primes(int(math.ceil(z))).below(z):
        w_count = roots_count_mod_prime(P, ell)
        if squared:
            fhat[ell] = 2 * w_count / ell - (w_count / ell) ** 2
        else:
            fhat[ell] = w_count / ell

    def weighted(weights):
        terms = []
        for k in weights.support:
            val = 1.0
            for ell in _prime_factors_in_support(k, weights.w):
                val *= fhat[ell]
            terms.append(weights.table[k] * val)
        return math.fsum(terms)

    return NeutralisedBounds(lower=weighted(lower), upper=weighted(upper))


def density_product(w, h):
    """Direct product of (1 - h(l)) over primes below w (telescoping oracle)."""
    acc = np.longdouble(1.0)
    for ell in sieve_primes(int(math.ceil(w))).below(w):
        acc *= 1 - np.longdouble(h(ell))
    return float(acc)


def truncated_density_product(P, z, squared=True):
    """prod_{l<z} (1 - w_P(l)/l)**(2 or 1), the quantity the bounds bracket."""
    acc = np.longdouble(1.0)
    for ell in sieve_primes(int(math.ceil(z))).below(z):
        f = 1 - roots_count_mod_prime(P, ell) / np.longdouble(ell)
        acc *= f * f if squared else f
    return float(acc)
