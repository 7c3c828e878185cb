"""Integer polynomials, root counting mod primes, and family traversal.

The family of degree-d polynomials with coefficients in [-H, H] and positive
leading coefficient is traversed either exhaustively (lexicographic
coefficient order, leading coefficient outermost) or by seeded Monte Carlo
draws from a counter-based generator, so any chunk of draws can be
regenerated independently.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import budgets
from .arith import is_prime_u64, is_squarefree, factorize

# Fixed traversal chunk geometry.  Monte Carlo chunks re-seed a Philox
# stream at counter offset chunk_index * _PHILOX_STRIDE, which no chunk can
# consume, so chunk j is reproducible without generating chunks 0..j-1.
CHUNK_SIZE = 1 << 16
_PHILOX_STRIDE = 1 << 32


@dataclass(frozen=True)
class IntPolynomial:
    """Integer-coefficient polynomial, coeffs = (c0, c1, ..., cd)."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("empty coefficient vector")
        if len(self.coeffs) > 1 and self.coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def height(self):
        return max(abs(c) for c in self.coeffs)

    def __call__(self, m):
        return eval_poly(self, m)

    def in_family(self, H):
        """Membership in the degree-d, height-H family (positive lead)."""
        return self.height <= H and self.coeffs[-1] > 0

    def __str__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*t^{j}" if j else str(c))
        return " + ".join(terms) if terms else "0"


def eval_poly(P, m):
    """Exact P(m) by Horner evaluation (python ints, no overflow)."""
    acc = 0
    for c in reversed(P.coeffs):
        acc = acc * m + c
    return acc


def value_bound(d, H, x):
    """Bound on |P(m)| over the family for |m| <= x: (d+1) * H * x**d."""
    return (d + 1) * H * max(1, x) ** d


def roots_count_mod_prime(P, ell):
    """Number of residues r mod ell with P(r) = 0, by direct enumeration.

    If P vanishes identically mod ell, every residue is a root and the
    count is ell.
    """
    if not is_prime_u64(ell):
        raise ValueError(f"modulus must be prime, got {ell}")
    coeffs = np.array([c % ell for c in P.coeffs], dtype=np.int64)
    r = np.arange(ell, dtype=np.int64)
    acc = np.zeros(ell, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * r + c) % ell
    return int(np.count_nonzero(acc == 0))


def roots_count_mod_squarefree(P, k):
    """Root count mod squarefree k, as a product over primes dividing k."""
    if k < 1:
        raise ValueError(f"modulus must be positive, got {k}")
    if not is_squarefree(k):
        raise ValueError(f"modulus must be squarefree, got {k}")
    out = 1
    for ell, _ in factorize(k):
        out *= roots_count_mod_prime(P, ell)
        if out == 0:
            break
    return out


@dataclass(frozen=True)
class FamilySpec:
    """Traversal description for the degree-d height-H family.

    mode is "exhaustive" or "montecarlo"; Monte Carlo needs sample_count and
    a 64-bit seed.  Exhaustive traversal is refused above the enumeration
    budget.
    """

    d: int
    H: int
    mode: str = "exhaustive"
    sample_count: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"degree must be >= 1, got {self.d}")
        if self.H < 1:
            raise ValueError(f"height must be >= 1, got {self.H}")
        if self.mode not in ("exhaustive", "montecarlo"):
            raise ValueError(f"unknown traversal mode {self.mode!r}")
        if self.mode == "montecarlo" and self.sample_count < 1:
            raise ValueError("montecarlo mode needs sample_count >= 1")

    @property
    def family_size(self):
        """Exact cardinality H * (2H+1)**d of the family."""
        return self.H * (2 * self.H + 1) ** self.d

    @property
    def normalizer(self):
        """The leading-order count 2**d * H**(d+1) used by the averages."""
        return 2**self.d * self.H ** (self.d + 1)

    @property
    def visit_count(self):
        if self.mode == "exhaustive":
            return self.family_size
        return self.sample_count

    def check_budget(self):
        if self.mode == "exhaustive":
            budgets.check("exhaustive family traversal", self.family_size,
                          budgets.family_budget())


def _decode_exhaustive(spec, start, stop):
    """Coefficient rows for exhaustive indices [start, stop).

    Index order: c_d in 1..H outermost, then c_{d-1}, ..., c_0 innermost,
    each low coefficient running -H..H.  Returns an int64 array of shape
    (stop-start, d+1) with columns (c0, ..., cd).
    """
    d, H = spec.d, spec.H
    base = 2 * H + 1
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), d + 1), dtype=np.int64)
    out[:, d] = idx // base**d + 1
    rem = idx % base**d
    for j in range(d - 1, -1, -1):
        out[:, j] = rem // base**j - H
        rem = rem % base**j
    return out


def _draw_montecarlo(spec, chunk_index, count):
    """Seeded coefficient rows for one Monte Carlo chunk."""
    d, H = spec.d, spec.H
    bitgen = np.random.Philox(key=spec.seed)
    bitgen.advance(chunk_index * _PHILOX_STRIDE)
    rng = np.random.Generator(bitgen)
    out = np.empty((count, d + 1), dtype=np.int64)
    out[:, :d] = rng.integers(-H, H + 1, size=(count, d), dtype=np.int64)
    out[:, d] = rng.integers(1, H + 1, size=count, dtype=np.int64)
    return out


def coefficient_chunks(spec, chunk_size=CHUNK_SIZE):
    """Yield (start_index, coeff_rows) over the whole traversal.

    Deterministic chunk geometry independent of consumer; the backbone for
    both the generic visitor and the vectorized moment accumulators.
    """
    spec.check_budget()
    total = spec.visit_count
    for chunk_index, start in enumerate(range(0, total, chunk_size)):
        stop = min(start + chunk_size, total)
        if spec.mode == "exhaustive":
            yield start, _decode_exhaustive(spec, start, stop)
        else:
            yield start, _draw_montecarlo(spec, chunk_index, stop - start)


def iter_family(spec):
    """Yield IntPolynomial values in traversal order."""
    for _, rows in coefficient_chunks(spec):
        for row in rows:
            yield IntPolynomial(tuple(int(c) for c in row))


def traverse_family(spec, visit, init):
    """Fold visit(acc, P) over the traversal, deterministically ordered."""
    acc = init
    for P in iter_family(spec):
        acc = visit(acc, P)
    return acc
