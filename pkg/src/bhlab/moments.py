"""Prime-counting sums over polynomial values and the second-moment experiment.

Scalar operations (psi, psi_abs, theta, negative_part) work on a single
polynomial.  The family-level accumulators (second_moment, nondiagonal_term)
run vectorized over fixed-size coefficient chunks with a deterministic merge
order, optionally fanned out over threads.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import budgets
from .arith import (euler_phi, is_prime_u64, sieve_primes, von_mangoldt,
                    von_mangoldt_table)
from .poly import (FamilySpec, coefficient_chunks, eval_poly, value_bound,
                   CHUNK_SIZE)

# Largest von Mangoldt table any family accumulator will build.
_MAX_TABLE = 2 * 10**8


# ---------------------------------------------------------------------------
# scalar sums over one polynomial
# ---------------------------------------------------------------------------

def lambda_terms(P, x, which="nonzero", from_one=True):
    """Per-argument von Mangoldt terms of the m-sums, in ascending m.

    which selects the arguments kept: "positive" (P(m) > 0), "negative"
    (P(m) < 0, evaluated at -P(m)), or "nonzero" (|P(m)|).  from_one picks
    the range 1 <= m <= x; from_one=False starts at m = 2, the literal
    range of the absolute-value sum.
    """
    if which not in ("positive", "negative", "nonzero"):
        raise ValueError(f"unknown term selector {which!r}")
    start = 1 if from_one else 2
    terms = []
    for m in range(start, int(x) + 1):
        v = eval_poly(P, m)
        if which == "positive" and v > 0:
            terms.append(von_mangoldt(v))
        elif which == "negative" and v < 0:
            terms.append(von_mangoldt(-v))
        elif which == "nonzero" and v != 0:
            terms.append(von_mangoldt(abs(v)))
    return terms


def psi(P, x):
    """Sum of Lambda(P(n)) over 1 <= n <= x with P(n) > 0."""
    return math.fsum(lambda_terms(P, x, "positive"))


def psi_abs(P, x, from_one=False):
    """Sum of Lambda(|P(m)|) over the range with P(m) != 0.

    The default range is 1 < m <= x (the literal displayed one); pass
    from_one=True for the 1 <= m <= x variant.
    """
    return math.fsum(lambda_terms(P, x, "nonzero", from_one=from_one))


def negative_part(P, x):
    """Sum of Lambda(-P(m)) over 1 <= m <= x with P(m) < 0."""
    return math.fsum(lambda_terms(P, x, "negative"))


def theta(P, x):
    """Sum of log P(n) over 1 <= n <= x with P(n) prime."""
    terms = []
    for n in range(1, int(x) + 1):
        v = eval_poly(P, n)
        if v > 1 and is_prime_u64(v):
            terms.append(math.log(v))
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# primes in arithmetic progressions
# ---------------------------------------------------------------------------

def ap_error(X, q, b, table=None):
    """Error of the prime-power count in the progression b mod q up to X.

    Sum of Lambda(n) over 0 < n <= X with n = b mod q, minus X/phi(q) when
    gcd(q, b) = 1 (for q = 1 the single class b = 0 counts as the unit).
    """
    if X < 1:
        raise ValueError(f"X must be >= 1, got {X}")
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    X = int(X)
    if table is None:
        budgets.check("progression error sieve", X, budgets.progression_budget())
        table = von_mangoldt_table(X)
    start = b % q
    if start == 0:
        start = q
    total = math.fsum(table[start : X + 1 : q].tolist())
    if math.gcd(q, b) == 1:
        total -= X / euler_phi(q)
    return total


def bv_average(X, Q, table=None):
    """Sum over q <= Q of the worst progression error max_{Y<=X} max_b |E|.

    The inner maximum runs over integer Y <= X and unit classes b mod q.
    Between consecutive progression members the error is linear in Y, so it
    is scanned exactly at the members and the points just before them.
    """
    if X < 1 or Q < 1:
        raise ValueError("X and Q must be >= 1")
    X, Q = int(X), int(Q)
    budgets.check("progression average sieve", X, budgets.progression_budget())
    budgets.check("progression average moduli", Q, math.isqrt(X) + 1)
    if table is None:
        table = von_mangoldt_table(X)
    out = []
    for q in range(1, Q + 1):
        phi_q = euler_phi(q)
        worst = 0.0
        classes = [0] if q == 1 else [b for b in range(1, q)
                                      if math.gcd(b, q) == 1]
        for b in classes:
            start = b if b >= 1 else q
            ns = np.arange(start, X + 1, q, dtype=np.int64)
            if len(ns) == 0:
                worst = max(worst, X / phi_q)
                continue
            cs = np.cumsum(table[ns])
            at_member = np.abs(cs - ns / phi_q)
            before = np.abs(np.concatenate(([0.0], cs[:-1])) - (ns - 1) / phi_q)
            if ns[0] == 1:
                before[0] = 0.0  # no Y >= 1 precedes the first member
            tail = abs(cs[-1] - X / phi_q)
            worst = max(worst, float(at_member.max()),
                        float(before.max()), tail)
        out.append(worst)
    return math.fsum(out)


# ---------------------------------------------------------------------------
# diagonal term
# ---------------------------------------------------------------------------

class DiagonalTerm(NamedTuple):
    value: float
    deviation: float  # (value - 2 H log H) / (H log log H), nan for tiny H


def diagonal_term(N, H, table=None):
    """Sum of Lambda(|c0 + N|)**2 over c0 in [-H, H] with c0 + N != 0.

    Returns the exact sum together with its deviation from the predicted
    main term 2 H log H, scaled by H log log H.
    """
    if H < 1:
        raise ValueError(f"H must be >= 1, got {H}")
    top = abs(N) + H
    if table is None:
        budgets.check("diagonal term sieve", top, _MAX_TABLE)
        table = von_mangoldt_table(top)
    ns = np.abs(np.arange(N - H, N + H + 1, dtype=np.int64))
    vals = table[ns]  # index 0 (the excluded c0 = -N) holds Lambda-table 0
    value = float(np.dot(vals, vals))
    loglog = math.log(math.log(H)) if H > 3 else float("nan")
    deviation = (value - 2 * H * math.log(H)) / (H * loglog)
    return DiagonalTerm(value=value, deviation=deviation)


# ---------------------------------------------------------------------------
# family second moment
# ---------------------------------------------------------------------------

@dataclass
class MomentReport:
    """The second-moment decomposition over one family traversal.

    Raw fields are sums over the visited polynomials of, per polynomial P:
      diag     sum_m Lambda(|P(m)|)**2           (selected psi variant range)
      nondiag  psi_P**2 - diag
      cross    psi_P * S_P(z)
      ssq      S_P(z)**2
      direct   |psi_P - x * S_P(z)|**2
    In exhaustive mode  direct = diag + nondiag - 2x cross + x^2 ssq  up to
    accumulation tolerance.  Normalized views divide by 2^d H^(d+1) (the
    leading-order family count) or by the exact visit count.
    """

    params: dict
    visit_count: int
    family_size: int
    normalizer: int
    raw: dict
    mc_stderr: Optional[float] = None

    @property
    def direct(self):
        return self.raw["direct"]

    def normalized(self, key):
        """Paper-style average: raw sum scaled onto 2^d H^(d+1) polynomials."""
        scale = self.family_size / self.visit_count / self.normalizer
        return self.raw[key] * scale

    def mean(self, key):
        """Exact-cardinality mean (sample mean in Monte Carlo mode)."""
        return self.raw[key] / self.visit_count

    def decomposition_residual(self):
        """Relative defect of direct = diag + nondiag - 2x cross + x^2 ssq."""
        x = self.params["x"]
        combo = (self.raw["diag"] + self.raw["nondiag"]
                 - 2 * x * self.raw["cross"] + x * x * self.raw["ssq"])
        denom = max(abs(self.raw["direct"]), 1e-300)
        return abs(combo - self.raw["direct"]) / denom

    FIELDS = ("diag", "nondiag", "cross", "ssq", "direct")

    def to_dict(self):
        out = dict(self.params)
        out["visit_count"] = self.visit_count
        out["family_size"] = self.family_size
        out["normalizer"] = self.normalizer
        for key in self.FIELDS:
            out[f"raw_{key}"] = self.raw[key]
            out[f"norm_{key}"] = self.normalized(key)
            out[f"mean_{key}"] = self.mean(key)
        out["mc_stderr"] = self.mc_stderr
        return out


def _omega_lookup_tables(d, z):
    """Per-prime flat root-count tables for all primes below z."""
    from .identities import _root_count_table
    tables = {}
    for ell in sieve_primes(int(math.ceil(z))).below(z):
        tables[ell] = _root_count_table(ell, d)
    return tables


def _chunk_stats(rows, x, lam_table, omega_tables, psi_kind, center):
    """Per-chunk unnormalized sums of the five decomposition pieces."""
    n, width = rows.shape
    m = np.arange(1, x + 1, dtype=np.int64)
    vals = np.zeros((n, x), dtype=np.int64)
    for j in range(width - 1, -1, -1):
        vals = vals * m + rows[:, j : j + 1]
    lam = lam_table[np.abs(vals)]
    if psi_kind == "psi":
        lam = np.where(vals > 0, lam, 0.0)
    else:
        lam = np.where(vals != 0, lam, 0.0)
        if psi_kind == "abs":
            lam[:, :1] = 0.0  # literal range starts at m = 2
    psi_vec = lam.sum(axis=1)
    diag_vec = (lam * lam).sum(axis=1)

    if center == "bh":
        series = np.ones(n, dtype=np.float64)
        for ell, table in omega_tables.items():
            key = np.zeros(n, dtype=np.int64)
            for j in range(width - 1, -1, -1):
                key = key * ell + rows[:, j] % ell
            w = table[key]
            series *= (ell - w) / (ell - 1.0)
    else:
        series = np.zeros(n, dtype=np.float64)

    dev = psi_vec - x * series
    direct_vec = dev * dev
    return {
        "diag": float(diag_vec.sum()),
        "nondiag": float((psi_vec * psi_vec - diag_vec).sum()),
        "cross": float((psi_vec * series).sum()),
        "ssq": float((series * series).sum()),
        "direct": float(direct_vec.sum()),
        "direct_sq": float((direct_vec * direct_vec).sum()),
        "count": n,
    }


def _psi_kind(use_abs, abs_from_one):
    if not use_abs:
        return "psi"
    return "abs_from_one" if abs_from_one else "abs"


def second_moment(spec, x, z, center="bh", use_abs=False, abs_from_one=False,
                  threads=1):
    """Family second moment of psi_P(x) - x * S_P(z), fully decomposed.

    Accumulates, per visited polynomial, the selected psi variant, the
    truncated singular series S_P(z), and the five decomposition pieces.
    Monte Carlo mode adds a delete-one jackknife standard error of the
    mean direct term.
    """
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if z <= 1:
        raise ValueError(f"z must exceed 1, got {z}")
    x = int(x)
    bound = value_bound(spec.d, spec.H, x)
    budgets.check("von Mangoldt table for the family moment", bound, _MAX_TABLE)
    lam_table = von_mangoldt_table(max(bound, 1))
    omega_tables = _omega_lookup_tables(spec.d, z) if center == "bh" else {}
    psi_kind = _psi_kind(use_abs, abs_from_one)

    totals = {k: [] for k in
              ("diag", "nondiag", "cross", "ssq", "direct", "direct_sq")}
    count = 0

    def work(item):
        _, rows = item
        return _chunk_stats(rows, x, lam_table, omega_tables, psi_kind, center)

    chunks = coefficient_chunks(spec)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(work, chunks)
            for stats in results:
                for k in totals:
                    totals[k].append(stats[k])
                count += stats["count"]
    else:
        for item in chunks:
            stats = work(item)
            for k in totals:
                totals[k].append(stats[k])
            count += stats["count"]

    raw = {k: math.fsum(totals[k]) for k in MomentReport.FIELDS}
    mc_stderr = None
    if spec.mode == "montecarlo" and count > 1:
        mean = raw["direct"] / count
        ssq = math.fsum(totals["direct_sq"])
        var = max(ssq - count * mean * mean, 0.0) / (count - 1)
        mc_stderr = math.sqrt(var / count)

    params = {
        "d": spec.d, "H": spec.H, "x": x, "z": z, "center": center,
        "psi_variant": psi_kind, "mode": spec.mode,
        "samples": spec.sample_count if spec.mode == "montecarlo" else None,
        "seed": spec.seed if spec.mode == "montecarlo" else None,
        "threads": threads,
    }
    return MomentReport(params=params, visit_count=count,
                        family_size=spec.family_size,
                        normalizer=spec.normalizer, raw=raw,
                        mc_stderr=mc_stderr)


def nondiagonal_term(spec, x, threads=1):
    """Normalized off-diagonal double sum of Lambda(|P(m1)|) Lambda(|P(m2)|).

    Runs over 1 <= m1 != m2 <= x with zero values skipped, averaged with
    the 2^d H^(d+1) normalizer (scaled from the sample in Monte Carlo
    mode).
    """
    report = second_moment(spec, x, z=2, center="none", use_abs=True,
                           abs_from_one=True, threads=threads)
    return report.normalized("nondiag")
