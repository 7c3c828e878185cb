import math

import pytest

from bhlab.arith import mobius, primorial, sieve_primes
from bhlab.poly import IntPolynomial
from bhlab.sieve import (build_brun_weights, density_product,
                         neutralised_bounds, sandwich_check, sieve_sum,
                         truncated_density_product, truncation_level)
from conftest import random_polynomial

DENSITIES = {
    "1/l": lambda l: 1 / l,
    "(l-1)/l^2": lambda l: (l - 1) / l**2,
    "(2l^2-2l+1)/l^3": lambda l: (2 * l * l - 2 * l + 1) / l**3,
}


class TestBuild:
    def test_full_moebius_example(self):
        w = build_brun_weights(4, 100, "upper")
        assert w.table == {1: 1, 2: -1, 3: -1, 6: 1}

    def test_odd_truncation_example(self):
        w = build_brun_weights(4, 100, "lower", level=1)
        assert w.table == {1: 1, 2: -1, 3: -1}
        assert w.weight(6) == 0

    def test_normalization(self):
        for parity in ("upper", "lower"):
            assert build_brun_weights(10, 50, parity).weight(1) == 1

    def test_weight_invariants(self):
        for w_cut in (6, 12, 20):
            for y in (50, 1e3, 1e5):
                for parity in ("upper", "lower"):
                    weights = build_brun_weights(w_cut, y, parity)
                    prim = primorial(w_cut)
                    assert weights.weight(1) == 1
                    for k, lam in weights.table.items():
                        assert abs(lam) <= 1
                        assert k < y
                        assert mobius(k) != 0
                        assert prim % k == 0
                        assert lam == mobius(k)

    def test_level_cap(self):
        # w**m <= y keeps every retained product below y
        assert truncation_level(20, 1e3, "upper") == 2
        assert truncation_level(20, 1e3, "lower") == 1
        assert truncation_level(20, 1e5, "lower") == 3
        # degenerate upper: bare normalization
        assert build_brun_weights(20, 21, "upper").table == {1: 1}
        with pytest.raises(ValueError):
            build_brun_weights(20, 19, "lower")

    def test_validation(self):
        with pytest.raises(ValueError):
            build_brun_weights(1, 100, "upper")
        with pytest.raises(ValueError):
            build_brun_weights(4, 1, "upper")
        with pytest.raises(ValueError):
            build_brun_weights(4, 100, "sideways")
        with pytest.raises(ValueError):
            build_brun_weights(4, 100, "upper", level=3)


class TestSandwich:
    def test_divisor_sums_at_small_n(self):
        upper = build_brun_weights(4, 100, "upper")
        lower = build_brun_weights(4, 100, "lower", level=1)
        assert lower.divisor_sum(1) == upper.divisor_sum(1) == 1
        assert lower.divisor_sum(6) == -1
        assert upper.divisor_sum(6) == 0

    def test_grid_has_no_violations(self):
        for w in (6, 12, 20):
            for y in (50, 1e3, 1e5):
                lower = build_brun_weights(w, y, "lower")
                upper = build_brun_weights(w, y, "upper")
                rep = sandwich_check(lower, upper, 10**4)
                assert rep.violations == 0, (w, y, rep)

    def test_matches_direct_divisor_scan(self):
        lower = build_brun_weights(10, 1e3, "lower")
        upper = build_brun_weights(10, 1e3, "upper")
        rep = sandwich_check(lower, upper, 500)
        primes = sieve_primes(10).below(10)
        for n in range(1, 501):
            ind = int(all(n % p for p in primes))
            assert lower.divisor_sum(n) <= ind <= upper.divisor_sum(n)
        assert rep.violations == 0

    def test_detects_a_broken_table(self):
        lower = build_brun_weights(6, 100, "lower")
        upper = build_brun_weights(6, 100, "upper")
        broken = dict(lower.table)
        broken[2] = 1  # wrong sign
        from dataclasses import replace
        rep = sandwich_check(replace(lower, table=broken), upper, 100)
        assert rep.violations > 0
        assert rep.first_violation == 2

    def test_pair_validation(self):
        lower = build_brun_weights(6, 100, "lower")
        upper = build_brun_weights(6, 200, "upper")
        with pytest.raises(ValueError):
            sandwich_check(lower, upper, 100)
        with pytest.raises(ValueError):
            sandwich_check(build_brun_weights(6, 100, "upper"),
                           build_brun_weights(6, 100, "upper"), 100)


class TestSieveSum:
    def test_zero_density(self):
        w = build_brun_weights(12, 1e5, "upper")
        assert sieve_sum(w, lambda l: 0.0) == 1.0

    def test_full_moebius_telescopes(self):
        w = build_brun_weights(4, 100, "upper")
        assert sieve_sum(w, lambda l: 1 / l) == pytest.approx(1 / 3, rel=1e-15)

    def test_inactive_truncation_matches_product(self):
        for w_cut in (6, 12, 20):
            weights = build_brun_weights(w_cut, float(w_cut) ** 26, "upper")
            for h in DENSITIES.values():
                got = sieve_sum(weights, h)
                want = density_product(w_cut, h)
                assert got == pytest.approx(want, rel=1e-12)

    def test_active_truncation_tolerance(self):
        # heuristic error scale exp(-log y / log w)
        w_cut = 20.0
        weights = build_brun_weights(w_cut, w_cut**6, "upper")
        h = DENSITIES["(2l^2-2l+1)/l^3"]
        got = sieve_sum(weights, h)
        want = density_product(w_cut, h)
        assert abs(got - want) <= 0.5 * abs(want)

    def test_density_range_validation(self):
        w = build_brun_weights(6, 100, "upper")
        with pytest.raises(ValueError):
            sieve_sum(w, lambda l: 1.5)


class TestNeutralisedBounds:
    def test_empty_prime_set(self):
        P = IntPolynomial((1, 0, 1))
        lower = build_brun_weights(2, 100, "lower")
        upper = build_brun_weights(2, 100, "upper")
        got = neutralised_bounds(P, 2, lower, upper)
        assert got.lower == got.upper == 1.0

    def test_full_moebius_collapses(self):
        P = IntPolynomial((1, 0, 1))
        lower = build_brun_weights(6, 1e6, "lower")
        upper = build_brun_weights(6, 1e6, "upper")
        got = neutralised_bounds(P, 6, lower, upper)
        assert got.lower == pytest.approx(0.09, rel=1e-12)
        assert got.upper == pytest.approx(0.09, rel=1e-12)

    @pytest.mark.parametrize("squared", [True, False])
    def test_random_brackets(self, rng, squared):
        for _ in range(100):
            P = random_polynomial(rng, 2, 50)
            z = float(rng.choice([3, 5, 8, 12, 20]))
            lower = build_brun_weights(z, 1e3, "lower")
            upper = build_brun_weights(z, 1e3, "upper")
            got = neutralised_bounds(P, z, lower, upper, squared=squared)
            direct = truncated_density_product(P, z, squared=squared)
            slack = 1e-12
            assert got.lower <= direct + slack
            assert direct <= got.upper + slack

    def test_cutoff_mismatch(self):
        P = IntPolynomial((1, 0, 1))
        lower = build_brun_weights(6, 100, "lower")
        upper = build_brun_weights(6, 100, "upper")
        with pytest.raises(ValueError):
            neutralised_bounds(P, 12, lower, upper)


class TestMertensCondition:
    def test_probe_for_kappa_two_density(self):
        # empirical form of the sieve's density growth condition
        h = DENSITIES["(2l^2-2l+1)/l^3"]
        primes = sieve_primes(10**4).below(10**4 + 1)
        grid = [2, 3, 5, 10, 30, 100, 300, 1000, 3000, 10**4]
        for i, y1 in enumerate(grid):
            for y2 in grid[i + 1:]:
                prod = 1.0
                for ell in primes:
                    if y1 <= ell < y2:
                        prod *= 1 - h(ell)
                ratio = (1 / prod) / (math.log(y2) / math.log(y1)) ** 2
                assert ratio <= 1 + 10 / math.log(y1), (y1, y2)
