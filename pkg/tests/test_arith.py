from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from mpmath import mp

from efl import arith
from efl.errors import DigestMismatch, LimitTooLarge, ParseError, TableTooSmall
from efl.testfn import exp_tf, poly_tf
from efl.zetacore import derivatives_at, neg_zeta_log_deriv

PRIMES_TO_100 = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                 59, 61, 67, 71, 73, 79, 83, 89, 97]


def lambda_trial_division(n: int) -> float:
    """Independent slow implementation: repeated division by the smallest
    factor, prime-power shape check."""
    if n < 2:
        return 0.0
    p = None
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            p = d
            break
    if p is None:
        return math.log(n)
    while n % p == 0:
        n //= p
    return math.log(p) if n == 1 else 0.0


class TestSieve:
    def test_first_ten_by_hand(self):
        t = arith.sieve(10)
        expected = [0.0, math.log(2), math.log(3), math.log(2), math.log(5),
                    0.0, math.log(7), math.log(2), math.log(3), 0.0]
        assert np.allclose(t.weights[1:], expected, rtol=0, atol=0)

    def test_limit_one(self):
        t = arith.sieve(1)
        assert t.limit == 1 and t.weights[1] == 0.0

    def test_lambda_one_is_zero(self, sieve_1e6):
        assert sieve_1e6.weights[1] == 0.0

    def test_psi_100_vs_hand_enumeration(self, sieve_1e6):
        acc = 0.0
        for p in PRIMES_TO_100:
            pk = p
            while pk <= 100:
                acc += math.log(p)
                pk *= p
        assert abs(arith.psi_arith(100, sieve_1e6) - acc) < 1e-10
        assert abs(acc - 94.0453112293) < 1e-9

    def test_agrees_with_trial_division_exactly(self, sieve_1e6):
        # bit-identical agreement of the two implementations on all n <= 1e5
        mismatches = [
            n for n in range(1, 10 ** 5 + 1)
            if sieve_1e6.weights[n] != lambda_trial_division(n)
        ]
        assert mismatches == []

    def test_equal_prime_powers_share_identical_floats(self, sieve_1e6):
        # log q computed once per prime: all powers carry the same bits
        assert sieve_1e6.weights[2] == sieve_1e6.weights[1024]
        assert sieve_1e6.weights[3] == sieve_1e6.weights[3 ** 12]

    def test_limit_too_large(self):
        with pytest.raises(LimitTooLarge):
            arith.sieve(10 ** 9)
        with pytest.raises(LimitTooLarge):
            arith.sieve(10 ** 6, memory_budget=10 ** 5)


class TestPsi:
    def test_below_two_is_zero(self, sieve_1e6):
        assert arith.psi_arith(1.5, sieve_1e6) == 0.0
        assert arith.psi_arith(0.0, sieve_1e6) == 0.0

    def test_ten_and_a_half(self, sieve_1e6):
        expected = 3 * math.log(2) + 2 * math.log(3) + math.log(5) + math.log(7)
        assert abs(arith.psi_arith(10.5, sieve_1e6) - expected) < 1e-12
        assert abs(expected - 7.8320141805) < 1e-9

    def test_million_close_to_million(self, sieve_1e6):
        assert abs(arith.psi_arith(10 ** 6, sieve_1e6) - 10 ** 6) < 1350

    def test_monotone_with_jumps_at_prime_powers(self, sieve_1e6):
        vals = [arith.psi_arith(x, sieve_1e6) for x in range(1, 200)]
        diffs = np.diff(vals)
        assert np.all(diffs >= 0)
        for n in range(2, 199):
            jump = vals[n - 1] - vals[n - 2]
            assert jump == pytest.approx(lambda_trial_division(n), abs=1e-12)

    def test_beyond_table_raises(self, sieve_1e6):
        with pytest.raises(TableTooSmall):
            arith.psi_arith(10 ** 6 + 1, sieve_1e6)

    def test_psi_full_equals_psi_at_limit(self, sieve_1e6):
        assert sieve_1e6.psi_full() == arith.psi_arith(10 ** 6, sieve_1e6)


class TestAtomicDensity:
    def test_from_table_invariants(self, sieve_1e6):
        d = arith.AtomicDensity.from_table(arith.sieve(100))
        assert np.all(np.diff(d.locations) > 0)
        assert np.all(d.weights > 0)
        # the atom at log 8 carries log 2
        i = int(np.argmin(np.abs(d.locations - math.log(8))))
        assert d.weights[i] == math.log(2)

    def test_rejects_bad_atoms(self):
        with pytest.raises(ValueError):
            arith.AtomicDensity(np.array([1.0, 1.0]), np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            arith.AtomicDensity(np.array([1.0, 2.0]), np.array([1.0, -1.0]))


class TestPrimeExpectation:
    def test_constant_weight_matches_log_derivative(self, sieve_1e7):
        pe = arith.prime_expectation(poly_tf(0), 2.0, sieve_1e7)
        assert not pe.formal_divergent
        ref = complex(neg_zeta_log_deriv(2))
        assert abs(pe.corrected - ref) < 1e-7

    def test_linear_weight_matches_contour_derivative(self, sieve_1e7):
        pe = arith.prime_expectation(poly_tf(1), 2.0, sieve_1e7)
        c1 = derivatives_at(2, 1)[1][0]  # f~'(2)/1!
        assert abs(pe.corrected - complex(-c1)) < 1e-6

    def test_divergent_flagged_not_raised(self, sieve_1e6):
        pe = arith.prime_expectation(poly_tf(0), 0.5, sieve_1e6)
        assert pe.formal_divergent
        assert pe.tail_estimate == 0j
        assert pe.value.real > 0

    def test_decaying_exponential_converges_below_re_one(self, sieve_1e6):
        # abscissa -2: convergent at s = 0.5 > 1 - 2
        pe = arith.prime_expectation(exp_tf(-2.0), 0.5, sieve_1e6)
        assert not pe.formal_divergent

    @pytest.mark.parametrize("N", [10 ** 4, 10 ** 5, 10 ** 6])
    @pytest.mark.parametrize("s", [1.5, 2.0, 3.0])
    def test_truncation_within_documented_bound(self, sieve_1e6, N, s):
        # documented crude bound: 4 N^(1-s)/(s-1) dominates the true tail
        table = arith.sieve(N)
        pe = arith.prime_expectation(poly_tf(0), s, table)
        ref = complex(neg_zeta_log_deriv(s))
        bound = 4.0 * N ** (1 - s) / (s - 1)
        assert abs(pe.value - ref) <= bound
        assert abs(pe.corrected - ref) <= 0.05 * bound + 1e-9


class TestEtaLimitPartial:
    def test_two_term_hand_value(self, sieve_1e6):
        # sum at x = 2 is Lambda(2)/2; bracket subtracts log 2
        expected = math.log(2) / 2 - math.log(2)
        assert arith.eta_limit_partial(0, 2.0, sieve_1e6) == pytest.approx(
            expected, abs=1e-15)

    def test_k0_converges_to_minus_gamma(self, sieve_1e7):
        v = arith.eta_limit_partial(0, 10 ** 7, sieve_1e7)
        with mp.workdps(30):
            assert abs(v + float(mp.euler)) < 0.01

    def test_k1_matches_contour_eta1(self, sieve_1e7, coeffs20):
        v = arith.eta_limit_partial(1, 10 ** 7, sieve_1e7)
        # limit is (-1)^1 1! eta_1
        assert abs(v - (-float(coeffs20.eta[1]))) < 0.05

    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_cauchy_like_shrinkage(self, sieve_1e6, k):
        def val(x):
            return arith.eta_limit_partial(k, x, sieve_1e6)

        d1 = abs(val(2e4) - val(1e4))
        d2 = abs(val(2e5) - val(1e5))
        assert d2 < d1

    def test_beyond_table(self, sieve_1e6):
        with pytest.raises(TableTooSmall):
            arith.eta_limit_partial(0, 2 * 10 ** 6, sieve_1e6)


class TestStieltjesPartial:
    def test_x_one_single_term(self):
        assert arith.stieltjes_partial(0, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_k0_with_euler_maclaurin_correction(self):
        x = 10 ** 6
        corrected = arith.stieltjes_partial(0, x) - 1 / (2 * x) + 1 / (12 * x ** 2)
        with mp.workdps(30):
            assert abs(corrected - float(mp.euler)) < 1e-6

    def test_k1_matches_contour_gamma1(self, coeffs20):
        v = arith.stieltjes_partial(1, 10 ** 6)
        assert abs(v - float(coeffs20.stieltjes[1])) < 1e-4


class TestBinaryCache:
    def test_roundtrip(self, tmp_path):
        t = arith.sieve(5000)
        p = tmp_path / "table.vmt"
        arith.save_table(t, p)
        loaded = arith.load_table(p)
        assert loaded.limit == t.limit
        assert np.array_equal(loaded.weights, t.weights)

    def test_magic_bytes(self, tmp_path):
        p = tmp_path / "bad.vmt"
        p.write_bytes(b"NOPE" + b"\x00" * 16)
        with pytest.raises(ParseError):
            arith.load_table(p)

    def test_truncated_body(self, tmp_path):
        t = arith.sieve(100)
        p = tmp_path / "trunc.vmt"
        arith.save_table(t, p)
        raw = p.read_bytes()
        p.write_bytes(raw[:-8])
        with pytest.raises(ParseError):
            arith.load_table(p)

    def test_corrupted_weights_detected(self, tmp_path):
        t = arith.sieve(5000)
        p = tmp_path / "corrupt.vmt"
        arith.save_table(t, p)
        raw = bytearray(p.read_bytes())
        # exponent byte of weights[16] = log 2 (offset 12 + 15*8 + 7)
        raw[12 + 15 * 8 + 7] ^= 0x10
        p.write_bytes(bytes(raw))
        with pytest.raises(DigestMismatch):
            arith.load_table(p)
