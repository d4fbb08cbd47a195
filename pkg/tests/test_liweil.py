from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from mpmath import mp

from efl import liweil, testfn
from efl.errors import CoefficientsTooShort, OrderTooLarge, UnsupportedFamily
from efl.summation import pairwise_sum_blocked
from efl.zeros import ZeroSet

# closed form 1 + (gamma - log 4pi)/2 at 40 digits, rounded to float
LAMBDA_1 = 0.023095708966121033

# published reference values (Keiper/Li sequence)
LAMBDA_REF = {2: 0.0923457352280, 3: 0.2076389205543, 4: 0.3687904794923}


class TestLaurentCoefficients:
    def test_eta0_is_minus_gamma(self, coeffs20):
        with mp.workdps(40):
            assert abs(coeffs20.eta[0] + mp.euler) < 1e-25

    def test_mu0_both_conventions_reported(self, coeffs20):
        with mp.workdps(40):
            assert abs(coeffs20.mu[0] + mp.log(2 * mp.pi)) < 1e-25
        assert coeffs20.mu_text_convention_mu0 == pytest.approx(
            -math.log(math.pi), abs=1e-15)

    def test_stieltjes_against_mpmath(self, coeffs20):
        mp.dps = 40
        for k in range(11):
            ref = mpmath.stieltjes(k)
            assert abs(coeffs20.stieltjes[k] - ref) < 1e-20

    def test_error_estimates_below_1e9(self, coeffs20):
        for k in range(21):
            assert float(coeffs20.eta_errors[k]) < 1e-9
            assert float(coeffs20.mu_errors[k]) < 1e-9

    def test_eta_mu_consistency_relation(self, coeffs20):
        # derived identity: mu_k = -eta_k - zeta(k+1) (even k >= 2),
        #                   mu_k = -eta_k + (1 - 2^-k) zeta(k+1) (odd k)
        with mp.workdps(40):
            for k in range(2, 21):
                zk1 = mp.zeta(k + 1)
                if k % 2 == 0:
                    rhs = -coeffs20.eta[k] - zk1
                else:
                    rhs = -coeffs20.eta[k] + (1 - mp.mpf(2) ** (-k)) * zk1
                assert abs(coeffs20.mu[k] - rhs) < 1e-20

    def test_order_cap(self):
        with pytest.raises(OrderTooLarge):
            liweil.laurent_coefficients(65)

    def test_cache_returns_same_object(self):
        a = liweil.laurent_coefficients(5)
        b = liweil.laurent_coefficients(5)
        assert a is b


class TestZeroPowerSum:
    def test_k0_closed_form(self, coeffs20):
        z = liweil.zero_power_sum(0, coeffs20)
        assert z.value == pytest.approx(LAMBDA_1, abs=1e-15)
        assert z.difference == 0.0

    def test_k1_value_and_direct_cross_check(self, coeffs20, zeros_1e5):
        z = liweil.zero_power_sum(1, coeffs20)
        assert z.value == pytest.approx(-0.0461543, abs=1e-7)
        rho = zeros_1e5.rhos()
        terms = 2.0 * np.real(1.0 / rho ** 2)
        direct = float(pairwise_sum_blocked(terms))
        # signed density tail of 2 Re(1/rho^2) ~ -2/gamma^2
        T = float(zeros_1e5.ordinates[-1])
        tail = -2.0 * (math.log(T / (2 * math.pi)) + 1) / (2 * math.pi * T)
        assert abs(z.value - (direct + tail)) < 1e-4

    def test_dual_route_agreement(self, coeffs20):
        for k in range(1, 21):
            z = liweil.zero_power_sum(k, coeffs20)
            assert abs(z.difference) < 1e-9

    def test_needs_coefficients(self, coeffs20):
        with pytest.raises(CoefficientsTooShort):
            liweil.zero_power_sum(21, coeffs20)


class TestLiDirect:
    def test_single_zero_by_hand(self):
        g1 = 14.134725142
        zset = ZeroSet(np.array([g1]), "file", True, g1)
        ld = liweil.li_direct(1, zset)
        assert ld.value == pytest.approx(2 * 0.5 / (0.25 + g1 * g1), abs=1e-15)
        assert ld.value == pytest.approx(0.00499899, abs=1e-8)

    def test_n1_full_table(self, zeros_1e5):
        ld = liweil.li_direct(1, zeros_1e5)
        assert abs(ld.corrected - LAMBDA_1) < 1e-4
        assert ld.zero_count == 10 ** 5

    def test_terms_nonnegative_and_cumulative_positive(self, zeros_1e5):
        rho = zeros_1e5.first(5000).rhos()
        for n in (1, 2, 7):
            terms = 2.0 - 2.0 * np.real((1.0 - 1.0 / rho) ** n)
            assert np.all(terms >= 0.0)
            sums = np.cumsum(terms)
            assert np.all(sums > 0.0)
            assert np.all(np.diff(sums) >= 0.0)

    def test_tail_separate_from_value(self, zeros_1e5):
        ld = liweil.li_direct(3, zeros_1e5.first(1000))
        assert ld.tail_correction > 0.0
        assert ld.corrected == ld.value + ld.tail_correction

    def test_order_cap(self, zeros_1e5):
        with pytest.raises(OrderTooLarge):
            liweil.li_direct(51, zeros_1e5.first(100))


class TestLiRoutes:
    def test_seed_value_both_routes(self, coeffs20):
        assert liweil.li_eta(1, coeffs20) == pytest.approx(LAMBDA_1, abs=1e-13)
        assert liweil.li_mu(1, coeffs20) == pytest.approx(LAMBDA_1, abs=1e-13)

    def test_published_values(self, coeffs20):
        for n, ref in LAMBDA_REF.items():
            assert liweil.li_eta(n, coeffs20) == pytest.approx(ref, abs=1e-10)

    def test_dual_routes_match(self, coeffs20):
        for n in (2, 5, 20):
            assert abs(liweil.li_eta(n, coeffs20)
                       - liweil.li_mu(n, coeffs20)) < 1e-10

    def test_routes_match_direct(self, coeffs20, zeros_1e5):
        d10 = liweil.li_direct(10, zeros_1e5)
        assert abs(liweil.li_eta(10, coeffs20) - d10.corrected) < 1e-3
        d20 = liweil.li_direct(20, zeros_1e5)
        assert abs(liweil.li_mu(20, coeffs20) - d20.corrected) < 1e-2

    def test_coefficients_too_short(self, coeffs20):
        with pytest.raises(CoefficientsTooShort):
            liweil.li_eta(22, coeffs20)
        with pytest.raises(CoefficientsTooShort):
            liweil.li_mu(22, coeffs20)

    def test_positivity_through_50(self):
        co = liweil.laurent_coefficients(49)
        values = [liweil.li_eta(n, co) for n in range(1, 51)]
        assert all(v > 0 for v in values)
        # growth sanity: lambda_n rises roughly like (n/2) log n at this scale
        assert values[-1] > values[9] > values[0]

    def test_li_table_rows(self, coeffs20, zeros_1e5):
        rows = liweil.li_table(5, zeros_1e5, coeffs20)
        assert [r["n"] for r in rows] == [1, 2, 3, 4, 5]
        for r in rows:
            assert r["max_disc"] < 1e-3


class TestIdentities:
    def test_alternating_binomial_sum_vanishes(self):
        for n in range(1, 61):
            assert sum((-1) ** k * math.comb(n, k) for k in range(n + 1)) == 0

    def test_odd_denominator_zeta_identity(self):
        # (1 - 2^-k) zeta(k) - 1 = sum_{n>=1} (1 + 2n)^-k, checked against
        # direct summation with a midpoint-rule tail
        with mp.workdps(40):
            for k in range(2, 11):
                N = 10 ** 5
                n = np.arange(1, N + 1, dtype=np.float64)
                partial = float(pairwise_sum_blocked((1 + 2 * n) ** (-float(k))))
                tail = (2 * N + 2.0) ** (1 - k) / (2 * (k - 1))
                lhs = float((1 - mp.mpf(2) ** (-k)) * mp.zeta(k) - 1)
                assert abs(lhs - (partial + tail)) < 1e-12


class TestWeilForm:
    def test_g1_matches_twice_lambda1(self, zeros_1e5):
        rep = liweil.weil_form(testfn.assoc_laguerre_tf(1), zeros_1e5)
        assert abs(rep.lhs_zero_sum - 2 * LAMBDA_1) < 1e-3
        assert abs(rep.lhs_zero_sum + rep.lhs_tail - 2 * LAMBDA_1) < 1e-5

    def test_li_family_vs_li_mu(self, zeros_1e5, coeffs20):
        for n in (1, 4, 10):
            rep = liweil.weil_form(testfn.assoc_laguerre_tf(n), zeros_1e5)
            assert abs(rep.lhs_zero_sum - 2 * liweil.li_mu(n, coeffs20)) < 1e-2

    def test_pairwise_positivity_exact(self, zeros_1e5):
        rep = liweil.weil_form(testfn.assoc_laguerre_tf(7), zeros_1e5.first(3000))
        assert rep.min_pair_term >= 0.0

    def test_lhs_equals_twice_direct_truncation(self, zeros_1e5):
        z = zeros_1e5.first(2000)
        for n in (2, 9):
            rep = liweil.weil_form(testfn.assoc_laguerre_tf(n), z)
            ld = liweil.li_direct(n, z)
            assert rep.li_identity_residual == pytest.approx(
                abs(rep.lhs_zero_sum - 2 * ld.value), abs=0)
            assert rep.li_identity_residual < 1e-10 * max(1.0, abs(rep.lhs_zero_sum))

    def test_rhs_reduction_closes(self, zeros_1e5, coeffs20):
        rep = liweil.weil_form(testfn.assoc_laguerre_tf(3), zeros_1e5)
        assert abs(rep.rhs_total - 2 * liweil.li_mu(3, coeffs20)) < 1e-10
        assert abs(rep.lhs_zero_sum + rep.lhs_tail - rep.rhs_total) < 1e-4

    def test_exponential_family_cross_route(self, zeros_1e4):
        rep = liweil.weil_form(testfn.exp_tf(-1.0), zeros_1e4)
        assert rep.li_identity_residual is None
        assert abs(rep.lhs_zero_sum + rep.lhs_tail - rep.rhs_total) < 1e-3

    def test_unsupported_families(self, zeros_1e4):
        with pytest.raises(UnsupportedFamily):
            liweil.weil_form(testfn.poly_tf(1), zeros_1e4)
        with pytest.raises(UnsupportedFamily):
            liweil.weil_form(testfn.laguerre_tf(3), zeros_1e4)
        with pytest.raises(UnsupportedFamily):
            liweil.weil_form(testfn.exp_tf(0.5), zeros_1e4)
