from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from efl import testfn as tf
from efl.errors import OrderTooLarge, PoleInput, TimeDomainUndefined


class TestPolyFamily:
    def test_transform_values_by_hand(self):
        assert tf.poly_tf(0).transform(2.0) == pytest.approx(0.5, abs=0)
        assert tf.poly_tf(3).transform(2.0) == pytest.approx(0.375, abs=1e-16)

    def test_value_at_zero(self):
        assert tf.poly_tf(0).value_at_zero == 1.0
        assert tf.poly_tf(4).value_at_zero == 0.0
        assert tf.poly_tf(4)(0.0) == 0.0

    def test_order_guard(self):
        with pytest.raises(OrderTooLarge):
            tf.poly_tf(61)

    def test_quadrature_invariant(self):
        assert tf.transform_fidelity(tf.poly_tf(2), samples=6) < 1e-8


class TestExpFamily:
    def test_transform_at_zero(self):
        assert tf.exp_tf(-1.0).transform(0.0) == pytest.approx(1.0, abs=0)

    def test_rate_zero_reduces_to_constant(self):
        e0 = tf.exp_tf(0.0)
        p0 = tf.poly_tf(0)
        for s in (0.5 + 2j, 3.0, 1.0 - 4j):
            assert e0.transform(s) == p0.transform(s)
        assert e0.growth == "polynomial"

    def test_quadrature_oracle(self):
        g = tf.exp_tf(-2.0)
        q = tf.laplace_transform_quadrature(g, 1.0)
        assert abs(q - 1.0 / 3.0) < 1e-10

    def test_growth_tags(self):
        assert tf.exp_tf(-1.0).growth == "decaying"
        assert tf.exp_tf(0.7).growth == "exponential"


class TestLaguerre:
    def test_order_zero_is_one(self):
        L0 = tf.laguerre_tf(0)
        assert L0(3.7) == 1.0
        assert L0.transform(2.0) == pytest.approx(0.5, abs=0)

    def test_order_one_by_hand(self):
        L1 = tf.laguerre_tf(1)
        assert L1(0.3) == pytest.approx(0.7, abs=1e-15)
        assert L1.transform(2.0) == pytest.approx(0.25, abs=1e-16)

    def test_transform_matches_coefficient_expansion(self):
        # term-by-term transform of the expanded polynomial
        n, s = 5, 1.7
        g = tf.laguerre_tf(n)
        term_sum = sum(
            c * math.factorial(k) / s ** (k + 1)
            for k, c in enumerate(g.poly_coeffs)
        )
        assert abs(g.transform(s) - term_sum) < 1e-12

    def test_recurrence_identity_production_evaluator(self):
        # (n+1) L_(n+1) = (2n+1-t) L_n - n L_(n-1) at 20 sample points
        t = np.linspace(0.0, 10.0, 20)
        for n in range(1, 30):
            lhs = (n + 1) * tf.laguerre_time_recurrence(n + 1, t)
            rhs = (2 * n + 1 - t) * tf.laguerre_time_recurrence(n, t) \
                - n * tf.laguerre_time_recurrence(n - 1, t)
            assert np.max(np.abs(lhs - rhs)) < 1e-10

    def test_binomial_oracle_low_orders(self):
        t = np.linspace(0.0, 10.0, 11)
        for n in range(0, 13):
            d = np.abs(tf.laguerre_time_recurrence(n, t)
                       - tf.laguerre_time_binomial(n, t))
            assert np.max(d) < 1e-9

    def test_quadrature_invariant(self):
        assert tf.transform_fidelity(tf.laguerre_tf(5), samples=6) < 1e-8


class TestAssocLaguerre:
    def test_n1_is_constant_one(self):
        g1 = tf.assoc_laguerre_tf(1)
        assert g1(2.2) == 1.0
        assert g1.transform(2.0) == pytest.approx(0.5, abs=0)
        assert g1.value_at_zero == 1.0

    def test_n2_by_hand(self):
        g2 = tf.assoc_laguerre_tf(2)
        assert g2.transform(2.0) == pytest.approx(0.75, abs=1e-16)
        assert g2.value_at_zero == 2.0

    def test_time_domain_is_sum_of_laguerre(self):
        t = np.linspace(0.0, 8.0, 9)
        for n in (1, 3, 7, 25):
            expected = sum(tf.laguerre_time_recurrence(k, t) for k in range(n))
            assert np.max(np.abs(tf.assoc_laguerre_tf(n)(t) - expected)) < 1e-9

    def test_geometric_form_agreement(self, rng):
        for n in (1, 4, 9):
            g = tf.assoc_laguerre_tf(n)
            for _ in range(50):
                s = complex(4 * (rng.random() - 0.5), 4 * (rng.random() - 0.5))
                if abs(s) < 1e-3:
                    continue
                geo = sum((1 - 1 / s) ** k for k in range(n)) / s
                assert abs(g.transform(s) - geo) <= 1e-12 * max(1.0, abs(geo))

    def test_value_at_zero_is_n(self):
        for n in (1, 2, 10, 40):
            g = tf.assoc_laguerre_tf(n)
            assert g.value_at_zero == float(n)
            assert g(0.0) == pytest.approx(float(n), abs=1e-12)

    def test_quadrature_invariant(self):
        assert tf.transform_fidelity(tf.assoc_laguerre_tf(4), samples=6) < 1e-8

    def test_pole_guard(self):
        with pytest.raises(PoleInput):
            tf.assoc_laguerre_tf(3).transform(1e-9)


class TestInvolution:
    def test_constant_by_hand(self):
        iv = tf.involution(tf.poly_tf(0))
        assert iv(1.0) == pytest.approx(-math.e, abs=1e-15)
        assert iv.transform(0.0) == pytest.approx(1.0, abs=0)  # 1/(1-s) at 0
        assert iv.value_at_zero == -1.0

    def test_self_inverse_at_transform_level(self, rng):
        g = tf.assoc_laguerre_tf(3)
        gg = tf.involution(tf.involution(g))
        worst = 0.0
        for _ in range(20):
            s = complex(3 * (rng.random() - 0.5), 6 * (rng.random() - 0.5))
            if min(abs(s), abs(1 - s)) < 1e-3:
                continue
            worst = max(worst, abs(gg.transform(s) - g.transform(s)))
        assert worst <= 1e-13

    def test_reflection(self):
        g = tf.assoc_laguerre_tf(3)
        assert tf.involution(g).transform(0.3) == g.transform(0.7)

    def test_rejects_unknown_negative_time(self):
        dead = tf.TestFunction(
            label="halfline", time_eval=lambda t: t, transform_eval=lambda s: 1 / s ** 2,
            value_at_zero=0.0, growth="polynomial", transform_abscissa=0.0,
            negative_time_ok=False,
        )
        with pytest.raises(TimeDomainUndefined):
            tf.involution(dead)

    def test_abscissa_flips(self):
        assert tf.involution(tf.exp_tf(-1.0)).transform_abscissa == 2.0
        assert tf.involution(tf.poly_tf(2)).transform_abscissa == 1.0


class TestConvolution:
    def test_constant_with_itself_gives_ramp_transform(self):
        prod = tf.convolve_transform(tf.poly_tf(0), tf.poly_tf(0))
        ramp = tf.poly_tf(1)
        for s in (2.0, 0.5 + 3j):
            assert abs(prod(s) - ramp.transform(s)) < 1e-15

    def test_exponential_product_at_zero(self):
        prod = tf.convolve_transform(tf.exp_tf(-1.0), tf.exp_tf(-2.0))
        assert prod(0.0) == pytest.approx(0.5, abs=1e-16)

    def test_double_quadrature_oracle(self):
        # time-domain convolution of t and t^2, transformed numerically
        from scipy.integrate import quad

        a, b = tf.poly_tf(1), tf.poly_tf(2)

        def conv(t: float) -> float:
            val, _ = quad(lambda u: a(u) * b(t - u), 0.0, t, limit=100)
            return val

        s = 3.0
        T = 40.0
        num, _ = quad(lambda t: math.exp(-s * t) * conv(t), 0.0, T, limit=200)
        assert abs(num - tf.convolve_transform(a, b)(s)) < 1e-7


class TestSumProd:
    def test_hand_value_n2_s2(self):
        g2 = tf.assoc_laguerre_tf(2)
        assert g2.transform(2.0) == pytest.approx(0.75, abs=0)
        assert g2.transform(-1.0) == pytest.approx(-3.0, abs=1e-14)
        assert tf.sum_prod_check(2, 2.0) < 1e-15

    def test_generic_point(self):
        assert tf.sum_prod_check(1, 0.3 + 4j) < 1e-13

    def test_sweep_high_order(self, rng):
        worst = 0.0
        for _ in range(100):
            s = 10.0 * np.exp(2j * np.pi * rng.random())
            worst = max(worst, tf.sum_prod_check(25, complex(s)))
        assert worst < 1e-11

    def test_pole_refusal(self):
        with pytest.raises(PoleInput):
            tf.sum_prod_check(3, 1e-10)
        with pytest.raises(PoleInput):
            tf.sum_prod_check(3, 1.0 + 1e-10)

    @given(
        n=st.integers(min_value=1, max_value=40),
        radius=st.floats(min_value=0.2, max_value=50.0),
        angle=st.floats(min_value=0.0, max_value=2 * math.pi),
    )
    @settings(max_examples=150, deadline=None)
    def test_identity_everywhere(self, n, radius, angle):
        # roundoff scales with both factors once |1 - 1/s|^n leaves O(1),
        # hence the symmetric scale (the |s| = 10 contract uses 1 + |a|^2)
        s = radius * complex(math.cos(angle), math.sin(angle))
        if min(abs(s), abs(1 - s)) < 1e-3:
            return
        g = tf.assoc_laguerre_tf(n)
        a, b = g.transform(s), g.transform(1 - s)
        scale = 1.0 + abs(a) ** 2 + abs(b) ** 2
        assert tf.sum_prod_check(n, s) <= 1e-11 * scale


class TestVectorizedTransforms:
    def test_ndarray_matches_scalar(self, rng):
        fams = [tf.poly_tf(1), tf.exp_tf(-0.5), tf.laguerre_tf(4),
                tf.assoc_laguerre_tf(6)]
        pts = 0.5 + 1j * np.array([14.1, 21.0, 25.0])
        for g in fams:
            vec = np.asarray(g.transform(pts))
            for i, s in enumerate(pts):
                ref = g.transform(complex(s))
                # numpy and scalar libm paths may differ by an ulp
                assert abs(vec[i] - ref) <= 4e-16 * abs(ref)
