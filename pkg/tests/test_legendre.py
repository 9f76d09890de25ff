import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

import optisph as osp
from optisph.errors import OrderRangeError

FOUR_PI = 4.0 * math.pi

thetas_strategy = st.floats(min_value=1e-3, max_value=math.pi - 1e-3)


class TestLegendreColumn:
    def test_monopole_normalization(self):
        for theta in (0.3, 1.2, np.pi / 2, np.pi):
            col = osp.legendre_column(0, theta, 4)
            assert col.values[0] == pytest.approx(1.0 / math.sqrt(FOUR_PI), rel=1e-15)

    def test_zonal_dipole_vanishes_at_equator(self):
        col = osp.legendre_column(0, np.pi / 2, 4)
        assert abs(col.value(1)) < 1e-12

    def test_sectoral_dipole_at_equator(self):
        col = osp.legendre_column(1, np.pi / 2, 2)
        expected = osp.legendre_direct(1, 1, np.pi / 2)
        assert col.value(1) == pytest.approx(expected, rel=1e-14)
        assert col.value(1) == pytest.approx(-math.sqrt(3.0 / (8.0 * math.pi)), rel=1e-12)

    def test_order_out_of_range(self):
        with pytest.raises(OrderRangeError):
            osp.legendre_column(4, 0.5, 4)

    @given(thetas_strategy, st.integers(min_value=0, max_value=10))
    @settings(max_examples=40, deadline=None)
    def test_normalization_bound(self, theta, ell):
        # |Y_lm(theta, 0)| <= sqrt((2l+1)/(4pi)) for every order
        for m in range(-ell, ell + 1):
            col = osp.legendre_column(m, theta, ell + 1)
            assert abs(col.value(ell)) <= math.sqrt((2 * ell + 1) / FOUR_PI) * (1 + 1e-12)


class TestDirectOracle:
    def test_monopole(self):
        assert osp.legendre_direct(0, 0, 0.7) == pytest.approx(
            1.0 / math.sqrt(FOUR_PI), rel=1e-15
        )

    def test_negative_order_relation(self):
        # relation between +-m passes through explicit factorials, so this
        # genuinely cross-checks the normalization algebra
        for theta in (0.4, 2.0):
            plus = osp.legendre_direct(1, 1, theta)
            minus = osp.legendre_direct(1, -1, theta)
            assert minus == pytest.approx(-plus, rel=1e-14)

    def test_degree_two_pole(self):
        assert osp.legendre_direct(2, 0, 0.0) == pytest.approx(
            math.sqrt(5.0 / FOUR_PI), rel=1e-14
        )

    def test_degree_guard(self):
        with pytest.raises(OrderRangeError):
            osp.legendre_direct(31, 0, 0.5)
        with pytest.raises(OrderRangeError):
            osp.legendre_direct(2, 3, 0.5)


class TestRecurrenceAgainstOracle:
    def test_all_orders_up_to_ten_on_grid(self):
        thetas = osp.equiangular_candidates(32)
        worst = 0.0
        for m in range(-10, 11):
            table = osp.legendre_table(m, thetas, 11)
            for i, theta in enumerate(thetas):
                for ell in range(abs(m), 11):
                    ref = osp.legendre_direct(ell, m, theta)
                    worst = max(worst, abs(table[i, ell - abs(m)] - ref))
        assert worst <= 1e-12

    @given(thetas_strategy, st.integers(min_value=0, max_value=10))
    @settings(max_examples=40, deadline=None)
    def test_random_points(self, theta, ell):
        for m in range(0, ell + 1):
            got = osp.legendre_column(m, theta, ell + 1).value(ell)
            assert got == pytest.approx(osp.legendre_direct(ell, m, theta), abs=1e-12)


class TestSymmetries:
    @given(thetas_strategy, st.integers(min_value=0, max_value=12))
    @settings(max_examples=40, deadline=None)
    def test_parity(self, theta, ell):
        L = ell + 1
        for m in range(0, ell + 1):
            a = osp.legendre_column(m, theta, L).value(ell)
            b = osp.legendre_column(m, np.pi - theta, L).value(ell)
            expected = a if (ell + m) % 2 == 0 else -a
            assert b == pytest.approx(expected, abs=1e-12)

    def test_negative_order_is_exact_sign_flip(self):
        # implemented as a sign flip, so equality is bitwise
        thetas = osp.equiangular_candidates(16)
        for m in range(1, 8):
            plus = osp.legendre_table(m, thetas, 16)
            minus = osp.legendre_table(-m, thetas, 16)
            assert np.array_equal(minus, (-1.0) ** m * plus)


class TestOrthonormality:
    def test_gauss_quadrature_inner_products(self):
        # product of two same-order columns is a polynomial in cos(theta) of
        # degree <= 32, integrated exactly by 20-node Gauss-Legendre
        nodes, weights = np.polynomial.legendre.leggauss(20)
        thetas = np.arccos(nodes)
        lmax = 16
        for m in range(0, lmax + 1):
            table = osp.legendre_table(m, thetas, lmax + 1)
            gram = 2.0 * np.pi * (table.T * weights) @ table
            assert_allclose(gram, np.eye(lmax + 1 - m), atol=1e-10)


class TestRescalingRange:
    def test_no_overflow_at_large_band_limit(self):
        theta = np.pi / (2 * 4096 - 1)
        for m in (0, 1, 100, 1000, 2500, 4095):
            table = osp.legendre_table(m, [theta], 4096)
            assert np.all(np.isfinite(table))
        # away from the pole the column must be populated, not flushed to zero
        table = osp.legendre_table(2000, [np.pi / 2], 4096)
        assert np.all(np.isfinite(table)) and np.abs(table).max() > 1e-3

    def test_underflow_region_returns_zero_not_garbage(self):
        theta = np.pi / (2 * 4096 - 1)
        table = osp.legendre_table(4095, [theta], 4096)
        # sin(theta)^4095 is far below the double range; exact zero is right
        assert table[0, 0] == 0.0


class TestWignerOracle:
    def test_degree_one_matrix(self):
        beta = 0.9
        c, s = math.cos(beta), math.sin(beta)
        expect = {
            (1, 1): (1 + c) / 2,
            (1, 0): -s / math.sqrt(2),
            (1, -1): (1 - c) / 2,
            (0, 0): c,
            (0, 1): s / math.sqrt(2),
            (-1, 1): (1 - c) / 2,
        }
        for (mr, mc), val in expect.items():
            assert osp.wigner_d_direct(1, mr, mc, beta) == pytest.approx(val, abs=1e-15)

    def test_identity_at_zero_angle(self):
        for ell in range(4):
            for mr in range(-ell, ell + 1):
                for mc in range(-ell, ell + 1):
                    got = osp.wigner_d_direct(ell, mr, mc, 0.0)
                    assert got == pytest.approx(1.0 if mr == mc else 0.0, abs=1e-15)

    def test_supplementary_angle_symmetry(self):
        # reflection about the equator flips the column index; the parity
        # factor is (-1)^(l+m) in this row/column convention
        beta = 0.7
        for ell in range(4):
            for m in range(-ell, ell + 1):
                for s in range(-ell, ell + 1):
                    lhs = osp.wigner_d_direct(ell, m, -s, beta)
                    rhs = (-1.0) ** ((ell + m) % 2) * osp.wigner_d_direct(
                        ell, m, s, np.pi - beta
                    )
                    assert lhs == pytest.approx(rhs, abs=1e-13)


class TestSpinColumns:
    def test_spin_zero_equals_scalar(self):
        thetas = osp.equiangular_candidates(12)
        for m in range(-5, 6):
            spin = osp.spin_table(0, m, thetas, 12)
            scalar = osp.legendre_table(m, thetas, 12)
            assert np.abs(spin - scalar).max() <= 1e-12

    def test_spin_one_sectoral_shape(self):
        # degree-1, order-1, spin-1 profile is proportional to cos^2(theta/2)
        thetas = np.linspace(0.2, 3.0, 7)
        col = np.array([osp.spin_column(1, 1, t, 2).value(1) for t in thetas])
        expected = -math.sqrt(3.0 / FOUR_PI) * np.cos(thetas / 2) ** 2
        assert_allclose(col, expected, atol=1e-14)

    def test_matches_wigner_oracle_low_degrees(self):
        thetas = [0.3, 1.1, np.pi / 2, 2.6]
        worst = 0.0
        for s in range(-3, 4):
            for m in range(-3, 4):
                lo = max(abs(s), abs(m))
                for theta in thetas:
                    col = osp.spin_column(s, m, theta, 4)
                    for ell in range(lo, 4):
                        ref = osp.spin_direct(s, ell, m, theta)
                        worst = max(worst, abs(col.value(ell) - ref))
        assert worst <= 1e-12

    def test_spin_reflection_consistency(self):
        # +-s columns at supplementary co-latitudes stay consistent with the
        # brute-force d-matrix reflection symmetry checked on the oracle above
        theta = 0.8
        for m in range(-3, 4):
            for s in range(-3, 4):
                lo = max(abs(s), abs(m))
                a = osp.spin_column(s, m, theta, 4)
                b = osp.spin_column(-s, m, np.pi - theta, 4)
                for ell in range(lo, 4):
                    assert a.value(ell) == pytest.approx(
                        osp.spin_direct(s, ell, m, theta), abs=1e-12
                    )
                    assert b.value(ell) == pytest.approx(
                        osp.spin_direct(-s, ell, m, np.pi - theta), abs=1e-12
                    )

    def test_range_errors(self):
        with pytest.raises(OrderRangeError):
            osp.spin_column(4, 0, 0.5, 4)
        with pytest.raises(OrderRangeError):
            osp.spin_column(0, 4, 0.5, 4)
