import math

import numpy as np
import pytest

from pntap.errors import DomainError, ValidationError
from pntap.zeros import exact_weighted_sum
from pntap.zerosum import (A0, A1, A2, GAMMA_1, SumEstimate, WeightSpec,
                           bpt_sum, count_remainder_R, dirichlet_count_bound,
                           lehman_sum_upper, low_count_twice_bound,
                           tail_inverse_square, weight_constant,
                           weight_inverse, weight_inverse_square,
                           weight_quarter_sqrt, zeta_count_main)

TWO_PI = 2.0 * math.pi


class TestCountRemainder:
    def test_values(self):
        # frozen by direct evaluation of the two branches
        for T in (TWO_PI, 100.0, math.exp(100.0)):
            lt = math.log(T)
            expected = min(0.28 * lt, 0.1038 * lt + 0.2573 * math.log(lt) + 9.3675)
            assert count_remainder_R(T) == expected
        assert count_remainder_R(TWO_PI) == pytest.approx(0.28 * math.log(TWO_PI))
        assert count_remainder_R(100.0) == pytest.approx(0.28 * math.log(100.0))
        # branch crossover: second branch wins far out
        T = math.exp(100.0)
        assert count_remainder_R(T) == pytest.approx(
            0.1038 * 100.0 + 0.2573 * math.log(100.0) + 9.3675)

    def test_domain(self):
        with pytest.raises(DomainError):
            count_remainder_R(6.0)

    def test_main_term_zero_at_2pi_e(self):
        assert zeta_count_main(TWO_PI * math.e) == pytest.approx(0.0, abs=1e-12)


class TestBpt:
    def test_constant_weight_closed_form(self):
        c = 0.4
        U, V = 10.0, 250.0
        est = bpt_sum(weight_constant(c), U, V)
        anti = lambda t: t * math.log(t / (TWO_PI * math.e))
        assert est.main_term == pytest.approx(c / TWO_PI * (anti(V) - anti(U)), rel=1e-10)
        # derivative term vanishes for a constant weight
        expected_err = (A1 + A2) * c / U \
            + c * count_remainder_R(U) + c * count_remainder_R(V)
        assert est.error_bound == pytest.approx(expected_err, rel=1e-12)

    def test_degenerate_interval(self):
        phi = weight_inverse_square()
        U = 20.0
        est = bpt_sum(phi, U, U)
        assert est.main_term == 0.0
        expected = 2 * (A0 + A1 * math.log(U)) * abs(phi.derivative(U)) \
            + (A1 + A2) * phi(U) / U + 2 * phi(U) * count_remainder_R(U)
        assert est.error_bound == pytest.approx(expected, rel=1e-12)
        assert est.error_bound >= 0.0

    def test_soundness_against_data(self, zeta_table):
        rng = np.random.default_rng(11)
        top = min(1000.0, zeta_table.max_height)
        for phi in (weight_inverse(), weight_inverse_square(), weight_quarter_sqrt()):
            for _ in range(25):
                U, V = np.sort(rng.uniform(TWO_PI, top, 2))
                exact = exact_weighted_sum(zeta_table, phi.value, float(U), float(V))
                est = bpt_sum(phi, float(U), float(V))
                assert abs(exact - est.main_term) <= est.error_bound

    def test_flags_required(self):
        bad = WeightSpec(lambda t: 1.0 / t, lambda t: -1.0 / t ** 2, convex=False)
        with pytest.raises(ValidationError):
            bpt_sum(bad, 10.0, 20.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            bpt_sum(weight_inverse(), 2.0, 20.0)
        with pytest.raises(DomainError):
            bpt_sum(weight_inverse(), 30.0, 20.0)

    def test_estimate_decomposition(self):
        est = bpt_sum(weight_inverse(), 10.0, 100.0)
        assert est.estimate == est.main_term + est.boundary_terms
        assert est.error_bound >= est.boundary_terms


class TestDirichletCount:
    def test_main_and_remainder(self):
        main, rem = dirichlet_count_bound(3, 5.0 / 7.0)
        assert main == pytest.approx((5.0 / 7.0) / math.pi
                                     * math.log(3 * (5.0 / 7.0) / (TWO_PI * math.e)))
        assert rem == pytest.approx(0.247 * math.log(3 * (5.0 / 7.0) / TWO_PI) + 6.894)

    def test_low_count_majorant(self):
        # the packaged linear form dominates the assembled expression
        for q in (3, 5, 17, 101, 9857, 10 ** 4, 10 ** 6):
            assembled = (10.0 / (7 * math.pi)) * math.log(5 * q / (14 * math.pi * math.e)) \
                + 0.494 * math.log(5 * q / (14 * math.pi)) + 13.788
            assert assembled < low_count_twice_bound(q)

    def test_domain(self):
        with pytest.raises(DomainError):
            dirichlet_count_bound(1, 1.0)
        with pytest.raises(DomainError):
            dirichlet_count_bound(3, 0.5)


class TestLehman:
    def test_inverse_square_tail_closed_form(self):
        # T * bound matches the packaged tail form within its rounding
        for T, q in ((10.0, 3), (100.0, 7), (1e4, 9857)):
            got = T * lehman_sum_upper(weight_inverse_square(), T, math.inf, q)
            expected = (1.0 / math.pi + 0.494 / T) * (math.log(q) + math.log(T)) \
                - 0.2667 + 13.0034 / T
            assert got == pytest.approx(expected, abs=2e-3 * max(1.0, math.log(q)))

    def test_inverse_weight_closed_form(self):
        # quadrature path vs analytic antiderivatives
        U, V, q = 14.841, 1.2e4, 11
        got = lehman_sum_upper(weight_inverse(), U, V, q)
        expected = (math.log(V) - math.log(U)) * math.log(q) / math.pi \
            + ((math.log(V / TWO_PI)) ** 2 - (math.log(U / TWO_PI)) ** 2) / (2 * math.pi) \
            + (2.0 / U) * (0.247 * math.log(q * U / TWO_PI) + 6.894) \
            + 0.247 * (1.0 / U - 1.0 / V)
        assert got == pytest.approx(expected, rel=1e-9)

    def test_zero_weight(self):
        assert lehman_sum_upper(weight_constant(0.0), 1.0, 100.0, 5) == 0.0

    def test_monotone_in_v_and_q(self):
        phi = weight_inverse()
        base = lehman_sum_upper(phi, 1.0, 50.0, 7)
        assert lehman_sum_upper(phi, 1.0, 80.0, 7) >= base
        assert lehman_sum_upper(phi, 1.0, 50.0, 11) >= base

    def test_improper_limit_guard(self):
        with pytest.raises(DomainError):
            lehman_sum_upper(weight_inverse(), 1.0, math.inf, 7)

    def test_domain(self):
        with pytest.raises(DomainError):
            lehman_sum_upper(weight_inverse(), 0.5, 10.0, 7)


class TestTail:
    def test_values(self):
        assert tail_inverse_square(100.0) == pytest.approx(
            math.log(100.0) / (TWO_PI * 100.0))
        g1 = 14.134725
        assert tail_inverse_square(g1) == pytest.approx(
            math.log(g1) / (TWO_PI * g1))

    def test_domain(self):
        with pytest.raises(DomainError):
            tail_inverse_square(10.0)

    def test_bounds_data(self, zeta_table):
        exact = exact_weighted_sum(zeta_table, lambda t: 1.0 / (t * t),
                                   100.0, min(1000.0, zeta_table.max_height))
        assert exact <= tail_inverse_square(100.0)


class TestSumEstimateInvariants:
    def test_nonnegative_budgets(self):
        with pytest.raises(ValidationError):
            SumEstimate(main_term=1.0, boundary_terms=-0.1, error_bound=1.0)
        with pytest.raises(ValidationError):
            SumEstimate(main_term=1.0, boundary_terms=0.1, error_bound=-1.0)
