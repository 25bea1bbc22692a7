import math

import numpy as np
import pytest

import pntap.constants as C
from pntap.errors import DomainError, ValidationError
from pntap.quadrature import exp_integral_ei

import reference_tables as ref

PI = math.pi


def chain(log_x0, small=False, frozen_anchor=True):
    kappa = C.kappa_for(log_x0)
    si = C.short_interval_constants(log_x0, kappa)
    if small:
        soz = C.soz_constants_small(log_x0)
        anchor = C.soz_constants_small(500.0) if frozen_anchor else None
        tp = C.twisted_psi_constants_small(log_x0, soz, si, sigma6_soz=anchor)
        ap = C.ap_constants_small(log_x0, tp)
    else:
        soz = C.soz_constants(log_x0)
        tp = C.twisted_psi_constants(log_x0, soz, si)
        ap = C.ap_constants(log_x0, tp)
    return soz, si, tp, ap


class TestSoz:
    @pytest.mark.parametrize("lx0", [10.0, 20.0, 50.0, 500.0])
    def test_spot_rows(self, lx0):
        s = C.soz_constants(lx0)
        k1, _, k2, _ = ref.SOZ_TABLE[lx0]
        assert ref.close(s.k1, k1)
        assert ref.close(s.k2, k2)

    @pytest.mark.parametrize("lx0", [20.0, ref.LOG_SMALL, 500.0])
    def test_spot_rows_small(self, lx0):
        s = C.soz_constants_small(lx0)
        _, k1t, _, k2t = ref.SOZ_TABLE[lx0]
        assert ref.close(s.k1_t, k1t)
        assert ref.close(s.k2_t, k2t)

    def test_domain(self):
        with pytest.raises(DomainError):
            C.soz_constants(9.9)
        with pytest.raises(DomainError):
            C.soz_constants_small(16.0)

    def test_f_caps_on_grid(self):
        for lx in np.linspace(10.0, 500.0, 100):
            s = C.soz_constants(float(lx))
            assert s.f1 <= 1.0 / (8 * PI) + 1e-15
            assert s.f2 <= 1.0 / (2 * PI) + 1e-15

    def test_k1_monotone_on_grid(self):
        vals = [C.soz_constants(lx).k1 for lx in C.LOG_X0_GRID]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


class TestShortInterval:
    @pytest.mark.parametrize("lx0", [10.0, 100.0, 500.0])
    def test_spot_rows(self, lx0):
        k0, k1, k2, k3, k4 = ref.SHORT_INTERVAL_TABLE[lx0]
        si = C.short_interval_constants(lx0, C.KappaParams(k0, k1, k2))
        assert abs(si.k3 - k3) <= 5e-3
        assert abs(si.k4 - k4) <= 5e-3 * abs(k4)

    def test_structure(self):
        si = C.short_interval_constants(10.0, C.kappa_for(10.0))
        assert si.k3 == si.ell5 + si.ell7
        assert si.k4 == -si.ell6
        assert si.k3 > 0

    def test_kappa_validation(self):
        with pytest.raises(ValidationError):
            C.KappaParams(1.5, 10.0, 2.0)
        with pytest.raises(ValidationError):
            C.KappaParams(0.05, -1.0, 2.0)
        with pytest.raises(ValidationError):
            C.KappaParams(0.05, 10.0, 1.0)  # below the floor
        k = C.KappaParams.reduced(0.05, 10.0)
        assert k.kappa2 == C.KAPPA2_FLOOR  # 0.5 < floor
        k = C.KappaParams.reduced(0.05, 100.0)
        assert k.kappa2 == pytest.approx(5.0)

    def test_optimizer_beats_anchor(self):
        res = C.optimize_kappa(10.0)
        assert res.k3 <= ref.SHORT_INTERVAL_TABLE[10.0][3] + 1e-3
        assert res.converged
        anchored = C.short_interval_constants(10.0, res.kappa)
        assert anchored.k3 == pytest.approx(res.k3, abs=1e-12)

    def test_kappa_for_prefers_reference(self):
        k = C.kappa_for(10.0)
        assert (k.kappa0, k.kappa1, k.kappa2) == C.REFERENCE_KAPPA[10.0]


class TestG2AndHelpers:
    def test_g2_small_branch(self):
        q = 3
        lq = math.log(q)
        expected = 317.501 + 0.593 * math.log(lq) * lq * lq \
            + 0.0758 * math.sqrt(q) * lq + 2.751 * lq
        assert C.g2(q) == pytest.approx(expected, rel=1e-14)

    def test_g2_branch_switch(self):
        lo = C.g2(int(1e30) - 1)
        hi = C.g2(int(1e30))
        # the large-q branch drops the 317.5-class constant
        assert hi < lo

    def test_g2_monotone_within_branch(self):
        qs = [3, 7, 100, 10 ** 4, 10 ** 8]
        vals = [C.g2(q) for q in qs]
        assert vals == sorted(vals)

    def test_g2_domain(self):
        with pytest.raises(DomainError):
            C.g2(2)

    def test_c_diff_bound(self):
        x = math.exp(10.0)
        got = C.c_diff_bound(x, 1)
        assert got == pytest.approx(1.0 / x + 7e-5 / (math.sqrt(x) * 10.0), rel=1e-12)
        got0 = C.c_diff_bound(x, 0)
        assert got0 == pytest.approx(
            10.0 + 1.0 + 10.0 / math.sqrt(x) + 7e-5 / (math.sqrt(x) * 10.0), rel=1e-12)

    def test_trivial_zero_series_vs_oracle(self):
        def oracle(x, a, terms=60):
            return math.fsum(
                x ** (1 - 2 * m - a) / ((2 * m + a) * (2 * m - 1 + a))
                for m in range(1, terms + 1))
        for x in (2.0, 3.5, 10.0, math.exp(10.0)):
            for a in (0, 1):
                assert C.trivial_zero_series(x, a) == pytest.approx(
                    oracle(x, a), rel=1e-12, abs=1e-300)
        # frozen from the series oracle: x = 2, both parities
        assert C.trivial_zero_series(2.0, 0) == pytest.approx(0.2616240718822739, rel=1e-12)
        assert C.trivial_zero_series(2.0, 1) == pytest.approx(0.0452287475577808, rel=1e-10)


class TestTwisted:
    @pytest.mark.parametrize("lx0", [10.0, 150.0, 500.0])
    def test_spot_rows(self, lx0):
        _, si, tp, _ = chain(lx0)
        k5, k6, O0, O1, O2 = ref.TWISTED_TABLE[lx0]
        assert ref.close(tp.k5, k5)
        assert ref.close(tp.k6, k6)
        assert ref.close(tp.Omega0, O0)
        assert ref.close(tp.Omega1, O1)
        assert ref.close(tp.Omega2, O2)

    def test_identities_full_precision(self):
        soz, si, tp, _ = chain(20.0)
        assert tp.Omega0 == pytest.approx(si.k3 + tp.k5, abs=1e-12)
        assert tp.Omega2 == pytest.approx(1.777 - si.k4, rel=1e-15)

    def test_branch_on_k2_sign(self):
        soz, si, tp, _ = chain(10.0)   # k2 > 0
        assert tp.k6 == 0.0
        assert tp.k5 == tp.sigma4
        soz, si, tp, _ = chain(150.0)  # k2 < 0
        assert tp.k6 == pytest.approx(soz.k2 * math.log(3.0), rel=1e-14)
        assert tp.k5 == tp.sigma5

    def test_small_branch_sigma7(self):
        soz, si, tp, _ = chain(20.0, small=True)
        assert soz.k2_t < 0
        assert tp.sigma7 == pytest.approx(soz.k2_t * math.log(3.0), rel=1e-14)
        assert tp.Omega2 == pytest.approx(-si.k4, rel=1e-15)

    def test_mismatched_records_rejected(self):
        soz = C.soz_constants(10.0)
        si = C.short_interval_constants(20.0, C.kappa_for(20.0))
        with pytest.raises(ValidationError):
            C.twisted_psi_constants(10.0, soz, si)


class TestApConstants:
    @pytest.mark.parametrize("lx0", [10.0, 200.0, 500.0])
    def test_spot_rows(self, lx0):
        _, _, _, ap = chain(lx0)
        for got, want in zip(ap.a, ref.AP_TABLE[lx0]):
            assert ref.close(got, want), (lx0, got, want)

    @pytest.mark.parametrize("lx0", [20.0, 100.0, 500.0])
    def test_spot_rows_small(self, lx0):
        _, _, _, ap = chain(lx0, small=True)
        for got, want in zip(ap.a, ref.AP_SMALL_TABLE[lx0]):
            assert ref.close(got, want), (lx0, got, want)

    def test_cross_identities(self):
        _, si, tp, ap = chain(30.0)
        a1, a2, a3, a4, a5, a6 = ap.a
        assert a5 == tp.Omega2
        assert a3 == pytest.approx((1.0 + tp.Omega2) / math.log(2.0), rel=1e-14)
        assert a4 == pytest.approx(a6 + 1.44270, abs=1e-12)
        assert a2 == pytest.approx(1.0 / (8 * PI) + a4 * a1, rel=1e-14)

    def test_omega5_from_ei(self):
        _, _, _, ap = chain(10.0)
        sx = math.exp(5.0)
        expected = 1.0 + (exp_integral_ei(5.0) - exp_integral_ei(math.log(2.0) / 2.0)) / sx
        assert ap.Omega5 == pytest.approx(expected, rel=1e-14)
        assert ref.close(ap.Omega5, 1.27146)

    def test_monotone_chain(self):
        grid = [10.0, 20.0, 30.0, 50.0, 100.0, 150.0, 500.0]
        k5s, O0s = [], []
        for lx in grid:
            _, _, tp, _ = chain(lx)
            k5s.append(tp.k5)
            O0s.append(tp.Omega0)
        assert all(a >= b for a, b in zip(k5s, k5s[1:]))
        assert all(a >= b for a, b in zip(O0s, O0s[1:]))


class TestEvaluateBounds:
    def test_principal(self):
        x, q = 73.2, 5
        expected = math.sqrt(x) * math.log(x) ** 2 / (8 * PI) \
            + 1.12 * math.log(q) * math.log(x)
        assert C.evaluate_bounds("principal", x, q) == pytest.approx(expected, rel=1e-14)
        with pytest.raises(DomainError):
            C.evaluate_bounds("principal", 50.0, 5)

    def test_pi_ap_formula(self):
        _, _, _, ap = chain(10.0)
        x, q = math.exp(10.0), 3
        a1, a2, a3, *_ = ap.a
        expected = (10.0 / (8 * PI) + a1 * math.log(3) / (2 * PI) + a2) * math.exp(5.0) + a3
        assert C.evaluate_bounds("pi_ap", x, q, ap) == pytest.approx(expected, rel=1e-14)

    def test_theta_minus_psi_gap(self):
        _, _, _, ap = chain(10.0)
        x, q = 1e6, 7
        gap = C.evaluate_bounds("theta_ap", x, q, ap) - C.evaluate_bounds("psi_ap", x, q, ap)
        assert gap == pytest.approx(1.44270 * math.sqrt(x) * math.log(x), rel=1e-12)

    def test_preconditions(self):
        _, _, _, ap = chain(10.0)
        with pytest.raises(DomainError):
            C.evaluate_bounds("pi_ap", 100.0, 3, ap)  # x below x0
        with pytest.raises(DomainError):
            C.evaluate_bounds("pi_ap", 1e9, 10 ** 5, ap)  # x0 < q on the general chain
        _, _, _, ap_s = chain(20.0, small=True)
        with pytest.raises(DomainError):
            C.evaluate_bounds("pi_ap", 1e9, 10 ** 5, ap_s)  # q > 1e4 on small chain

    def test_chi_bounds(self):
        _, _, tp, _ = chain(10.0)
        x, q = 1e5, 3
        psi = C.evaluate_bounds("psi_chi", x, q, tp)
        theta = C.evaluate_bounds("theta_chi", x, q, tp)
        assert theta - psi == pytest.approx(
            1.44270 * math.sqrt(x) * math.log(x), rel=1e-12)


class TestGmBaseline:
    def test_divisor_sums(self):
        x = 100.0
        base3 = C.gm_baseline_pi_bound(x, 3)
        lead = (math.log(x) / (8 * PI) + (1 + 3 / math.log(x)) * math.log(3) / (2 * PI)
                + 1 / (4 * PI) + 6 / math.log(x)) * math.sqrt(x)
        sub = math.sqrt(x) * (1 / (2 * PI) + 3 / math.log(x)) * (math.log(3) / 2.0)
        assert base3 == pytest.approx(lead - sub, rel=1e-14)
        # q = 6 subtracts log2 + log3/2
        base6 = C.gm_baseline_pi_bound(x, 6)
        sub6 = math.sqrt(x) * (1 / (2 * PI) + 3 / math.log(x)) \
            * (math.log(2) + math.log(3) / 2.0)
        lead6 = (math.log(x) / (8 * PI) + (1 + 3 / math.log(x)) * math.log(6) / (2 * PI)
                 + 1 / (4 * PI) + 6 / math.log(x)) * math.sqrt(x)
        assert base6 == pytest.approx(lead6 - sub6, rel=1e-14)

    def test_shared_leading_term(self):
        # both right sides carry sqrt(x) log x/(8 pi), so the gap per
        # sqrt(x) settles to a constant at fixed q
        _, _, _, ap = chain(10.0)
        q = 3
        d30 = (C.evaluate_bounds("pi_ap", 1e30, q, ap)
               - C.gm_baseline_pi_bound(1e30, q)) / math.sqrt(1e30)
        d40 = (C.evaluate_bounds("pi_ap", 1e40, q, ap)
               - C.gm_baseline_pi_bound(1e40, q)) / math.sqrt(1e40)
        assert abs(d40 - d30) < 0.05
