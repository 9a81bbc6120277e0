"""Invariant reductions: lifted-residual identities, generator
annihilation, and the boundary-compatibility classification."""

import math

import numpy as np
import pytest

from hjb_illiquid import hjb
from hjb_illiquid import reduction as red
from hjb_illiquid.errors import (DegenerateHessianError, LogDomainError,
                                 ParameterError, SingularityError)
from hjb_illiquid.jets import WJet
from hjb_illiquid.testfunctions import exp_poly_2d, random_family_2d

POINTS = [(1.3, 0.8, 0.9), (0.4, 1.7, 2.1), (-0.6, 0.5, 0.3),
          (2.0, 2.4, 1.5), (0.0, 1.0, 3.0)]


def quad_ode_function():
    return red.OdeFunction(v=lambda h: -(1.0 + 0.3 * h + 0.2 * h**2),
                           vp=lambda h: -(0.3 + 0.4 * h),
                           vpp=lambda h: -0.4 + 0 * h, label="quad")


def rel_dev(lhs, rhs):
    return abs(lhs - rhs) / max(1.0, abs(lhs))


class TestZOffset:
    def test_exponential_closed_form(self, p13, m_exp):
        # g(t) = (kappa/r) t ... for exponential survival the auxiliary
        # integral is the constant kappa/r and -ln Phibar = kappa t
        ar = p13.a * p13.r
        k = m_exp.kappa
        for t in (0.0, 1.0, 4.2):
            expected = k / (ar * p13.r) + k * t / ar
            assert red.z_offset(p13, m_exp, t) == pytest.approx(
                expected, rel=1e-12)

    def test_weibull_k1_equals_exponential(self, p13):
        from hjb_illiquid.model import Exponential, Weibull
        mw, me = Weibull(lam=4.0, k=1.0), Exponential(kappa=0.25)
        for t in (0.1, 1.0, 6.0):
            assert red.z_offset(p13, mw, t) == pytest.approx(
                red.z_offset(p13, me, t), rel=1e-10)


class TestLiftedResiduals:
    """Each reduced equation, substituted back through its value map,
    must reproduce the 3D residual up to a point-independent multiplier."""

    def test_H2(self, p13, m_exp, m_wei):
        W2 = exp_poly_2d(0.7, 0.3, 0.4, 0.2)
        for m in (m_exp, m_wei):
            V = red.lift_H2(p13, m, W2)
            for (zt, h, t) in POINTS:
                l = zt - V.zoff(t)
                z, _ = red.invariants_H2(p13, m, l, h, t)
                lhs = hjb.residual_expn(p13, m, V.jet(l, h, t))
                rhs = red.reduced_residual_H2(p13, W2.jet(z, h))
                assert rel_dev(lhs, rhs) <= 1e-9

    def test_H4_three_omegas(self, p13, m_exp, m_wei):
        W2 = exp_poly_2d(0.7, 0.3, 0.4, 0.2)
        for m in (m_exp, m_wei):
            omegas = (0.12, p13.r / m_exp.kappa, -0.4)
            for omega in omegas:
                V = red.lift_H4(p13, m, omega, W2)
                for (zt, h, t) in POINTS:
                    l = zt - V.zoff(t)
                    z, _ = red.invariants_H4(p13, m, omega, l, h, t)
                    lhs = hjb.residual_expn(p13, m, V.jet(l, h, t))
                    mult = red.h4_multiplier(p13, omega, t)
                    rhs = mult * red.reduced_residual_H4(p13, omega,
                                                         W2.jet(z, h))
                    assert rel_dev(lhs, rhs) <= 1e-9

    def test_H4_multiplier_point_independent(self, p13):
        # the multiplier depends on t only, never on (l, h) or the surface
        for omega in (0.12, 0.5):
            for t in (0.0, 1.0, 3.7):
                assert red.h4_multiplier(p13, omega, t) == pytest.approx(
                    math.exp(-p13.r * t / omega), rel=1e-14)

    def test_H7_both_signs(self, p13, m_exp, m_wei):
        W2 = exp_poly_2d(0.7, 0.3, 0.4, 0.2)
        for m in (m_exp, m_wei):
            for sign in (+1, -1):
                V = red.lift_H7(p13, m, sign, W2)
                for (zt, h, t) in POINTS:
                    l = zt - V.zoff(t)
                    z, _ = red.invariants_H7(p13, m, sign, l, h, t)
                    lhs = hjb.residual_expn(p13, m, V.jet(l, h, t))
                    rhs = red.reduced_residual_H7(p13, sign, W2.jet(z, h))
                    assert rel_dev(lhs, rhs) <= 1e-9

    def test_H8_H12_ode_lifts(self, p13, m_exp, m_wei):
        fn = quad_ode_function()
        cases = ((red.lift_H8, red.ode_residual_H8),
                 (red.lift_H12, red.ode_residual_H12))
        for m in (m_exp, m_wei):
            for lift, ode in cases:
                V = lift(p13, m, fn)
                for (zt, h, t) in POINTS:
                    l = zt - V.zoff(t)
                    lhs = hjb.residual_expn(p13, m, V.jet(l, h, t))
                    mult = math.exp(-p13.a * p13.r * (l + V.zoff(t)))
                    rhs = mult * ode(p13, h, fn.v(h), fn.vp(h), fn.vpp(h))
                    assert rel_dev(lhs, rhs) <= 1e-9

    def test_H12_minus_H8_closed_form(self, p13):
        # the two ODEs differ by the single term r(1 + ln a) v
        fn = quad_ode_function()
        for h in (0.5, 1.0, 2.7):
            diff = (red.ode_residual_H12(p13, h, fn.v(h), fn.vp(h),
                                         fn.vpp(h))
                    - red.ode_residual_H8(p13, h, fn.v(h), fn.vp(h),
                                          fn.vpp(h)))
            assert diff == pytest.approx(
                p13.r * (1 + math.log(p13.a)) * fn.v(h), rel=1e-12)

    def test_reduced_domain_errors(self, p13):
        # W_z <= 0 or W_zz >= 0 must raise, not return garbage
        bad = WJet(z=0.0, h=1.0, W=-1.0, W_z=-0.5, W_h=0.0,
                   W_zz=-1.0, W_zh=0.0, W_hh=0.0)
        with pytest.raises(LogDomainError):
            red.reduced_residual_H4(p13, 0.3, bad)
        bad2 = WJet(z=0.0, h=1.0, W=-1.0, W_z=0.5, W_h=0.0,
                    W_zz=0.2, W_zh=0.0, W_hh=0.0)
        with pytest.raises(DegenerateHessianError):
            red.reduced_residual_H4(p13, 0.3, bad2)
        with pytest.raises(ParameterError):
            red.reduced_residual_H4(p13, 0.0, WJet(0.0, 1.0, -1.0, 0.5,
                                                   0.0, -1.0, 0.0, 0.0))
        with pytest.raises(ValueError):
            red.ode_residual_H8(p13, 1.0, 0.5, 0.0, 0.0)  # needs v < 0


class TestAnnihilation:
    CASES = [("H2", {}), ("H4", {"omega": 0.3}), ("H4", {"omega": -0.2}),
             ("H4_omega0", {}), ("H5", {"sign": 1}), ("H5", {"sign": -1}),
             ("H7", {"sign": 1}), ("H7", {"sign": -1}),
             ("H8", {}), ("H12", {"omega": 0.7})]

    def test_generators_annihilate_invariants(self, p13, m_exp, m_wei, rng):
        for m in (m_exp, m_wei):
            for case, kw in self.CASES:
                rep = red.annihilation_report(p13, m, case, rng, **kw)
                assert rep["ok"], (case, kw, m.kind, rep)
                assert rep["max_dev"] <= 1e-9


class TestStrategyH4:
    def test_matches_lifted_strategy(self, p13, m_exp, rng):
        # 100 points: reduced-strategy on W == full strategy on the lift
        omega = 0.4
        W2 = exp_poly_2d(0.9, 0.4, 0.3, 0.1)
        V = red.lift_H4(p13, m_exp, omega, W2)
        for _ in range(100):
            z = rng.uniform(0.5, 3.0)
            h = rng.uniform(0.5, 3.0)
            t = rng.uniform(0.2, 2.0)
            l = z - V.zoff(t)
            s2 = red.invariant_strategy_H4(p13, m_exp, omega, W2.jet(z, h), t)
            s3 = hjb.strategy(p13, m_exp, V.jet(l, h, t))
            assert rel_dev(s2.pi, s3.pi) <= 1e-9
            assert rel_dev(s2.c, s3.c) <= 1e-9

    def test_requires_positive_omega(self, p13, m_exp):
        W2 = exp_poly_2d(0.9, 0.4, 0.3, 0.1)
        with pytest.raises(ParameterError):
            red.invariant_strategy_H4(p13, m_exp, -0.5, W2.jet(1.0, 1.0), 0.5)


class TestH5:
    def test_l_coefficient_singularity(self, p13):
        # 1 + sign * ar e^{rt} vanishes for sign = -1 at t = -ln(ar)/r
        # (only reachable when ar < 1)
        t_star = -math.log(p13.a * p13.r) / p13.r
        with pytest.raises(SingularityError):
            red.h5_l_coefficient(p13, -1, t_star)

    def test_monotonicity_flip(self, p13):
        # with the plus sign the value map decreases in l for all t >= 0
        # (ar e^{rt} > 0 keeps the coefficient positive)
        for t in (0.0, 1.0, 10.0):
            assert not red.h5_increasing_in_l(p13, +1, t)


class TestClassification:
    def test_unique_admissible_default(self, p13, m_exp, m_wei):
        for m in (m_exp, m_wei):
            rep = red.classify_all(p13, m)
            assert rep["unique_admissible"]
            assert rep["admissible"] == ["H4"]
            assert rep["omega"] > 0

    def test_no_admissible_for_negative_omega(self, p13, m_exp):
        rep = red.classify_all(p13, m_exp, omega=-1.0)
        assert rep["admissible"] == []
        assert not rep["unique_admissible"]

    def test_rejection_reasons(self, p13, m_exp):
        rep = red.classify_all(p13, m_exp)
        by_id = {c["case"]: c for c in rep["cases"]}
        assert by_id["H2"]["reason"] == "variable-mixing/boundary"
        assert by_id["H4_omega0"]["reason"] == "monotonicity-violation"
        assert by_id["H5+"]["reason"] == "growth-bound-violation"
        assert by_id["H7+"]["reason"] == "boundary-condition-conflict"
        assert by_id["H8"]["reason"] == "sign/log-domain"
        assert by_id["H12"]["reason"] == "sign/log-domain"
        assert "complex-valued if the function v(h) > 0" in by_id["H12"]["note"]

    def test_covers_full_catalog(self, p13, m_exp):
        rep = red.classify_all(p13, m_exp)
        ids = {c["case"] for c in rep["cases"]}
        # 22 subalgebra classes plus the sign/omega variants
        assert {"H1", "H2", "H3", "H4", "H4_omega0", "H5+", "H5-", "H6",
                "H7+", "H7-", "H8", "H12", "H22"} <= ids
