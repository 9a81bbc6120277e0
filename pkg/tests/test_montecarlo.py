"""Monte Carlo validation of the solved policy and estimator sanity."""

import numpy as np
import pytest

from hjb_illiquid import montecarlo as mc
from hjb_illiquid.model import Exponential, MarketParams


class TestClosedForm:
    def test_constant_policy_within_three_se(self, mc_closed_form):
        res = mc_closed_form["result"]
        cf = mc_closed_form["closed_form"]
        # the objective of a deterministic policy has (near) zero variance;
        # guard the 3-SE criterion with an absolute floor
        assert abs(res.estimate - cf) <= max(3 * res.std_error, 1e-10)

    def test_no_clamping_or_ruin(self, mc_closed_form):
        res = mc_closed_form["result"]
        assert res.clamp_fraction == 0.0
        assert res.ruin_fraction == 0.0

    def test_closed_form_value(self, p1, m_exp):
        # -e^{-a c} (F(t) - F(0)) with F = -e^{-kappa t}/kappa
        k = m_exp.kappa
        t_max = 10.0
        expected = -np.exp(-1.0) * (1 - np.exp(-k * t_max)) / k
        assert mc.closed_form_constant_objective(p1, m_exp, 1.0, t_max) \
            == pytest.approx(expected, rel=1e-12)


class TestEstimatorSanity:
    def test_sampled_T_cross_validation(self, p1, m_exp):
        t_max = float(np.ceil(np.log(1e6) / m_exp.kappa / 0.01) * 0.01)
        cf = mc.closed_form_constant_objective(p1, m_exp, 1.0, t_max)
        st = mc.sampled_T_constant_objective(p1, m_exp, 1.0, 10**5, t_max,
                                             seed=5)
        assert abs(st.estimate - cf) <= 3 * st.std_error

    def test_terminal_h_moment(self, p1):
        for t, seed in ((1.0, 11), (5.0, 12)):
            rep = mc.terminal_h_moment_check(p1, t, 20000, 0.01, seed=seed)
            assert rep["within_3se"], rep

    def test_liquidation_time_sampler(self, m_exp):
        gen = np.random.default_rng(0)
        T = mc.sample_liquidation_times(m_exp, gen, 200000)
        assert np.mean(T) == pytest.approx(1.0 / m_exp.kappa, rel=0.02)


class TestDeterminism:
    def test_block_size_invariance(self, p1, m_exp):
        pol = mc.ConstantPolicy(pi=0.3, c=0.8)
        a = mc.simulate_objective(p1, m_exp, pol, 2000, 0.01, 5.0, seed=7,
                                  block_size=512)
        b = mc.simulate_objective(p1, m_exp, pol, 2000, 0.01, 5.0, seed=7,
                                  block_size=128)
        assert a.estimate == b.estimate
        assert a.std_error == b.std_error

    def test_seed_reproducibility(self, p1, m_exp):
        pol = mc.MertonConsumptionPolicy.with_merton_pi(p1, q=0.05)
        a = mc.simulate_objective(p1, m_exp, pol, 1000, 0.01, 3.0, seed=9)
        b = mc.simulate_objective(p1, m_exp, pol, 1000, 0.01, 3.0, seed=9)
        assert a.estimate == b.estimate

    def test_different_seeds_differ(self, p1, m_exp):
        pol = mc.MertonConsumptionPolicy.with_merton_pi(p1, q=0.05)
        a = mc.simulate_objective(p1, m_exp, pol, 1000, 0.01, 3.0, seed=9)
        b = mc.simulate_objective(p1, m_exp, pol, 1000, 0.01, 3.0, seed=10)
        assert a.estimate != b.estimate


class TestPolicyComparison:
    def test_solver_not_worse_than_baselines(self, mc_comparison):
        pairs = mc_comparison["pairs"]
        for name, pair in pairs.items():
            if not name.startswith("solver"):
                continue
            # difference = solver - baseline; "not worse by more than
            # 3 paired standard errors"
            assert pair["difference"] >= -3 * pair["paired_std_error"], \
                (name, pair)

    def test_no_invalid_policies(self, mc_comparison):
        assert mc_comparison["invalid"] == []

    def test_identical_policies_have_zero_difference(self, p1, m_exp):
        pols = {"a": mc.ConstantPolicy(pi=0.2, c=0.7, label="a"),
                "b": mc.ConstantPolicy(pi=0.2, c=0.7, label="b")}
        rep = mc.compare_policies(p1, m_exp, pols, n_paths=500, dt=0.01,
                                  t_max=2.0, seed=3)
        (pair,) = rep["pairs"].values()
        assert pair["difference"] == 0.0
        assert pair["paired_std_error"] == 0.0


class TestCorrelationHandling:
    def test_zero_rho_matches_independent_drivers(self, m_exp):
        # with rho = 0 the liquid-asset noise is independent of the
        # illiquid one; flipping rho's sign must not change a pi = 0 run
        p0 = MarketParams(r=0.03, alpha=0.07, sigma=0.2, mu=0.05,
                          delta=0.02, eta=0.3, rho=0.4, a=1.0)
        pm = MarketParams(r=0.03, alpha=0.07, sigma=0.2, mu=0.05,
                          delta=0.02, eta=0.3, rho=-0.4, a=1.0)
        pol = mc.ConstantPolicy(pi=0.0, c=0.5)
        a = mc.simulate_objective(p0, m_exp, pol, 1000, 0.01, 3.0, seed=4)
        b = mc.simulate_objective(pm, m_exp, pol, 1000, 0.01, 3.0, seed=4)
        assert a.estimate == b.estimate
