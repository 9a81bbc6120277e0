"""Shared fixtures.

The expensive artifacts (solved surfaces, manufactured-solution sweep,
Monte Carlo runs) are session-scoped so the per-module tests and the
acceptance suite assert against the same computation.
"""

import time

import numpy as np
import pytest

from hjb_illiquid import montecarlo as mc
from hjb_illiquid import reduction as red
from hjb_illiquid import solver as sol
from hjb_illiquid.jets import WJet
from hjb_illiquid.model import Exponential, MarketParams, Weibull


@pytest.fixture(scope="session")
def p13():
    """Market parameters with a != 1 so that ln(a) terms are exercised."""
    return MarketParams(r=0.03, alpha=0.07, sigma=0.2, mu=0.05, delta=0.02,
                        eta=0.3, rho=0.4, a=1.3)


@pytest.fixture(scope="session")
def p1():
    """Market parameters with a = 1 (solver / Monte Carlo default set)."""
    return MarketParams(r=0.03, alpha=0.07, sigma=0.2, mu=0.05, delta=0.02,
                        eta=0.3, rho=0.4, a=1.0)


@pytest.fixture(scope="session")
def m_exp():
    return Exponential(kappa=0.25)


@pytest.fixture(scope="session")
def m_wei():
    return Weibull(lam=4.0, k=1.7)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)


def centered_grid(p, m, n_z, n_h, l0=1.0):
    """Solve grid covering the wealth levels the lifted problem visits:
    z = l + z_offset(t), which for the default rates sits near
    l + kappa/(a r^2)."""
    zc = l0 + red.z_offset(p, m, 0.0)
    return sol.Grid2D(zc - 6.0, zc + 8.0, 0.25, 6.0, n_z, n_h)


@pytest.fixture(scope="session")
def surface_192(p1, m_exp):
    """High-resolution solve used for the independent-residual certificate."""
    omega = red.h4_default_omega(p1, m_exp)
    grid = centered_grid(p1, m_exp, 192, 192)
    surf = sol.solve_reduced_H4(p1, m_exp, omega, grid, tol_abs=5e-6)
    return surf


@pytest.fixture(scope="session")
def surface_128(p1, m_exp):
    """128x128 solve, timed for the runtime bound."""
    omega = red.h4_default_omega(p1, m_exp)
    grid = centered_grid(p1, m_exp, 128, 128)
    t0 = time.perf_counter()
    surf = sol.solve_reduced_H4(p1, m_exp, omega, grid)
    surf.metadata["solve_seconds"] = time.perf_counter() - t0
    return surf


def mms_exact(p, grid):
    """Manufactured surface -e^{-ar z}(1 + h): admissible everywhere."""
    ar = p.a * p.r
    Z, H = np.meshgrid(grid.z, grid.h, indexing="ij")
    return -np.exp(-ar * Z) * (1.0 + H)


def mms_source(p, omega, grid):
    ar = p.a * p.r
    Z, H = np.meshgrid(grid.z[1:-1], grid.h[1:-1], indexing="ij")
    E = np.exp(-ar * Z)
    j = WJet(z=Z, h=H, W=-E * (1 + H), W_z=ar * E * (1 + H), W_h=-E,
             W_zz=-ar * ar * E * (1 + H), W_zh=ar * E, W_hh=0 * E)
    return -red.reduced_residual_H4(p, omega, j)


@pytest.fixture(scope="session")
def mms_sweep(p1, m_exp):
    """Three-level refinement against the manufactured solution."""
    omega = red.h4_default_omega(p1, m_exp)
    grid = sol.Grid2D(0.0, 10.0, 0.5, 4.0, 33, 25)
    errors = []
    for _ in range(3):
        exact = mms_exact(p1, grid)
        surf = sol.solve_reduced_H4(
            p1, m_exp, omega, grid, source=mms_source(p1, omega, grid),
            W0=exact * 1.5, dirichlet=exact)
        errors.append(float(np.max(np.abs(surf.W - exact))))
        grid = grid.refined()
    orders = [float(np.log2(errors[i] / errors[i + 1]))
              for i in range(len(errors) - 1)]
    return {"errors": errors, "orders": orders}


@pytest.fixture(scope="session")
def mc_closed_form(p1, m_exp):
    """Long zero-investment constant-consumption run vs the closed form."""
    t_max = float(np.ceil(np.log(1e6) / m_exp.kappa / 0.01) * 0.01)
    res = mc.simulate_objective(p1, m_exp, mc.ConstantPolicy(pi=0.0, c=1.0),
                                n_paths=10**5, dt=0.01, t_max=t_max, seed=42)
    cf = mc.closed_form_constant_objective(p1, m_exp, 1.0, t_max)
    return {"result": res, "closed_form": cf, "t_max": t_max}


@pytest.fixture(scope="session")
def mc_comparison(p1, m_exp, surface_96):
    policies = {
        "solver": mc.TablePolicy.from_surface(p1, m_exp, surface_96),
        "zero-invest": mc.ConstantPolicy(pi=0.0, c=0.5, label="zero-invest"),
        "merton-fraction": mc.MertonConsumptionPolicy.with_merton_pi(
            p1, q=0.05),
    }
    return mc.compare_policies(p1, m_exp, policies, n_paths=20000, dt=0.01,
                               t_max=30.0, seed=100)


@pytest.fixture(scope="session")
def surface_96(p1, m_exp):
    """Production-shaped solve reused by the Monte Carlo comparison."""
    omega = red.h4_default_omega(p1, m_exp)
    grid = centered_grid(p1, m_exp, 96, 64)
    return sol.solve_reduced_H4(p1, m_exp, omega, grid)
