"""Pointwise residual evaluators for the four maximized 3D PDEs and the
optimal-strategy extraction.

Residuals take exact jets (derivatives supplied by the caller) and never
differentiate internally, so identity tests at 1e-9 measure the formulas,
not a discretization.  ln Phibar(t) enters through the closed-form
``log_survival`` to stay finite at large t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateHessianError, LogDomainError
from .jets import Jet, PsiJet
from .model import MarketParams, SurvivalModel

__all__ = [
    "residual_expn",
    "residual_expp",
    "residual_hara1",
    "residual_hara2",
    "strategy",
    "StrategyPoint",
    "psi_residual",
]


def _check_admissible(j: Jet):
    if np.any(np.asarray(j.V_l) <= 0):
        raise LogDomainError("residual requires V_l > 0")
    if np.any(np.asarray(j.V_ll) >= 0):
        raise DegenerateHessianError("residual requires V_ll < 0")


def _common_terms(p: MarketParams, j: Jet):
    """Linear drift terms plus the maximized-investment fraction."""
    drift = (j.V_t
             + 0.5 * p.eta**2 * j.h**2 * j.V_hh
             + (p.r * j.l + p.delta * j.h) * j.V_l
             + (p.mu - p.delta) * j.h * j.V_h)
    # numerator is a perfect square: ((alpha-r) V_l + eta rho sigma h V_lh)^2
    num = (p.excess_return * j.V_l + p.eta * p.rho * p.sigma * j.h * j.V_lh) ** 2
    return drift - num / (2.0 * p.sigma**2 * j.V_ll)


def residual_expn(p: MarketParams, m: SurvivalModel, j: Jet):
    """Maximized HJB residual for the negative exponential utility."""
    _check_admissible(j)
    a = p.a
    log_phibar = m.log_survival(j.t)
    return (_common_terms(p, j)
            + j.V_l * np.log(j.V_l) / a
            - (1.0 + log_phibar) * j.V_l / a
            - np.log(a) / a * j.V_l)


def residual_expp(p: MarketParams, m: SurvivalModel, j: Jet):
    """Maximized HJB residual for the positive exponential utility.

    Differs from the EXPn residual by one term: the -(ln a / a) V_l term is
    replaced by the free term Phibar(t)/a.
    """
    _check_admissible(j)
    a = p.a
    log_phibar = m.log_survival(j.t)
    return (_common_terms(p, j)
            + j.V_l * np.log(j.V_l) / a
            - (1.0 + log_phibar) * j.V_l / a
            + np.exp(log_phibar) / a)


def _hara_power_term(p, m, j, gamma):
    log_phibar = m.log_survival(j.t)
    phibar_pow = np.exp(log_phibar / (1.0 - gamma))
    return ((1.0 - gamma) ** 2 / gamma * phibar_pow
            * np.power(j.V_l, -gamma / (1.0 - gamma)))


def residual_hara1(p: MarketParams, m: SurvivalModel, j: Jet, gamma: float):
    """Maximized HJB residual for the first HARA form."""
    _check_admissible(j)
    phibar = np.exp(m.log_survival(j.t))
    return (_common_terms(p, j)
            + _hara_power_term(p, m, j, gamma)
            - (1.0 - gamma) / gamma * phibar)


def residual_hara2(p: MarketParams, m: SurvivalModel, j: Jet, gamma: float):
    """Maximized HJB residual for the second HARA form (the gamma->infinity path).

    Differs from the HARA1 residual in the final term only:
    -((1-gamma)/a) V_l in place of -((1-gamma)/gamma) Phibar.
    """
    _check_admissible(j)
    return (_common_terms(p, j)
            + _hara_power_term(p, m, j, gamma)
            - (1.0 - gamma) / p.a * j.V_l)


@dataclass
class StrategyPoint:
    pi: object
    c: object
    consumption_negative: bool


def strategy(p: MarketParams, m: SurvivalModel, j: Jet) -> StrategyPoint:
    """Optimal (pi, c) extracted from the value-function jet (EXPn problem).

    c can come out negative for large V_l; it is reported as-is with a flag,
    never clamped here.
    """
    if np.any(np.asarray(j.V_ll) == 0):
        raise DegenerateHessianError("strategy requires V_ll != 0")
    _check_admissible(j)
    pi = -(p.eta * p.rho * p.sigma * j.h * j.V_lh
           + p.excess_return * j.V_l) / (p.sigma**2 * j.V_ll)
    # argmax of -c V_l + Phibar U(c) for U = -e^{-ac}: the first-order
    # condition a Phibar e^{-ac} = V_l gives c = (1/a) ln(a Phibar / V_l),
    # whose concentrated value reproduces the maximized-PDE terms exactly
    c = (m.log_survival(j.t) + np.log(p.a) - np.log(j.V_l)) / p.a
    return StrategyPoint(pi=pi, c=c, consumption_negative=bool(np.any(np.asarray(c) < 0)))


def psi_residual(p: MarketParams, j: PsiJet):
    """Residual of the linear PDE generating the infinite-dimensional algebra:
    psi_t + 0.5 eta^2 h^2 psi_hh + (mu - delta) h psi_h.
    """
    return (j.psi_t
            + 0.5 * p.eta**2 * j.h**2 * j.psi_hh
            + (p.mu - p.delta) * j.h * j.psi_h)
