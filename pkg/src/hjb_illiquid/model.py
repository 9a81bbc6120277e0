"""Market parameters, liquidation-time distributions, and auxiliary integrals.

The two liquidation-time families are the exponential distribution, with
survival exp(-kappa*t), and the Weibull distribution, with survival
exp(-(t/lam)**k).  Every quantity the rest of the package needs from the
distribution is available in closed form:

* ``log_survival``            ln Phibar(t)
* ``log_survival_derivative`` d/dt ln Phibar(t)  (minus the hazard rate)
* ``aux_integral``            I(t) = e^{rt} int e^{-rt} d ln Phibar(t)
* ``aux_integral_primitive``  P(t) with P'(t) = I(t)
* ``survival_primitive``      F(t) with F'(t) = Phibar(t) and F -> 0 at infinity

Antiderivative constants are fixed to the branch that decays as t -> infinity
(no homogeneous C*e^{rt} term in I, no additive constant in F).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError, SingularityError

__all__ = [
    "MarketParams",
    "SurvivalModel",
    "Exponential",
    "Weibull",
    "survival_model_from_dict",
    "upper_incomplete_gamma",
    "aux_integral_I",
]


@dataclass(frozen=True)
class MarketParams:
    """The seven asset-dynamics constants plus the exponential-utility coefficient.

    r      risk-free rate
    alpha  stock drift (must exceed r)
    sigma  stock volatility
    mu     illiquid-asset drift
    delta  dividend rate paid by the illiquid asset
    eta    illiquid-asset volatility
    rho    correlation between stock and illiquid asset, in (-1, 1)
    a      exponential-utility coefficient
    """

    r: float
    alpha: float
    sigma: float
    mu: float
    delta: float
    eta: float
    rho: float
    a: float

    def __post_init__(self):
        if not self.r > 0:
            raise ParameterError(f"r must be positive, got {self.r}")
        if not self.sigma > 0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")
        if not self.eta > 0:
            raise ParameterError(f"eta must be positive, got {self.eta}")
        if not self.a > 0:
            raise ParameterError(f"a must be positive, got {self.a}")
        if not self.alpha > self.r:
            raise ParameterError(
                f"alpha must exceed r, got alpha={self.alpha}, r={self.r}"
            )
        if not -1.0 < self.rho < 1.0:
            raise ParameterError(f"rho must lie in (-1, 1), got {self.rho}")

    @property
    def excess_return(self) -> float:
        return self.alpha - self.r

    @classmethod
    def from_dict(cls, d: dict) -> "MarketParams":
        required = ("r", "alpha", "sigma", "mu", "delta", "eta", "rho", "a")
        missing = [k for k in required if k not in d]
        if missing:
            raise ParameterError(f"market parameters missing fields: {missing}")
        return cls(**{k: float(d[k]) for k in required})


# ---------------------------------------------------------------------------
# Upper incomplete gamma
# ---------------------------------------------------------------------------

_ITMAX = 400
_EPS = 1e-16
_FPMIN = 1e-300


def _gamma_series(k: float, x: float) -> float:
    """Regularized lower incomplete gamma P(k, x) by series, for x < k + 1."""
    if x == 0.0:
        return 0.0
    ap = k
    summ = 1.0 / k
    term = summ
    for _ in range(_ITMAX):
        ap += 1.0
        term *= x / ap
        summ += term
        if abs(term) < abs(summ) * _EPS:
            break
    return summ * math.exp(-x + k * math.log(x) - math.lgamma(k))

def _gamma_cf(k: float, x: float) -> float:
    """Gamma(k, x) by modified Lentz continued fraction, for x >= k + 1."""
    b = x + 1.0 - k
    c = 1.0 / _FPMIN
    d = 1.0 / b
    frac = d
    for i in range(1, _ITMAX):
        an = -i * (i - k)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        frac *= delta
        if abs(delta - 1.0) < _EPS:
            break
    log_prefactor = -x + k * math.log(x)
    if log_prefactor < -745.0:
        return 0.0
    return math.exp(log_prefactor) * frac


def _upper_incomplete_gamma_scalar(k: float, x: float) -> float:
    if not k > 0:
        raise DomainError(f"upper incomplete gamma requires k > 0, got {k}")
    if x < 0:
        raise DomainError(f"upper incomplete gamma requires x >= 0, got {x}")
    if x < k + 1.0:
        return (1.0 - _gamma_series(k, x)) * math.exp(math.lgamma(k))
    return _gamma_cf(k, x)


def upper_incomplete_gamma(k, x):
    """Gamma(k, x) = int_x^inf s^(k-1) e^(-s) ds.

    Lower series for x < k+1, Lentz continued fraction otherwise; relative
    accuracy around 1e-14 for k <= 20, x <= 700.
    """
    if np.isscalar(k) and np.isscalar(x):
        return _upper_incomplete_gamma_scalar(float(k), float(x))
    k_arr, x_arr = np.broadcast_arrays(np.asarray(k, float), np.asarray(x, float))
    out = np.empty(k_arr.shape)
    flat_k, flat_x, flat_o = k_arr.ravel(), x_arr.ravel(), out.ravel()
    for i in range(flat_k.size):
        flat_o[i] = _upper_incomplete_gamma_scalar(flat_k[i], flat_x[i])
    return out


# ---------------------------------------------------------------------------
# Survival models
# ---------------------------------------------------------------------------


class SurvivalModel:
    """Liquidation-time distribution interface.

    Subclasses supply the closed forms; all methods accept scalars or arrays.
    """

    kind: str = ""

    def _check_t(self, t):
        if np.any(np.asarray(t) < 0):
            raise DomainError("time must be non-negative")

    def survival(self, t):
        """Phibar(t) = P(T > t)."""
        self._check_t(t)
        return np.exp(self.log_survival(t))

    def log_survival(self, t):
        raise NotImplementedError

    def log_survival_derivative(self, t):
        raise NotImplementedError

    def aux_integral(self, r: float, t):
        """I(t) = e^{rt} int e^{-rt} d ln Phibar(t), decaying-branch constant."""
        raise NotImplementedError

    def aux_integral_primitive(self, r: float, t):
        """P(t) with P'(t) = I(t), additive constant fixed to P with P(0) finite."""
        raise NotImplementedError

    def survival_primitive(self, t):
        """F(t) with F'(t) = Phibar(t) and F(t) -> 0 as t -> infinity (so F < 0)."""
        raise NotImplementedError

    def horizon(self, eps: float = 1e-12) -> float:
        """Smallest t with Phibar(t) <= eps."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Exponential(SurvivalModel):
    kappa: float
    kind = "exponential"

    def __post_init__(self):
        if not self.kappa > 0:
            raise ParameterError(f"kappa must be positive, got {self.kappa}")

    def log_survival(self, t):
        self._check_t(t)
        return -self.kappa * np.asarray(t, float) if not np.isscalar(t) else -self.kappa * t

    def log_survival_derivative(self, t):
        self._check_t(t)
        return np.full_like(np.asarray(t, float), -self.kappa) if not np.isscalar(t) else -self.kappa

    def aux_integral(self, r, t):
        self._check_t(t)
        val = self.kappa / r
        return np.full_like(np.asarray(t, float), val) if not np.isscalar(t) else val

    def aux_integral_primitive(self, r, t):
        self._check_t(t)
        return (self.kappa / r) * (np.asarray(t, float) if not np.isscalar(t) else t)

    def survival_primitive(self, t):
        self._check_t(t)
        return -np.exp(-self.kappa * np.asarray(t, float)) / self.kappa

    def horizon(self, eps=1e-12):
        return -math.log(eps) / self.kappa

    def to_dict(self):
        return {"kind": "exponential", "kappa": self.kappa}


@dataclass(frozen=True)
class Weibull(SurvivalModel):
    lam: float
    k: float
    kind = "weibull"

    def __post_init__(self):
        if not self.lam > 0:
            raise ParameterError(f"lambda must be positive, got {self.lam}")
        if not self.k > 0:
            raise ParameterError(f"k must be positive, got {self.k}")

    def log_survival(self, t):
        self._check_t(t)
        return -np.power(np.asarray(t, float) / self.lam, self.k) if not np.isscalar(t) else -((t / self.lam) ** self.k)

    def log_survival_derivative(self, t):
        self._check_t(t)
        if self.k < 1.0 and np.any(np.asarray(t) == 0):
            raise SingularityError("Weibull hazard is singular at t=0 for k < 1")
        tt = np.asarray(t, float)
        val = -(self.k / self.lam**self.k) * np.power(tt, self.k - 1.0)
        return float(val) if np.isscalar(t) else val

    def aux_integral(self, r, t):
        self._check_t(t)
        rt = r * np.asarray(t, float)
        coef = self.k / (self.lam**self.k * r**self.k)
        val = coef * np.exp(rt) * upper_incomplete_gamma(self.k, rt)
        return float(val) if np.isscalar(t) else val

    def aux_integral_primitive(self, r, t):
        self._check_t(t)
        tt = np.asarray(t, float)
        rt = r * tt
        coef = self.k / (self.lam**self.k * r**self.k)
        val = coef * (np.exp(rt) * upper_incomplete_gamma(self.k, rt) / r
                      + r ** (self.k - 1.0) * np.power(tt, self.k) / self.k)
        return float(val) if np.isscalar(t) else val

    def survival_primitive(self, t):
        self._check_t(t)
        u = np.power(np.asarray(t, float) / self.lam, self.k)
        val = -(self.lam / self.k) * upper_incomplete_gamma(1.0 / self.k, u)
        return float(val) if np.isscalar(t) else val

    def horizon(self, eps=1e-12):
        return self.lam * (-math.log(eps)) ** (1.0 / self.k)

    def to_dict(self):
        return {"kind": "weibull", "lambda": self.lam, "k": self.k}


def survival_model_from_dict(d: dict) -> SurvivalModel:
    kind = str(d.get("kind", "")).lower()
    if kind in ("exponential", "exp"):
        if "kappa" not in d:
            raise ParameterError("exponential survival model requires 'kappa'")
        return Exponential(kappa=float(d["kappa"]))
    if kind == "weibull":
        lam = d.get("lambda", d.get("lam"))
        if lam is None or "k" not in d:
            raise ParameterError("weibull survival model requires 'lambda' and 'k'")
        return Weibull(lam=float(lam), k=float(d["k"]))
    raise ParameterError(f"unknown survival model kind: {d.get('kind')!r}")


def aux_integral_I(m: SurvivalModel, p: MarketParams, t):
    """Module-level convenience wrapper for the generator-U3 integral I(t)."""
    return m.aux_integral(p.r, t)
