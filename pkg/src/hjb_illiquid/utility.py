"""Utility families, risk tolerance, and the limits connecting them.

Five families: two HARA forms (differing only in how the limit parameter
enters), logarithmic, and the negative/positive exponential utilities.
Risk tolerance -U'/U'' is evaluated from closed forms, not by numerical
differentiation; a finite-difference cross-check lives in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError

__all__ = [
    "UtilitySpec",
    "Hara1",
    "Hara2",
    "Log",
    "ExpNeg",
    "ExpPos",
    "utility_from_dict",
    "hara2_formula",
    "hara1_formula",
    "limit_check",
]


def _check_consumption(c, positive=False):
    arr = np.asarray(c)
    if np.any(arr < 0):
        raise DomainError("consumption must be non-negative")
    if positive and np.any(arr == 0):
        raise DomainError("consumption must be strictly positive for LOG utility")


class UtilitySpec:
    kind: str = ""

    def evaluate(self, c):
        raise NotImplementedError

    def marginal(self, c):
        """U'(c)."""
        raise NotImplementedError

    def risk_tolerance(self, c):
        """-U'(c)/U''(c), closed form."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Hara1(UtilitySpec):
    gamma: float
    kind = "HARA1"

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ParameterError(f"HARA requires 0 < gamma < 1, got {self.gamma}")

    def evaluate(self, c):
        _check_consumption(c)
        g = self.gamma
        return (1 - g) / g * (np.power(np.asarray(c, float) / (1 - g), g) - 1.0)

    def marginal(self, c):
        g = self.gamma
        return np.power(np.asarray(c, float) / (1 - g), g - 1.0)

    def risk_tolerance(self, c):
        return np.asarray(c, float) / (1.0 - self.gamma)

    def to_dict(self):
        return {"kind": "HARA1", "gamma": self.gamma}


@dataclass(frozen=True)
class Hara2(UtilitySpec):
    gamma: float
    a: float
    kind = "HARA2"

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ParameterError(f"HARA requires 0 < gamma < 1, got {self.gamma}")
        if not self.a > 0:
            raise ParameterError(f"a must be positive, got {self.a}")

    def evaluate(self, c):
        _check_consumption(c)
        return hara2_formula(self.gamma, self.a, c)

    def marginal(self, c):
        g, a = self.gamma, self.a
        return a * np.power(a * np.asarray(c, float) / (1 - g) + 1.0, g - 1.0)

    def risk_tolerance(self, c):
        return np.asarray(c, float) / (1.0 - self.gamma) + 1.0 / self.a

    def to_dict(self):
        return {"kind": "HARA2", "gamma": self.gamma, "a": self.a}


@dataclass(frozen=True)
class Log(UtilitySpec):
    kind = "LOG"

    def evaluate(self, c):
        _check_consumption(c, positive=True)
        return np.log(np.asarray(c, float))

    def marginal(self, c):
        return 1.0 / np.asarray(c, float)

    def risk_tolerance(self, c):
        return np.asarray(c, float)

    def to_dict(self):
        return {"kind": "LOG"}


@dataclass(frozen=True)
class ExpNeg(UtilitySpec):
    a: float
    kind = "EXPn"

    def __post_init__(self):
        if not self.a > 0:
            raise ParameterError(f"a must be positive, got {self.a}")

    def evaluate(self, c):
        _check_consumption(c)
        return -np.exp(-self.a * np.asarray(c, float))

    def marginal(self, c):
        return self.a * np.exp(-self.a * np.asarray(c, float))

    def risk_tolerance(self, c):
        c = np.asarray(c, float)
        return np.full_like(c, 1.0 / self.a) if c.ndim else 1.0 / self.a

    def to_dict(self):
        return {"kind": "EXPn", "a": self.a}


@dataclass(frozen=True)
class ExpPos(UtilitySpec):
    a: float
    kind = "EXPp"

    def __post_init__(self):
        if not self.a > 0:
            raise ParameterError(f"a must be positive, got {self.a}")

    def evaluate(self, c):
        _check_consumption(c)
        return (1.0 - np.exp(-self.a * np.asarray(c, float))) / self.a

    def marginal(self, c):
        return np.exp(-self.a * np.asarray(c, float))

    def risk_tolerance(self, c):
        c = np.asarray(c, float)
        return np.full_like(c, 1.0 / self.a) if c.ndim else 1.0 / self.a

    def to_dict(self):
        return {"kind": "EXPp", "a": self.a}


_KINDS = {"HARA1": Hara1, "HARA2": Hara2, "LOG": Log, "EXPn": ExpNeg, "EXPp": ExpPos}


def utility_from_dict(d: dict) -> UtilitySpec:
    kind = d.get("kind")
    if kind not in _KINDS:
        raise ParameterError(f"unknown utility kind: {kind!r}")
    kwargs = {k: float(v) for k, v in d.items() if k != "kind"}
    return _KINDS[kind](**kwargs)


# ---------------------------------------------------------------------------
# Limit relationships
# ---------------------------------------------------------------------------


def hara2_formula(gamma, a, c):
    """(1-gamma)/gamma * (a*c/(1-gamma) + 1)**gamma, without range validation.

    Admits gamma outside (0, 1) for the formal limit path gamma -> infinity.
    """
    c = np.asarray(c, float)
    return (1 - gamma) / gamma * np.power(a * c / (1 - gamma) + 1.0, gamma)


def hara1_formula(gamma, c):
    """(1-gamma)/gamma * ((c/(1-gamma))**gamma - 1), without range validation."""
    c = np.asarray(c, float)
    return (1 - gamma) / gamma * (np.power(c / (1 - gamma), gamma) - 1.0)


def limit_check(family: str, c_grid, *, gamma=None, a=1.0) -> dict:
    """Evaluate one of the limiting relationships on a consumption grid.

    family: 'hara2_to_expn' (gamma -> infinity), 'hara1_to_log' (gamma -> 0),
    or 'hara2_a_to_zero' (degenerate; flags non-convergence).  Returns a
    report dict with the maximum deviation; used only by tests and `verify`.
    """
    c = np.asarray(c_grid, float)
    if family == "hara2_to_expn":
        g = 1e4 if gamma is None else gamma
        dev = np.max(np.abs(hara2_formula(g, a, c) - (-np.exp(-a * c))))
        return {"family": family, "gamma": g, "max_deviation": float(dev),
                "converged": bool(dev < 10.0 / g)}
    if family == "hara1_to_log":
        g = 1e-6 if gamma is None else gamma
        c_pos = c[c > 0]
        dev = np.max(np.abs(hara1_formula(g, c_pos) - np.log(c_pos)))
        return {"family": family, "gamma": g, "max_deviation": float(dev),
                "converged": bool(dev < 100.0 * g * (1.0 + np.max(np.abs(np.log(c_pos))) ** 2))}
    if family == "hara2_a_to_zero":
        g = 0.5 if gamma is None else gamma
        # a*c/(1-gamma) -> 0 pointwise, so the formula collapses to the
        # c-independent constant (1-g)/g: no utility function in the limit.
        devs = [float(np.max(np.abs(hara2_formula(g, aa, c) - (1 - g) / g)))
                for aa in (1e-3, 1e-6)]
        return {"family": family, "gamma": g, "max_deviation": devs[-1],
                "converged": False,
                "reason": "limit degenerates to a constant, not a utility"}
    raise ParameterError(f"unknown limit family: {family!r}")
