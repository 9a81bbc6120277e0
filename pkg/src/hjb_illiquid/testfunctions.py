"""Smooth ansatz functions with analytically supplied partial derivatives.

Residual-identity and symmetry tests need arbitrary smooth inputs whose
jets are exact, so that 1e-9 identities measure formula errors rather than
discretization error.  The workhorse family is the exponential-polynomial
ansatz

    V(l, h, t) = -exp(-beta*l) * p(h, t),   p > 0,

which is admissible everywhere (V_l > 0, V_ll < 0).  Affine images of such
functions (scalings, l-shifts by functions of t, additive functions of t)
cover every one-parameter flow and equivalence map in the package.
"""

from __future__ import annotations

import numpy as np

from .jets import Jet, PsiJet, WJet

__all__ = [
    "SmoothFunction",
    "SmoothFunction2",
    "AffineImage",
    "FunctionSum",
    "exp_poly",
    "exp_poly_2d",
    "random_family",
    "random_family_2d",
    "psi_constant",
    "psi_power",
    "psi_linear_decay",
]


class SmoothFunction:
    """Scalar function of (l, h, t) with closed-form partials to second order."""

    def __init__(self, v, vl, vh, vt, vll, vlh, vhh, label=""):
        self._f = (v, vl, vh, vt, vll, vlh, vhh)
        self.label = label

    def value(self, l, h, t):
        return self._f[0](l, h, t)

    def jet(self, l, h, t) -> Jet:
        v, vl, vh, vt, vll, vlh, vhh = (f(l, h, t) for f in self._f)
        return Jet(l=l, h=h, t=t, V=v, V_l=vl, V_h=vh, V_t=vt,
                   V_ll=vll, V_lh=vlh, V_hh=vhh)

    def __add__(self, other):
        return FunctionSum(self, other)


class FunctionSum(SmoothFunction):
    def __init__(self, f, g):
        self.f, self.g = f, g
        self.label = f"({f.label}+{g.label})"

    def value(self, l, h, t):
        return self.f.value(l, h, t) + self.g.value(l, h, t)

    def jet(self, l, h, t):
        a, b = self.f.jet(l, h, t), self.g.jet(l, h, t)
        return Jet(l=l, h=h, t=t, V=a.V + b.V, V_l=a.V_l + b.V_l,
                   V_h=a.V_h + b.V_h, V_t=a.V_t + b.V_t,
                   V_ll=a.V_ll + b.V_ll, V_lh=a.V_lh + b.V_lh,
                   V_hh=a.V_hh + b.V_hh)


def _const_fn(value):
    return lambda t: np.zeros_like(np.asarray(t, float)) + value


class AffineImage(SmoothFunction):
    """cv * V(al*l + sl(t), ah*h, t + t0) + b(t), with exact transformed jet.

    sl and b must come with their derivatives slp and bp.  This covers
    one-parameter symmetry flows and the equivalence substitutions: all of
    them scale l/h/V, shift l by a function of t, shift t, and add a
    function of t.
    """

    def __init__(self, base, *, al=1.0, sl=0.0, slp=0.0, ah=1.0, t0=0.0,
                 cv=1.0, b=0.0, bp=0.0, label=""):
        self.base = base
        self.al, self.ah, self.t0, self.cv = al, ah, t0, cv
        self.sl = sl if callable(sl) else _const_fn(sl)
        self.slp = slp if callable(slp) else _const_fn(slp)
        self.b = b if callable(b) else _const_fn(b)
        self.bp = bp if callable(bp) else _const_fn(bp)
        self.label = label or f"affine({base.label})"

    def _inner(self, l, h, t):
        return self.al * l + self.sl(t), self.ah * h, t + self.t0

    def value(self, l, h, t):
        li, hi, ti = self._inner(l, h, t)
        return self.cv * self.base.value(li, hi, ti) + self.b(t)

    def jet(self, l, h, t):
        li, hi, ti = self._inner(l, h, t)
        j = self.base.jet(li, hi, ti)
        cv, al, ah = self.cv, self.al, self.ah
        return Jet(
            l=l, h=h, t=t,
            V=cv * j.V + self.b(t),
            V_l=cv * j.V_l * al,
            V_h=cv * j.V_h * ah,
            V_t=cv * (j.V_l * self.slp(t) + j.V_t) + self.bp(t),
            V_ll=cv * j.V_ll * al * al,
            V_lh=cv * j.V_lh * al * ah,
            V_hh=cv * j.V_hh * ah * ah,
        )


class SmoothFunction2:
    """Scalar function of (z, h) with closed-form partials to second order."""

    def __init__(self, w, wz, wh, wzz, wzh, whh, label=""):
        self._f = (w, wz, wh, wzz, wzh, whh)
        self.label = label

    def value(self, z, h):
        return self._f[0](z, h)

    def jet(self, z, h) -> WJet:
        w, wz, wh, wzz, wzh, whh = (f(z, h) for f in self._f)
        return WJet(z=z, h=h, W=w, W_z=wz, W_h=wh, W_zz=wzz, W_zh=wzh, W_hh=whh)


# ---------------------------------------------------------------------------
# Concrete families
# ---------------------------------------------------------------------------


def exp_poly(beta, c0, c1, c2, c3, c4, label="exp_poly"):
    """V = -exp(-beta*l) * p(h,t), p = c0 + c1*h + c2*h^2 + (c3 + c4*h)/(1+t).

    All coefficients positive keeps p > 0 on h > 0, t >= 0, hence V_l > 0
    and V_ll < 0 everywhere.
    """

    def p(h, t):
        return c0 + c1 * h + c2 * h * h + (c3 + c4 * h) / (1.0 + t)

    def p_h(h, t):
        return c1 + 2.0 * c2 * h + c4 / (1.0 + t)

    def p_t(h, t):
        return -(c3 + c4 * h) / (1.0 + t) ** 2

    E = lambda l: np.exp(-beta * l)
    return SmoothFunction(
        v=lambda l, h, t: -E(l) * p(h, t),
        vl=lambda l, h, t: beta * E(l) * p(h, t),
        vh=lambda l, h, t: -E(l) * p_h(h, t),
        vt=lambda l, h, t: -E(l) * p_t(h, t),
        vll=lambda l, h, t: -beta * beta * E(l) * p(h, t),
        vlh=lambda l, h, t: beta * E(l) * p_h(h, t),
        vhh=lambda l, h, t: -E(l) * 2.0 * c2,
        label=label,
    )


def exp_poly_2d(beta, c0, c1, c2, label="exp_poly_2d"):
    """W = -exp(-beta*z) * q(h), q = c0 + c1*h + c2*h^2, coefficients > 0."""

    q = lambda h: c0 + c1 * h + c2 * h * h
    qp = lambda h: c1 + 2.0 * c2 * h
    E = lambda z: np.exp(-beta * z)
    return SmoothFunction2(
        w=lambda z, h: -E(z) * q(h),
        wz=lambda z, h: beta * E(z) * q(h),
        wh=lambda z, h: -E(z) * qp(h),
        wzz=lambda z, h: -beta * beta * E(z) * q(h),
        wzh=lambda z, h: beta * E(z) * qp(h),
        whh=lambda z, h: -E(z) * 2.0 * c2,
        label=label,
    )


def random_family(rng, n, beta_range=(0.2, 1.2)):
    """n admissible exponential-polynomial test functions with random coefficients."""
    fns = []
    for i in range(n):
        beta = rng.uniform(*beta_range)
        c = rng.uniform(0.1, 1.0, size=5)
        fns.append(exp_poly(beta, *c, label=f"exp_poly[{i}]"))
    return fns


def random_family_2d(rng, n, beta_range=(0.2, 1.2)):
    fns = []
    for i in range(n):
        beta = rng.uniform(*beta_range)
        c = rng.uniform(0.1, 1.0, size=3)
        fns.append(exp_poly_2d(beta, *c, label=f"exp_poly_2d[{i}]"))
    return fns


# ---------------------------------------------------------------------------
# Exact solutions of the linear psi-PDE (functions of (h, t) only)
# ---------------------------------------------------------------------------


def psi_constant(c):
    """psi = c, trivially annihilated by the linear operator."""
    zero = lambda h, t: np.zeros_like(np.asarray(h, float) * np.asarray(t, float))
    return _PsiFunction(lambda h, t: zero(h, t) + c, zero, zero, zero, label="psi_const")


def psi_power(p):
    """psi = h^q with the indicial exponent q = 1 - 2(mu-delta)/eta^2."""
    q = 1.0 - 2.0 * (p.mu - p.delta) / p.eta**2
    zero = lambda h, t: np.zeros_like(np.asarray(h, float) * np.asarray(t, float))
    return _PsiFunction(
        lambda h, t: np.power(h, q) + 0.0 * np.asarray(t, float),
        lambda h, t: q * np.power(h, q - 1.0) + 0.0 * np.asarray(t, float),
        zero,
        lambda h, t: q * (q - 1.0) * np.power(h, q - 2.0) + 0.0 * np.asarray(t, float),
        label=f"psi_h^{q:.3g}",
    )


def psi_linear_decay(p):
    """psi = h * exp(-(mu-delta) t), another closed-form solution."""
    b = p.mu - p.delta
    zero = lambda h, t: np.zeros_like(np.asarray(h, float) * np.asarray(t, float))
    return _PsiFunction(
        lambda h, t: h * np.exp(-b * t),
        lambda h, t: np.exp(-b * t) + 0.0 * np.asarray(h, float),
        lambda h, t: -b * h * np.exp(-b * t),
        zero,
        label="psi_h_decay",
    )


class _PsiFunction(SmoothFunction):
    """Function of (h, t) exposed with the 3D jet interface (l-independent)."""

    def __init__(self, psi, psi_h, psi_t, psi_hh, label=""):
        self.psi, self.psi_h, self.psi_t, self.psi_hh = psi, psi_h, psi_t, psi_hh
        self.label = label

    def value(self, l, h, t):
        return self.psi(h, t)

    def jet(self, l, h, t):
        zero = np.zeros_like(np.asarray(l, float) + np.asarray(h, float)
                             + np.asarray(t, float))
        return Jet(l=l, h=h, t=t, V=self.psi(h, t) + zero,
                   V_l=zero, V_h=self.psi_h(h, t) + zero,
                   V_t=self.psi_t(h, t) + zero, V_ll=zero, V_lh=zero,
                   V_hh=self.psi_hh(h, t) + zero)

    def psi_jet(self, h, t) -> PsiJet:
        return PsiJet(h=h, t=t, psi=self.psi(h, t), psi_h=self.psi_h(h, t),
                      psi_t=self.psi_t(h, t), psi_hh=self.psi_hh(h, t))
