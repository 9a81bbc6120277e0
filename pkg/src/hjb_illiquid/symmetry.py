"""Executable Lie point symmetries of the maximized HJB equations.

A generator is a vector field

    X = xi1 d/dl + xi2 d/dh + xi3 d/dt + eta1 d/dV

with coefficient functions of (l, h, t, V) carrying closed-form first
partials, so brackets [X, Y] = X(Y_i) - Y(X_i) are exact.  Every catalog
field also carries its one-parameter flow in closed form as an affine
image of the input function, which is what the residual-covariance
certificate and the equivalence maps consume.

Catalogs
--------
l4_expn / l4_expp    four generators each, nonzero brackets
                     [U1,U2]=U2 and [U3,U4]=U4 (type A2+A2)
l3_hara1 / l3_hara2  three generators, [U1,U3]=gamma*U1, [U2,U3]=U2
l4_hara2_exp         adds U4 = d/dt - kappa*V d/dV (exponential survival only)
limit_catalog        the gamma->infinity limit set, a strict 3-element
                     subset of l4_expn's generators
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .model import Exponential, MarketParams, SurvivalModel
from .testfunctions import AffineImage, SmoothFunction

__all__ = [
    "Coef",
    "VectorField",
    "AlgebraCatalog",
    "bracket",
    "combination",
    "flow",
    "sample_points",
    "fields_max_deviation",
    "structure_report",
    "jacobi_report",
    "structural_form_check",
    "residual_covariance_check",
    "l4_expn",
    "l4_expp",
    "l3_hara1",
    "l3_hara2",
    "l4_hara2_exp",
    "limit_catalog",
    "hara_limit_generators",
    "EquivalenceMap",
    "map_expp_to_expn",
    "map_hara1_to_hara2",
    "psi_field",
]

_FD_STEP = 1e-6


def _fd_grad(val):
    """Central-difference gradient of a scalar coefficient function."""

    def grad(l, h, t, V):
        out = []
        x = [l, h, t, V]
        for i in range(4):
            s = _FD_STEP * (1.0 + abs(x[i]))
            xp, xm = list(x), list(x)
            xp[i] += s
            xm[i] -= s
            out.append((val(*xp) - val(*xm)) / (2.0 * s))
        return tuple(out)

    return grad


class Coef:
    """Scalar coefficient of a generator: value and first partials in (l,h,t,V)."""

    def __init__(self, val, grad=None):
        self._val = val
        self._grad = grad if grad is not None else _fd_grad(val)

    def __call__(self, l, h, t, V):
        return self._val(l, h, t, V)

    def grad(self, l, h, t, V):
        return self._grad(l, h, t, V)

    # -- constructors -------------------------------------------------------
    @staticmethod
    def zero():
        return Coef(lambda l, h, t, V: 0.0, lambda l, h, t, V: (0.0, 0.0, 0.0, 0.0))

    @staticmethod
    def const(c):
        c = float(c)
        return Coef(lambda l, h, t, V: c, lambda l, h, t, V: (0.0, 0.0, 0.0, 0.0))

    @staticmethod
    def of_t(f, fp):
        """Coefficient depending on t only, with derivative fp = df/dt."""
        return Coef(lambda l, h, t, V: f(t),
                    lambda l, h, t, V: (0.0, 0.0, fp(t), 0.0))

    @staticmethod
    def linear(cl=0.0, ch=0.0, cV=0.0, f=None, fp=None):
        """cl*l + ch*h + cV*V + f(t)."""
        f = f or (lambda t: 0.0)
        fp = fp or (lambda t: 0.0)
        return Coef(lambda l, h, t, V: cl * l + ch * h + cV * V + f(t),
                    lambda l, h, t, V: (cl, ch, fp(t), cV))


class VectorField:
    """Generator with components (xi1, xi2, xi3, eta1) acting on (l, h, t, V)."""

    def __init__(self, xi1, xi2, xi3, eta1, label="", flow_fn=None):
        self.comp = (xi1, xi2, xi3, eta1)
        self.label = label
        self._flow_fn = flow_fn

    def coeffs(self, l, h, t, V):
        return np.array([c(l, h, t, V) for c in self.comp])

    def has_flow(self) -> bool:
        return self._flow_fn is not None

    def flow(self, eps: float, fn: SmoothFunction) -> AffineImage:
        """Closed-form one-parameter flow applied to a function of (l, h, t)."""
        if self._flow_fn is None:
            raise ParameterError(
                f"no closed-form flow attached to field {self.label!r}; "
                "general flow integration is out of scope")
        return self._flow_fn(eps, fn)

    def __repr__(self):
        return f"VectorField({self.label})"


def flow(X: VectorField, eps: float, fn: SmoothFunction) -> AffineImage:
    return X.flow(eps, fn)


def bracket(X: VectorField, Y: VectorField) -> VectorField:
    """Commutator [X, Y], componentwise X(Y_i) - Y(X_i)."""

    def make(i):
        def val(l, h, t, V):
            args = (l, h, t, V)
            xv = [c(*args) for c in X.comp]
            yv = [c(*args) for c in Y.comp]
            gy = Y.comp[i].grad(*args)
            gx = X.comp[i].grad(*args)
            return sum(xv[j] * gy[j] - yv[j] * gx[j] for j in range(4))

        return Coef(val)

    return VectorField(*(make(i) for i in range(4)),
                       label=f"[{X.label},{Y.label}]")


def combination(fields, coeffs, label="") -> VectorField:
    """Constant-coefficient linear combination of generators."""

    def make(i):
        def val(l, h, t, V):
            return sum(c * f.comp[i](l, h, t, V) for f, c in zip(fields, coeffs))

        def grad(l, h, t, V):
            gs = [f.comp[i].grad(l, h, t, V) for f in fields]
            return tuple(sum(c * g[j] for c, g in zip(coeffs, gs)) for j in range(4))

        return Coef(val, grad)

    return VectorField(*(make(i) for i in range(4)), label=label)


ZERO_FIELD = VectorField(Coef.zero(), Coef.zero(), Coef.zero(), Coef.zero(),
                         label="0")


# ---------------------------------------------------------------------------
# Sampling and comparison helpers
# ---------------------------------------------------------------------------


def sample_points(rng, n, t_range=(0.2, 3.0)):
    """Random jet-space base points (l, h, t, V) with h > 0."""
    return [(rng.uniform(-2.0, 2.0), rng.uniform(0.3, 3.0),
             rng.uniform(*t_range), rng.uniform(-3.0, 3.0))
            for _ in range(n)]


def fields_max_deviation(X: VectorField, Y: VectorField, points) -> float:
    """Max relative componentwise deviation of two fields over sample points."""
    dev = 0.0
    for pt in points:
        cx, cy = X.coeffs(*pt), Y.coeffs(*pt)
        scale = max(1.0, float(np.max(np.abs(cx))), float(np.max(np.abs(cy))))
        dev = max(dev, float(np.max(np.abs(cx - cy))) / scale)
    return dev


@dataclass
class AlgebraCatalog:
    """Immutable set of generators with expected structure constants.

    structure maps 1-based pairs (i, j), i < j, to {k: c} meaning
    [U_i, U_j] = sum_k c * U_k; absent pairs bracket to zero.
    """

    name: str
    fields: tuple
    structure: dict = field(default_factory=dict)

    def expected_bracket(self, i: int, j: int) -> VectorField:
        combo = self.structure.get((i, j), {})
        if not combo:
            return ZERO_FIELD
        ks = sorted(combo)
        return combination([self.fields[k - 1] for k in ks],
                           [combo[k] for k in ks],
                           label=f"expected[{i},{j}]")

    def __len__(self):
        return len(self.fields)


def structure_report(catalog: AlgebraCatalog, rng, n_points=100) -> dict:
    """Compare every pairwise bracket against the expected structure constants."""
    points = sample_points(rng, n_points)
    pairs = {}
    worst = 0.0
    m = len(catalog)
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            br = bracket(catalog.fields[i - 1], catalog.fields[j - 1])
            dev = fields_max_deviation(br, catalog.expected_bracket(i, j), points)
            pairs[f"[{i},{j}]"] = dev
            worst = max(worst, dev)
    return {"catalog": catalog.name, "pairs": pairs, "max_dev": worst,
            "ok": bool(worst <= 1e-9)}


def jacobi_report(catalog: AlgebraCatalog, rng, n_points=20, tol=1e-7) -> dict:
    """Numerical Jacobi identity over all generator triples.

    Outer brackets differentiate the inner-bracket coefficients by central
    differences, so the tolerance is looser than for structure constants.
    """
    points = sample_points(rng, n_points)
    m = len(catalog)
    worst = 0.0
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                X, Y, Z = (catalog.fields[idx] for idx in (i, j, k))
                total = combination(
                    [bracket(bracket(X, Y), Z),
                     bracket(bracket(Y, Z), X),
                     bracket(bracket(Z, X), Y)],
                    [1.0, 1.0, 1.0], label="jacobi")
                worst = max(worst, fields_max_deviation(total, ZERO_FIELD, points))
    return {"catalog": catalog.name, "max_dev": worst, "ok": bool(worst <= tol)}


def structural_form_check(X: VectorField, rng, n_points=25, tol=1e-7) -> dict:
    """Check the determining-system structure of an admitted generator:
    xi1 linear in l, xi2 independent of (l, V), xi3 a function of t only,
    eta1 affine in V.
    """
    worst = 0.0
    for (l, h, t, V) in sample_points(rng, n_points):
        d = 0.3
        xi1, xi2, xi3, eta1 = X.comp
        # second difference in l of xi1
        worst = max(worst, abs(xi1(l + d, h, t, V) - 2 * xi1(l, h, t, V)
                               + xi1(l - d, h, t, V)))
        # xi2 flat in l and V
        worst = max(worst, abs(xi2(l + d, h, t, V) - xi2(l, h, t, V)))
        worst = max(worst, abs(xi2(l, h, t, V + d) - xi2(l, h, t, V)))
        # xi3 flat in l, h, V
        worst = max(worst, abs(xi3(l + d, h, t, V) - xi3(l, h, t, V)))
        worst = max(worst, abs(xi3(l, h + d, t, V) - xi3(l, h, t, V)))
        worst = max(worst, abs(xi3(l, h, t, V + d) - xi3(l, h, t, V)))
        # second difference in V of eta1
        worst = max(worst, abs(eta1(l, h, t, V + d) - 2 * eta1(l, h, t, V)
                               + eta1(l, h, t, V - d)))
    return {"field": X.label, "max_dev": worst, "ok": bool(worst <= tol)}


def residual_covariance_check(X: VectorField, pde, V: SmoothFunction,
                              eps: float, rng=None, n_t=10, n_per_t=12,
                              t_range=(0.5, 2.5), rel_tol=1e-7) -> dict:
    """Executable symmetry certificate for one generator and one residual.

    Transforms V by the flow of X, evaluates ratio
    rho(point) = residual[flow(X, eps, V)](point) / residual[V](pulled-back point)
    and reports whether rho depends only on (t, eps) -- i.e. is constant
    across the (l, h, V) directions at each fixed t.

    pde: callable Jet -> residual value.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    Vt = X.flow(eps, V)
    # flows that do not move the base point (e.g. psi d/dV) return plain
    # sums without a point map; the pull-back is then the identity
    inner = getattr(Vt, "_inner", lambda l, h, t: (l, h, t))
    groups = []
    n_used = 0
    max_spread = 0.0
    for _ in range(n_t):
        t = rng.uniform(*t_range)
        ratios = []
        for _ in range(n_per_t):
            l = rng.uniform(-1.5, 1.5)
            h = rng.uniform(0.4, 2.5)
            num = pde(Vt.jet(l, h, t))
            li, hi, ti = inner(l, h, t)
            den = pde(V.jet(li, hi, ti))
            if abs(den) > 1e-6:
                ratios.append(num / den)
        if ratios:
            n_used += len(ratios)
            mean = float(np.mean(ratios))
            spread = float(np.max(np.abs(np.asarray(ratios) - mean))
                           / max(1.0, abs(mean)))
            max_spread = max(max_spread, spread)
            groups.append({"t": t, "multiplier": mean, "spread": spread})
    if n_used == 0:
        return {"field": X.label, "inconclusive": True,
                "multiplier_constancy": False, "max_dev": math.nan}
    return {"field": X.label, "inconclusive": False,
            "multiplier_constancy": bool(max_spread <= rel_tol),
            "max_dev": max_spread, "n_points": n_used, "groups": groups}


# ---------------------------------------------------------------------------
# Catalogs
# ---------------------------------------------------------------------------


def _u2_dV(m=None):
    return VectorField(Coef.zero(), Coef.zero(), Coef.zero(), Coef.const(1.0),
                       label="dV",
                       flow_fn=lambda eps, fn: AffineImage(fn, b=eps))


def _u4_exp_shift(p: MarketParams, label="U4"):
    r = p.r
    return VectorField(
        Coef.of_t(lambda t: math.exp(r * t), lambda t: r * math.exp(r * t)),
        Coef.zero(), Coef.zero(), Coef.zero(), label=label,
        flow_fn=lambda eps, fn: AffineImage(
            fn, sl=lambda t: -eps * np.exp(r * t),
            slp=lambda t: -eps * r * np.exp(r * t)))


def _u3_time_translation(p: MarketParams, m: SurvivalModel, eta1=None,
                         b_fn=None, label="U3"):
    """-(I(t)/(ar)) d/dl + (1/r) d/dt [+ eta1 d/dV], with its closed-form flow.

    I'(t) = r I(t) + d/dt ln Phibar(t).  The flow shifts t by -eps/r and l
    by the corresponding increment of the I-primitive; it is defined for
    t >= eps/r (the shifted time must stay non-negative).
    """
    ar = p.a * p.r
    r = p.r

    def I(t):
        return m.aux_integral(r, t)

    xi1 = Coef.of_t(lambda t: -I(t) / ar,
                    lambda t: -(r * I(t) + m.log_survival_derivative(t)) / ar)

    def flow_fn(eps, fn):
        dt = eps / r

        def sl(t):
            return (m.aux_integral_primitive(r, t)
                    - m.aux_integral_primitive(r, t - dt)) / p.a

        def slp(t):
            return (I(t) - I(t - dt)) / p.a

        kwargs = {}
        if b_fn is not None:
            kwargs = dict(b=lambda t: b_fn(t, dt), bp=lambda t: b_fn(t, dt, True))
        return AffineImage(fn, t0=-dt, sl=sl, slp=slp, **kwargs)

    return VectorField(xi1, Coef.zero(), Coef.const(1.0 / r),
                       eta1 if eta1 is not None else Coef.zero(),
                       label=label, flow_fn=flow_fn)


def l4_expn(p: MarketParams, m: SurvivalModel) -> AlgebraCatalog:
    ar = p.a * p.r

    u1 = VectorField(
        Coef.const(1.0 / ar), Coef.zero(), Coef.zero(),
        Coef.linear(cV=-1.0), label="U1_EXPn",
        flow_fn=lambda eps, fn: AffineImage(fn, sl=-eps / ar, cv=math.exp(-eps)))
    u2 = _u2_dV()
    u2.label = "U2_EXPn"
    u3 = _u3_time_translation(p, m, label="U3_EXPn")
    u4 = _u4_exp_shift(p, label="U4_EXPn")
    return AlgebraCatalog("L4_EXPn", (u1, u2, u3, u4),
                          {(1, 2): {2: 1.0}, (3, 4): {4: 1.0}})


def l4_expp(p: MarketParams, m: SurvivalModel) -> AlgebraCatalog:
    ar = p.a * p.r

    def F(t):
        return m.survival_primitive(t)

    u1 = VectorField(
        Coef.const(1.0 / ar), Coef.zero(), Coef.zero(),
        Coef.linear(cV=-1.0, f=lambda t: -F(t) / p.a,
                    fp=lambda t: -m.survival(t) / p.a),
        label="U1_EXPp",
        flow_fn=lambda eps, fn: AffineImage(
            fn, sl=-eps / ar, cv=math.exp(-eps),
            b=lambda t: -(1.0 - math.exp(-eps)) * F(t) / p.a,
            bp=lambda t: -(1.0 - math.exp(-eps)) * m.survival(t) / p.a))
    u2 = _u2_dV()
    u2.label = "U2_EXPp"

    def u3_b(t, dt, deriv=False):
        if deriv:
            return -(m.survival(t) - m.survival(t - dt)) / p.a
        return -(F(t) - F(t - dt)) / p.a

    eta3 = Coef.of_t(lambda t: -m.survival(t) / ar,
                     lambda t: -m.survival(t) * m.log_survival_derivative(t) / ar)
    u3 = _u3_time_translation(p, m, eta1=eta3, b_fn=u3_b, label="U3_EXPp")
    u4 = _u4_exp_shift(p, label="U4_EXPp")
    return AlgebraCatalog("L4_EXPp", (u1, u2, u3, u4),
                          {(1, 2): {2: 1.0}, (3, 4): {4: 1.0}})


def l3_hara1(p: MarketParams, m: SurvivalModel, gamma: float) -> AlgebraCatalog:
    def F(t):
        return m.survival_primitive(t)

    u1 = _u2_dV()
    u1.label = "U1_HARA1"
    u2 = _u4_exp_shift(p, label="U2_HARA1")

    def flow3(eps, fn):
        scale = (math.exp(gamma * eps) - 1.0) / gamma
        return AffineImage(
            fn, al=math.exp(-eps), ah=math.exp(-eps), cv=math.exp(gamma * eps),
            b=lambda t: -(1.0 - gamma) * scale * F(t),
            bp=lambda t: -(1.0 - gamma) * scale * m.survival(t))

    u3 = VectorField(
        Coef.linear(cl=1.0), Coef.linear(ch=1.0), Coef.zero(),
        Coef.linear(cV=gamma, f=lambda t: -(1.0 - gamma) * F(t),
                    fp=lambda t: -(1.0 - gamma) * m.survival(t)),
        label="U3_HARA1", flow_fn=flow3)
    return AlgebraCatalog("L3_HARA1", (u1, u2, u3),
                          {(1, 3): {1: gamma}, (2, 3): {2: 1.0}})


def _hara2_u3(p: MarketParams, gamma: float) -> VectorField:
    beta = (1.0 - gamma) / (p.a * p.r)

    def flow3(eps, fn):
        return AffineImage(fn, al=math.exp(-eps),
                           sl=(math.exp(-eps) - 1.0) * beta,
                           ah=math.exp(-eps), cv=math.exp(gamma * eps))

    return VectorField(
        Coef.linear(cl=1.0, f=lambda t: beta, fp=lambda t: 0.0),
        Coef.linear(ch=1.0), Coef.zero(), Coef.linear(cV=gamma),
        label="U3_HARA2", flow_fn=flow3)


def l3_hara2(p: MarketParams, m: SurvivalModel, gamma: float) -> AlgebraCatalog:
    u1 = _u2_dV()
    u1.label = "U1_HARA2"
    u2 = _u4_exp_shift(p, label="U2_HARA2")
    u3 = _hara2_u3(p, gamma)
    return AlgebraCatalog("L3_HARA2", (u1, u2, u3),
                          {(1, 3): {1: gamma}, (2, 3): {2: 1.0}})


def l4_hara2_exp(p: MarketParams, m: SurvivalModel, gamma: float) -> AlgebraCatalog:
    """Four-generator extension available only for exponential survival."""
    if not isinstance(m, Exponential):
        raise ParameterError(
            "the fourth HARA2 generator exists only for exponential survival")
    base = l3_hara2(p, m, gamma)
    kappa = m.kappa
    u4 = VectorField(
        Coef.zero(), Coef.zero(), Coef.const(1.0), Coef.linear(cV=-kappa),
        label="U4_HARA2",
        flow_fn=lambda eps, fn: AffineImage(fn, t0=-eps,
                                            cv=math.exp(-kappa * eps)))
    return AlgebraCatalog(
        "L4_HARA2_exp", base.fields + (u4,),
        {(1, 3): {1: gamma}, (2, 3): {2: 1.0},
         (1, 4): {1: -kappa}, (2, 4): {2: -p.r}})


def limit_catalog(p: MarketParams) -> AlgebraCatalog:
    """The gamma -> infinity limit set: 3 of the 4 EXPn generators."""
    ar = p.a * p.r
    u1 = _u2_dV()
    u1.label = "U1_limit"
    u2 = _u4_exp_shift(p, label="U2_limit")
    u3 = VectorField(Coef.const(1.0 / ar), Coef.zero(), Coef.zero(),
                     Coef.linear(cV=-1.0), label="U3_limit",
                     flow_fn=lambda eps, fn: AffineImage(
                         fn, sl=-eps / ar, cv=math.exp(-eps)))
    return AlgebraCatalog("L3_HARA2_limit", (u1, u2, u3),
                          {(1, 3): {1: -1.0}})


def hara_limit_generators(p: MarketParams, m: SurvivalModel, gamma: float) -> dict:
    """The gamma-dependent HARA2 generators, the rescaled third generator
    -(1/gamma) * U3, and the limit set.  gamma > 1 is allowed: this is the
    formal limit path demonstrating that only three generators survive.
    """
    finite = (l3_hara2(p, m, gamma).fields if 0.0 < gamma < 1.0
              else (_u2_dV(), _u4_exp_shift(p), _hara2_u3(p, gamma)))
    rescaled_u3 = combination([finite[2]], [-1.0 / gamma],
                              label=f"-U3/{gamma:g}")
    return {"gamma": gamma, "finite": finite, "rescaled_u3": rescaled_u3,
            "limit": limit_catalog(p)}


# ---------------------------------------------------------------------------
# Equivalence maps between the PDE problems
# ---------------------------------------------------------------------------


class EquivalenceMap:
    """Affine change of variables l -> l + s0, V -> V + G(t) between two
    residual problems, with function transport and generator pushforward."""

    def __init__(self, p: MarketParams, s0: float, G, Gp, label=""):
        self.p = p
        self.s0 = float(s0)
        self.G, self.Gp = G, Gp
        self.label = label

    def point(self, l, h, t):
        """Forward image of a base point."""
        return (l + self.s0, h, t)

    def point_inverse(self, l, h, t):
        return (l - self.s0, h, t)

    def transform(self, fn: SmoothFunction) -> AffineImage:
        """Target-side function: fn~(l,h,t) = fn(l - s0, h, t) + G(t)."""
        return AffineImage(fn, sl=-self.s0, b=self.G, bp=self.Gp,
                           label=f"{self.label}({fn.label})")

    def pushforward(self, X: VectorField) -> VectorField:
        """Generator in target coordinates: xi unchanged,
        eta~ = eta + xi3 * G'(t), all evaluated at the source point."""
        s0, G, Gp = self.s0, self.G, self.Gp

        def make(i):
            def val(l, h, t, V):
                src = (l - s0, h, t, V - G(t))
                out = X.comp[i](*src)
                if i == 3:
                    out += X.comp[2](*src) * Gp(t)
                return out

            return Coef(val)

        return VectorField(*(make(i) for i in range(4)),
                           label=f"push[{self.label}]({X.label})")


def map_expp_to_expn(p: MarketParams, m: SurvivalModel) -> EquivalenceMap:
    """Carries the positive-exponential problem to the negative-exponential
    one: l -> l + ln(a)/(ar), V -> V + F(t)/a with F the decaying
    antiderivative of the survival function.  The transported function
    satisfies residual_expn wherever the original satisfies residual_expp,
    and the residuals agree identically on arbitrary functions.
    """
    return EquivalenceMap(
        p, s0=math.log(p.a) / (p.a * p.r),
        G=lambda t: m.survival_primitive(t) / p.a,
        Gp=lambda t: m.survival(t) / p.a,
        label="expp_to_expn")


def map_hara1_to_hara2(p: MarketParams, m: SurvivalModel,
                       gamma: float) -> EquivalenceMap:
    """Carries the first HARA problem to the second:
    l -> l + (1-gamma)/(ar), V -> V - ((1-gamma)/gamma) F(t)."""
    if not 0.0 < gamma < 1.0:
        raise ParameterError(f"map requires 0 < gamma < 1, got {gamma}")
    c = (1.0 - gamma) / gamma
    return EquivalenceMap(
        p, s0=(1.0 - gamma) / (p.a * p.r),
        G=lambda t: -c * m.survival_primitive(t),
        Gp=lambda t: -c * m.survival(t),
        label="hara1_to_hara2")


def psi_field(psi_fn) -> VectorField:
    """The infinite-dimensional symmetry psi(h,t) d/dV for a solved psi."""

    def val(l, h, t, V):
        return float(psi_fn.value(l, h, t))

    return VectorField(Coef.zero(), Coef.zero(), Coef.zero(), Coef(val),
                       label=f"psi[{getattr(psi_fn, 'label', '')}]",
                       flow_fn=lambda eps, fn: fn + _scaled_psi(psi_fn, eps))


def _scaled_psi(psi_fn, eps):
    from .testfunctions import _PsiFunction

    return _PsiFunction(
        lambda h, t: eps * psi_fn.psi(h, t),
        lambda h, t: eps * psi_fn.psi_h(h, t),
        lambda h, t: eps * psi_fn.psi_t(h, t),
        lambda h, t: eps * psi_fn.psi_hh(h, t),
        label=f"{eps:g}*{psi_fn.label}")
