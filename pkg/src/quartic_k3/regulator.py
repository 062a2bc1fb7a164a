"""The regulator integral G(t) and the verification of D_t G = 1/(2 sqrt(t)(t + 1)).

G(t) = 2 int_{Gamma°} (z2^4 - f_t(z1))^(-3/4) dz1 dz2 over the part of the
quadrilateral |z2| <= z1 < r outside the pocket z2^4 <= f_t(z1).  By the
z2 -> -z2 symmetry this is 4 (K1 + K2) with

    K1 = {0 < z2 <= z1, 0 < z1 < alpha}, K2 = {0 < z2 <= z1, alpha < z1 < r, z2^4 > f_t(z1)}.

The map tau(z1, z2) = (2 z1^2/(2 z1 + t), z2^4/(z2^4 - f_t(z1))) sends K1 onto
the triangle Tri1 in the (x, p) plane and K2 onto Tri2 in the (x, q = 1/p)
plane; both triangles are independent of t, which is what makes
differentiation under the integral sign straightforward.

Only real t > 0 is supported here.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .family import make_member
from .maps import tau
from .numkit import (
    NO_WEIGHT,
    QuadratureResult,
    SingularWeight,
    fd_derivative,
    integrate_1d,
    integrate_2d_iterated,
)
from .poly import DiffOperator, Polynomial, PowerProduct, RationalFunction, op_apply_numeric, picard_fuchs_operator

F = Fraction
KINDS = ("Gamma_upper", "K1", "K2", "Tri1", "Tri2")

# inner p (or q) integrals: p^(-3/4) at 0, (1 - p)^(-1/2) at the bound when it approaches 1
W_INNER = SingularWeight(F(-3, 4), F(-1, 2))
W_TRI1 = SingularWeight(0, F(-1, 2))
W_TRI2 = SingularWeight(F(-1, 2), F(1, 2))


def _check_t(t) -> float:
    t = float(t)
    if not (math.isfinite(t) and t > 0):
        raise ValueError(f"t must be real and positive, got {t}")
    return t


def alpha(t: float) -> float:
    return (1 + math.sqrt(1 + 2 * t)) / 2


def r_value(t: float) -> float:
    return 1 + math.sqrt(1 + t)


def f_t(z1, t: float):
    return (2 * z1 + t) * (2 * z1 * z1 - 2 * z1 - t)


def tri1_bound(x):
    return (x / (2 - x)) ** 2


def tri2_bound(x):
    return ((2 - x) / x) ** 2


# -- regions ------------------------------------------------------------------------


@dataclass(frozen=True)
class RegionSpec:
    t: float
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown region kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "t", _check_t(self.t))

    @property
    def alpha(self) -> float:
        return alpha(self.t)

    @property
    def r(self) -> float:
        return r_value(self.t)

    def contains(self, a: float, b: float) -> bool:
        """Membership of (z1, z2) for the z-plane kinds, of (x, p) or (x, q) for Tri1, Tri2."""
        t = self.t
        if self.kind == "Tri1":
            return 0 < a < 1 and 0 < b <= tri1_bound(a)
        if self.kind == "Tri2":
            return 1 < a < 2 and 0 < b <= tri2_bound(a)
        z1, z2 = a, b
        if not (0 < z2 <= z1 and z2 ** 4 > f_t(z1, t)):
            return False
        if self.kind == "Gamma_upper":
            return 0 < z1 < self.r
        if self.kind == "K1":
            return 0 < z1 < self.alpha
        return self.alpha < z1 < self.r

    def boundary(self) -> dict:
        """Named boundary curves as callables of their natural parameter."""
        t = self.t
        if self.kind == "Tri1":
            return {"p_top": tri1_bound, "p_zero": lambda x: 0.0}
        if self.kind == "Tri2":
            return {"q_top": tri2_bound, "q_zero": lambda x: 0.0}
        return {
            "diagonal": lambda z1: z1,
            "pocket": lambda z1: max(f_t(z1, t), 0.0) ** 0.25,
            "axis": lambda z1: 0.0,
        }

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """n uniform interior points by rejection from the bounding box."""
        if self.kind in ("Tri1", "Tri2"):
            box = ((0.0, 1.0), (0.0, 1.0)) if self.kind == "Tri1" else ((1.0, 2.0), (0.0, 1.0))
        else:
            lo = 0.0 if self.kind in ("Gamma_upper", "K1") else self.alpha
            hi = self.alpha if self.kind == "K1" else self.r
            box = ((lo, hi), (0.0, hi))
        out = []
        while len(out) < n:
            a = rng.uniform(*box[0], size=4 * n)
            b = rng.uniform(*box[1], size=4 * n)
            out.extend((x, y) for x, y in zip(a, b) if self.contains(x, y))
        return np.array(out[:n])


def region_of(t: float, z1: float, z2: float) -> str | None:
    """'K1', 'K2' or None for a point of the upper half plane."""
    for kind in ("K1", "K2"):
        if RegionSpec(t, kind).contains(z1, z2):
            return kind
    return None


@dataclass(frozen=True)
class TauSamplingReport:
    t: float
    samples: int
    inside_failures: int
    boundary_residual: float

    @property
    def ok(self) -> bool:
        return self.inside_failures == 0 and self.boundary_residual <= 1e-8


def tau_sampling_check(t: float, n: int = 1000, seed: int = 0) -> TauSamplingReport:
    """tau(K1) in Tri1 and tau(K2) in Tri2 on n samples each; top edges z2 = z1 onto the triangle tops."""
    t = _check_t(t)
    m = make_member(t)
    rng = np.random.default_rng(seed)
    failures = 0
    for kind, target in (("K1", "Tri1"), ("K2", "Tri2")):
        tri = RegionSpec(t, target)
        for z1, z2 in RegionSpec(t, kind).sample(rng, n):
            img = tau(m, z1, z2)
            x = img.x.real
            second = img.p.real if target == "Tri1" else img.q.real
            if not tri.contains(x, second):
                failures += 1
    worst = 0.0
    a, r = alpha(t), r_value(t)
    for z1 in np.concatenate([rng.uniform(0, a, n // 2), rng.uniform(a, r, n // 2)]):
        img = tau(m, z1, z1)
        x = img.x.real
        if x < 1:
            worst = max(worst, abs(img.p.real - tri1_bound(x)))
        else:
            worst = max(worst, abs(img.q.real - tri2_bound(x)))
    return TauSamplingReport(t, 2 * n, failures, worst)


# -- G by direct integration over K1 and K2 ----------------------------------------------


def _k1_inner(t: float, sign: float):
    def g(z1, z2):
        return (z2 ** 4 - f_t(z1, t)) ** -0.75

    if sign > 0:
        return g, (lambda z1: (0.0, z1))
    return g, (lambda z1: (-z1, 0.0))


def _k2_inner(t: float):
    # z2^4 - f = s^4 turns dz2 (z2^4 - f)^(-3/4) into (s^4 + f)^(-3/4) ds, 0 < s <= |z1^2 - 2 z1 - t|^(1/2)
    def g(z1, s):
        return (s ** 4 + f_t(z1, t)) ** -0.75

    def bounds(z1):
        return 0.0, math.sqrt(abs(z1 * z1 - 2 * z1 - t))

    return g, bounds


def g_direct(t: float, tol: float = 1e-9, half: str = "upper") -> QuadratureResult:
    """4 (K1 + K2) by iterated quadrature over the slices (``half='lower'`` integrates z2 < 0 instead)."""
    t = _check_t(t)
    if half not in ("upper", "lower"):
        raise ValueError("half must be 'upper' or 'lower'")
    a, r = alpha(t), r_value(t)
    # the inner integrals blow up like |z1 - alpha|^(-1/2) and vanish like (r - z1)^(1/2)
    g1, b1 = _k1_inner(t, 1.0 if half == "upper" else -1.0)
    k1 = integrate_2d_iterated(g1, (0.0, a), b1, SingularWeight(0, F(-1, 2)), NO_WEIGHT, tol / 8)
    g2, b2 = _k2_inner(t)
    k2 = integrate_2d_iterated(g2, (a, r), b2, SingularWeight(F(-1, 2), F(1, 2)), NO_WEIGHT, tol / 8)
    return QuadratureResult(4 * (k1.value + k2.value), 4 * (k1.error_estimate + k2.error_estimate),
                            k1.nodes_used + k2.nodes_used)


# -- G over the triangles ------------------------------------------------------------------

X, T = Polynomial.var("x"), Polynomial.var("t")


def tri1_x_factor() -> PowerProduct:
    """x-dependent part of the Tri1 integrand: 1/(2 x^(1/2) (1 - x)^(1/2) (x + 2t)^(1/2))."""
    return PowerProduct.term(F(1, 2), [(X, F(-1, 2)), (1 - X, F(-1, 2)), (X + 2 * T, F(-1, 2))])


def tri2_x_factor() -> PowerProduct:
    return PowerProduct.term(F(1, 2), [(X, F(-1, 2)), (X - 1, F(-1, 2)), (X + 2 * T, F(-1, 2))])


def _p_density(p):
    return p ** -0.75 * (1 - p) ** -0.5


def inner_p_integral(bound: float, method: str = "weighted", tol: float = 1e-12) -> float:
    """int_0^bound p^(-3/4) (1 - p)^(-1/2) dp, with the weight engine or with p = s^4 written out."""
    if method == "weighted":
        return float(integrate_1d(_p_density, (0.0, bound), W_INNER, tol).value)
    if method == "substituted":
        def g(s):
            s = np.asarray(s, dtype=float)
            return 4 * (1 - s ** 4) ** -0.5

        w = SingularWeight(0, F(-1, 2)) if bound >= 1 else NO_WEIGHT
        return float(integrate_1d(g, (0.0, bound ** 0.25), w, tol).value)
    raise ValueError(f"unknown method {method!r}")


def _triangle_integral(x_factor, t: float, tol: float) -> QuadratureResult:
    """int over Tri1 plus int over Tri2 of x_factor(x, t) * q^(-3/4) (1 - q)^(-1/2)."""
    f1, f2 = x_factor

    def g1(x, p):
        return f1(x) * _p_density(p)

    def g2(x, q):
        return f2(x) * _p_density(q)

    r1 = integrate_2d_iterated(g1, (0.0, 1.0), lambda x: (0.0, tri1_bound(x)), W_TRI1, W_INNER, tol / 2)
    r2 = integrate_2d_iterated(g2, (1.0, 2.0), lambda x: (0.0, tri2_bound(x)), W_TRI2, W_INNER, tol / 2)
    return QuadratureResult(r1.value + r2.value, r1.error_estimate + r2.error_estimate,
                            r1.nodes_used + r2.nodes_used)


def _evaluator(e: PowerProduct, t: float):
    return lambda x: e.evaluate(x=x, t=t)


def g_triangles(t: float, tol: float = 1e-9) -> QuadratureResult:
    t = _check_t(t)
    return _triangle_integral((_evaluator(tri1_x_factor(), t), _evaluator(tri2_x_factor(), t)), t, tol)


# -- the inhomogeneous Picard-Fuchs equation ----------------------------------------------


def closed_form_rhs(t: float) -> float:
    t = _check_t(t)
    return 1 / (2 * math.sqrt(t) * (t + 1))


def rhs_integral(t: float, tol: float = 1e-12) -> QuadratureResult:
    """int_0^2 dx / (2 (x + 2t)^(3/2) (2 - x)^(1/2))."""
    t = _check_t(t)

    def g(x, dlo, dhi):
        return 1 / (2 * (x + 2 * t) ** 1.5 * np.sqrt(dhi))

    return integrate_1d(g, (0.0, 2.0), SingularWeight(0, F(-1, 2)), tol, offsets=True)


def verify_rhs_integral(t: float, tol: float = 1e-10) -> tuple:
    val = rhs_integral(t, tol / 10).value
    exact = closed_form_rhs(t)
    return val, exact, abs(val - exact) <= tol


@dataclass
class GReport:
    t: float
    G_direct: QuadratureResult | None
    G_triangles: QuadratureResult
    rhs: float
    Dt_G_under_integral: complex
    Dt_G_fd: complex | None
    stokes_lhs: float
    stokes_rhs: float
    oneD_closed_form: float
    constant: Fraction = F(-1, 4)
    notes: dict = field(default_factory=dict)

    @property
    def rel_err_under_integral(self) -> float:
        return abs(self.Dt_G_under_integral - self.rhs) / self.rhs

    @property
    def rel_err_fd(self) -> float:
        return abs(self.Dt_G_fd - self.rhs) / self.rhs if self.Dt_G_fd is not None else float("nan")

    @property
    def rel_err_cross(self) -> float:
        if self.G_direct is None:
            return float("nan")
        return abs(self.G_direct.value - self.G_triangles.value) / abs(self.G_triangles.value)

    def to_json(self) -> dict:
        def num(z):
            if z is None:
                return None
            z = complex(z)
            return z.real if z.imag == 0 else [z.real, z.imag]

        return {
            "t": self.t,
            "constant": str(self.constant),
            "G_direct": num(self.G_direct.value) if self.G_direct else None,
            "G_direct_error": self.G_direct.error_estimate if self.G_direct else None,
            "G_triangles": num(self.G_triangles.value),
            "G_triangles_error": self.G_triangles.error_estimate,
            "rhs": self.rhs,
            "Dt_G_under_integral": num(self.Dt_G_under_integral),
            "Dt_G_fd": num(self.Dt_G_fd),
            "rel_err_under_integral": self.rel_err_under_integral,
            "rel_err_fd": self.rel_err_fd if self.Dt_G_fd is not None else None,
            "rel_err_cross": self.rel_err_cross if self.G_direct else None,
            "stokes_lhs": self.stokes_lhs,
            "stokes_rhs": self.stokes_rhs,
            "oneD_closed_form": self.oneD_closed_form,
        }


def dt_g_under_integral(t: float, operator: DiffOperator | None = None, tol: float = 1e-10) -> complex:
    """Route (a): D_t applied exactly to the x-factors of the triangle integrands, then integrated."""
    t = _check_t(t)
    D = operator if operator is not None else picard_fuchs_operator()
    d1, d2 = D(tri1_x_factor()), D(tri2_x_factor())
    return _triangle_integral((_evaluator(d1, t), _evaluator(d2, t)), t, tol).value


def dt_g_fd(t: float, operator: DiffOperator | None = None, h: float = 1e-2, tol: float = 1e-10) -> complex:
    """Route (b): finite differences of g_triangles in t."""
    t = _check_t(t)
    if h >= t:
        raise ValueError(f"step {h} must be smaller than t = {t}")
    D = operator if operator is not None else picard_fuchs_operator()
    cache: dict = {}

    def G(s):
        if s not in cache:
            cache[s] = g_triangles(s, tol).value
        return cache[s]

    return op_apply_numeric(D, G, t, h)


def inhomogeneous_pf_check(t: float, tol: float = 1e-9, h: float = 1e-2, constant=F(-1, 4),
                           direct: bool = True, fd: bool = True) -> GReport:
    """Both routes for D_t G at t, with the constant term of D_t replaceable for mutation tests."""
    t = _check_t(t)
    D = picard_fuchs_operator(constant=constant)
    gd = g_direct(t, tol) if direct else None
    gt = g_triangles(t, tol)
    a = dt_g_under_integral(t, D, tol)
    b = dt_g_fd(t, D, h, min(tol, 1e-10)) if fd else None
    lhs, srhs, _ = stokes_boundary_check(t)
    return GReport(t, gd, gt, closed_form_rhs(t), a, b, lhs, srhs, closed_form_rhs(t), F(constant))


# -- the Stokes chain ------------------------------------------------------------------------


def stokes_one_form(x, p, t: float, upper: bool = False):
    """Coefficient F of the 1-form F dp whose exterior derivative is the D_t-transformed integrand.

    F = -x^(1/2) (1 - x)^(1/2) / (4 (x + 2t)^(3/2) p^(3/4) (1 - p)^(1/2)) on Tri1; on Tri2
    (``upper``, with p read as q) the factor (1 - x) becomes (x - 1).
    """
    one_minus = (x - 1) if upper else (1 - x)
    return -np.sqrt(x * one_minus) / (4 * (x + 2 * t) ** 1.5 * p ** 0.75 * np.sqrt(1 - p))


def potential(on_tri2: bool = False) -> PowerProduct:
    """Phi with D_t(x-factor) = d/dx Phi, i.e. -/+ x^(1/2) |1 - x|^(1/2) / (4 (x + 2t)^(3/2))."""
    if on_tri2:
        return PowerProduct.term(F(1, 4), [(X, F(1, 2)), (X - 1, F(1, 2)), (X + 2 * T, F(-3, 2))])
    return PowerProduct.term(F(-1, 4), [(X, F(1, 2)), (1 - X, F(1, 2)), (X + 2 * T, F(-3, 2))])


def potential_identities() -> tuple:
    """D_t of both triangle x-factors equals d/dx of the corresponding potential, exactly."""
    D = picard_fuchs_operator()
    return (D(tri1_x_factor()) == potential(False).derivative("x"),
            D(tri2_x_factor()) == potential(True).derivative("x"))


def stokes_lhs(t: float, tol: float = 1e-11) -> float:
    """Line integral of F dp along the triangle tops, in the orientation induced by the triangles.

    Tri1 top p = B(x) is traversed from x = 1 to x = 0, giving int_0^1 -F B' dx.
    Tri2 in the (x, q) plane is traversed the other way, giving int_1^2 F C' dx.
    """
    t = _check_t(t)

    def top1(x):
        x = np.asarray(x, dtype=float)
        b = tri1_bound(x)
        db = 4 * x / (2 - x) ** 3
        return -stokes_one_form(x, b, t) * db

    def top2(x):
        x = np.asarray(x, dtype=float)
        c = tri2_bound(x)
        dc = -4 * (2 - x) / x ** 3
        return stokes_one_form(x, c, t, upper=True) * dc

    # the pulled-back densities are smooth except for (2 - x)^(-1/2) at the far end of Tri2
    a = integrate_1d(top1, (0.0, 1.0), NO_WEIGHT, tol / 2)
    b = integrate_1d(top2, (1.0, 2.0), SingularWeight(0, F(-1, 2)), tol / 2)
    return float(a.value + b.value)


def stokes_boundary_check(t: float, tol: float = 1e-11) -> tuple:
    lhs = stokes_lhs(t, tol)
    rhs = float(rhs_integral(t, tol).value)
    return lhs, rhs, abs(lhs - rhs)


def edge_terms(t: float, eps: float, tol: float = 1e-12) -> dict:
    """Integrals of F dp over the edges x = eps, p = eps, x = 1 - eps of Tri1 and x = 1 + eps of Tri2."""
    t = _check_t(t)

    def vertical(x0: float, bound: float, upper: bool) -> float:
        def g(p):
            return stokes_one_form(x0, np.asarray(p, dtype=float), t, upper)

        return abs(float(integrate_1d(g, (0.0, bound), W_INNER, tol).value))

    return {
        "x=eps": vertical(eps, tri1_bound(eps), False),
        # p is constant along this edge, so dp pulls back to zero
        "p=eps": 0.0,
        "x=1-eps": vertical(1 - eps, tri1_bound(1 - eps), False),
        "x=1+eps": vertical(1 + eps, tri2_bound(1 + eps), True),
    }


def u_substitution_check(t) -> dict:
    """Exact identities behind int_0^2 dx/(2(x+2t)^(3/2)(2-x)^(1/2)) = int_0^(1/sqrt t) du/(2(t+1)).

    With u = sqrt((2 - x)/(x + 2t)), x(u) = (2 - 2 t u^2)/(1 + u^2).  Checked as
    rational-function identities in u (t is a rational number here): the
    inverse relation, dx/du, the squared transformed density, and the
    endpoint values u(0)^2 = 1/t, u(2) = 0.
    """
    t = F(t)
    if t <= 0:
        raise ValueError("t must be positive")
    u = Polynomial.var("u")
    one = Polynomial.const(1)
    x = RationalFunction(2 - 2 * t * u * u, 1 + u * u)
    inverse = (RationalFunction(2 - X) / RationalFunction(X + 2 * t)).substitute({"x": x}) == RationalFunction(u * u)
    dxdu = x.derivative("u")
    jac = dxdu == RationalFunction(-4 * (t + 1) * u, (1 + u * u) ** 2)
    # density^2 * (dx/du)^2 = 1/(4 (t+1)^2), i.e. the u-density is constant
    dens_sq = RationalFunction(one, 4 * (X + 2 * t) ** 3 * (2 - X)).substitute({"x": x})
    constant = dens_sq * dxdu * dxdu == RationalFunction(Polynomial.const(1 / (4 * (t + 1) ** 2)))
    u0_sq = (2 - F(0)) / (F(0) + 2 * t)
    u2_sq = (2 - F(2)) / (F(2) + 2 * t)
    return {
        "inverse": inverse,
        "jacobian": jac,
        "constant_density": constant,
        "u(0)^2 = 1/t": u0_sq == 1 / t,
        "u(2) = 0": u2_sq == 0,
        "value": 1 / (2 * math.sqrt(t) * (t + 1)),
    }


# -- plotting data ----------------------------------------------------------------------------


def emit_region_data(t: float, resolution: int = 200) -> str:
    """CSV text with membership samples and boundary curves of K1, K2, Tri1 and Tri2."""
    t = _check_t(t)
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    a, r = alpha(t), r_value(t)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["region", "a", "b", "inside"])
    specs = {k: RegionSpec(t, k) for k in KINDS}
    zs = np.linspace(0, r, resolution + 1)[1:]
    for z1 in zs:
        for z2 in zs:
            for kind in ("K1", "K2"):
                w.writerow([kind, f"{z1:.10g}", f"{z2:.10g}", int(specs[kind].contains(z1, z2))])
    us = np.linspace(0, 1, resolution + 1)[1:]
    for x in np.linspace(0, 2, 2 * resolution + 1)[1:-1]:
        for y in us:
            kind = "Tri1" if x < 1 else "Tri2"
            w.writerow([kind, f"{x:.10g}", f"{y:.10g}", int(specs[kind].contains(x, y))])
    for z1 in np.linspace(0, r, resolution + 1):
        w.writerow(["curve:z2=z1", f"{z1:.10g}", f"{z1:.10g}", ""])
        w.writerow(["curve:z2=-z1", f"{z1:.10g}", f"{-z1:.10g}", ""])
        if z1 >= a:
            w.writerow(["curve:z2=f^(1/4)", f"{z1:.10g}", f"{max(f_t(z1, t), 0.0) ** 0.25:.10g}", ""])
    for x in np.linspace(0, 2, 2 * resolution + 1):
        if x <= 1:
            w.writerow(["curve:p=(x/(2-x))^2", f"{x:.10g}", f"{tri1_bound(x):.10g}", ""])
        if x >= 1:
            w.writerow(["curve:q=((2-x)/x)^2", f"{x:.10g}", f"{tri2_bound(x):.10g}", ""])
    return buf.getvalue()
