"""The maps psi: C_t -> E_lambda, phi: C_t x F -> X_t and tau, with pullback checks.

Affine charts: C_t is v2^4 = f_t(v1), the Fermat curve F is u2^4 = u1^4 - 1,
E_lambda is y^2 = x(x-1)(x-lambda) with lambda = -2t, and X_t is
w^4 = z2^4 - f_t(z1).  Every identity is checked twice: exactly, with
polynomials reduced modulo the curve relations, and numerically at seeded
random points with derivatives from finite differences.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .family import FamilyMember, f_polynomial
from .numkit import fd_derivative
from .poly import Polynomial, RationalFunction

POINT_TOL = 1e-10
CURVES = ("C", "F", "E", "X")


class PoleOfMap(ZeroDivisionError):
    pass


class Indeterminacy(ValueError):
    """The point lies in the base locus U0 = V2 = 0 of phi."""


class NotOnCurve(ValueError):
    pass


@dataclass(frozen=True)
class CurvePoint:
    which: str
    coords: tuple
    residual: float

    def __iter__(self):
        return iter(self.coords)


def _rel(lhs, rhs) -> float:
    lhs, rhs = complex(lhs), complex(rhs)
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def curve_residual(m: FamilyMember, which: str, coords) -> float:
    c = [complex(x) for x in coords]
    t = complex(m.t)
    if which == "C":
        v1, v2 = c
        return _rel(v2 ** 4, m.f(v1))
    if which == "F":
        u1, u2 = c
        return _rel(u2 ** 4, u1 ** 4 - 1)
    if which == "E":
        x, y = c
        return _rel(y * y, x * (x - 1) * (x + 2 * t))
    if which == "X":
        z1, z2, w = c
        return _rel(w ** 4, z2 ** 4 - m.f(z1))
    raise ValueError(f"unknown curve {which!r}")


def curve_point(m: FamilyMember, which: str, coords, tol: float = POINT_TOL) -> CurvePoint:
    coords = tuple(complex(x) for x in coords)
    res = curve_residual(m, which, coords)
    if res > tol:
        raise NotOnCurve(f"{coords} is not on {which} (residual {res:.3g})")
    return CurvePoint(which, coords, res)


# -- forms ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FormSymbol:
    """coefficient * d(differentials[0]) [^ d(differentials[1])]."""

    name: str
    coefficient: RationalFunction
    differentials: tuple

    def coefficient_at(self, **values) -> complex:
        return complex(self.coefficient.evaluate_float(**values))


def _rf(text: str) -> RationalFunction:
    num, _, den = text.partition("/")
    return RationalFunction(Polynomial.parse(num), Polynomial.parse(den) if den else 1)


FORMS = {
    "omega": FormSymbol("omega", _rf("1/w^3"), ("z1", "z2")),
    "theta": FormSymbol("theta", _rf("1/v2^2"), ("v1",)),
    "mu": FormSymbol("mu", _rf("1/u2^3"), ("u1",)),
    "eta": FormSymbol("eta", _rf("1/2*y"), ("x",)),
}


# -- the maps ---------------------------------------------------------------------------


def _coords(p, which: str) -> tuple:
    if isinstance(p, CurvePoint):
        if p.which != which:
            raise ValueError(f"expected a point on {which}, got {p.which}")
        return p.coords
    return tuple(p)


def psi(m: FamilyMember, p) -> CurvePoint:
    """(x, y) = (2 v1^2/(2 v1 + t), 2 v2^2 v1 (v1 + t)/(2 v1 + t)^2)."""
    v1, v2 = (complex(c) for c in _coords(p, "C"))
    t = complex(m.t)
    d = 2 * v1 + t
    if abs(d) <= 1e-14 * max(1.0, abs(v1), abs(t)):
        raise PoleOfMap(f"2 v1 + t = 0 at v1 = {v1}")
    x = 2 * v1 * v1 / d
    y = 2 * v2 * v2 * v1 * (v1 + t) / (d * d)
    return CurvePoint("E", (x, y), curve_residual(m, "E", (x, y)))


def phi_projective(V, U) -> tuple:
    """[U0 V0 : U0 V1 : U1 V2 : U2 V2] for V on C_t and U on F (homogeneous)."""
    V0, V1, V2 = (complex(c) for c in V)
    U0, U1, U2 = (complex(c) for c in U)
    scale = max(abs(c) for c in (V0, V1, V2)) * max(abs(c) for c in (U0, U1, U2))
    if abs(U0) <= 1e-14 * scale ** 0.5 and abs(V2) <= 1e-14 * scale ** 0.5:
        raise Indeterminacy("U0 = V2 = 0 is a base point of phi")
    return (U0 * V0, U0 * V1, U1 * V2, U2 * V2)


def phi(m: FamilyMember, p, q) -> CurvePoint:
    """(z1, z2, w) = (v1, u1 v2, u2 v2) in the affine charts V0 = U0 = 1."""
    v1, v2 = _coords(p, "C")
    u1, u2 = _coords(q, "F")
    Z0, Z1, Z2, W = phi_projective((1, v1, v2), (1, u1, u2))
    coords = (Z1 / Z0, Z2 / Z0, W / Z0)
    return CurvePoint("X", coords, curve_residual(m, "X", coords))


def mu4_act(k: int, p, q) -> tuple:
    """zeta = i^k acts by v2 -> zeta^-1 v2 and (u1, u2) -> (zeta u1, zeta u2)."""
    zeta = (1, 1j, -1, -1j)[k % 4]
    v1, v2 = (complex(c) for c in _coords(p, "C"))
    u1, u2 = (complex(c) for c in _coords(q, "F"))
    return (v1, v2 / zeta), (zeta * u1, zeta * u2)


def phi_fiber(m: FamilyMember, x) -> list:
    """The four preimages (v, u) of a point of X_t with f_t(z1) != 0."""
    z1, z2, w = (complex(c) for c in _coords(x, "X"))
    fz = m.f(z1)
    if abs(fz) <= 1e-14:
        raise PoleOfMap("f_t(z1) = 0: the fiber meets the base locus")
    root = fz ** 0.25
    out = []
    for k in range(4):
        v2 = root * (1, 1j, -1, -1j)[k]
        out.append(((z1, v2), (z2 / v2, w / v2)))
    return out


@dataclass(frozen=True)
class TauImage:
    x: complex
    p: complex

    @property
    def q(self) -> complex:
        return 1 / self.p


def tau(m: FamilyMember, z1, z2) -> TauImage:
    """(x, p) = (2 z1^2/(2 z1 + t), z2^4/(z2^4 - f_t(z1)))."""
    t = m.t
    d1 = 2 * z1 + t
    d2 = z2 ** 4 - m.f(z1)
    if d1 == 0 or d2 == 0:
        raise PoleOfMap(f"tau is undefined at ({z1}, {z2})")
    return TauImage(2 * z1 * z1 / d1, z2 ** 4 / d2)


def sigma_pullback_factor(k: int = 1) -> complex:
    """(sigma^k)^* omega = c omega with sigma: w -> i w, so c = 1/i^(3k)."""
    return 1 / ((1j ** k) ** 3)


# -- sampling -----------------------------------------------------------------------


def _branch_root(value: complex, k: int) -> complex:
    return complex(value) ** 0.25 * (1, 1j, -1, -1j)[k % 4]


def sample_curve_points(m: FamilyMember, rng: np.random.Generator, n: int,
                        margin: float = 0.05) -> list:
    """n points on C_t away from v2 = 0 and from the pole 2 v1 + t = 0.

    v1 is drawn from a complex Gaussian, v2 is the principal fourth root of
    f_t(v1) times a random element of mu_4 (the branch index is recorded as
    the third entry).
    """
    t = complex(m.t)
    out = []
    while len(out) < n:
        v1 = complex(rng.normal(), rng.normal()) * (1 + abs(t))
        k = int(rng.integers(4))
        fv = m.f(v1)
        if abs(fv) < margin or abs(2 * v1 + t) < margin or abs(v1) < margin or abs(v1 + t) < margin:
            continue
        out.append((v1, _branch_root(fv, k), k))
    return out


def sample_fermat_points(rng: np.random.Generator, n: int, margin: float = 0.05) -> list:
    out = []
    while len(out) < n:
        u1 = complex(rng.normal(), rng.normal())
        k = int(rng.integers(4))
        val = u1 ** 4 - 1
        if abs(val) < margin:
            continue
        out.append((u1, _branch_root(val, k), k))
    return out


def _continue_root(target: complex, guess: complex) -> complex:
    """Fourth root of ``target`` nearest to ``guess`` (Newton from the guess)."""
    r = guess
    for _ in range(30):
        step = (r ** 4 - target) / (4 * r ** 3)
        r -= step
        if abs(step) <= 1e-16 * abs(r):
            break
    return r


# -- pullback verification ----------------------------------------------------------------


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def reduce_mod_power(p: Polynomial, var: str, k: int, replacement: Polynomial) -> Polynomial:
    """Replace var^k by ``replacement`` repeatedly (reduction modulo var^k - replacement)."""
    if var not in p.free_variables():
        return p
    coeffs = p.coefficients(var)
    x = Polynomial.var(var)
    out = Polynomial.const(0)
    for e, c in enumerate(coeffs):
        if c.is_zero():
            continue
        q, r = divmod(e, k)
        out = out + c * replacement ** q * x ** r
    return out


def psi_pullback_symbolic() -> bool:
    """psi^* eta = theta and psi(C_t) lies on E_lambda, both as exact identities in Q(t)[v1, v2]."""
    v1, v2, t = Polynomial.var("v1"), Polynomial.var("v2"), Polynomial.var("t")
    d = 2 * v1 + t
    x = RationalFunction(2 * v1 * v1, d)
    y = RationalFunction(2 * v2 * v2 * v1 * (v1 + t), d * d)
    dx = x.derivative("v1")  # x depends on v1 only; dv2 never enters
    pull = dx / (2 * y)
    ok_form = pull == RationalFunction(1, v2 * v2)
    f = f_polynomial().substitute({"z": v1})
    on_curve = y * y - x * (x - 1) * (x + 2 * t)
    num = reduce_mod_power(on_curve.num, "v2", 4, f)
    return ok_form and num.is_zero()


def verify_pullback_psi(m: FamilyMember, samples: int = 100, seed=0) -> float:
    """Max relative residual of (dx/dv1)/(2y) against 1/v2^2, dx/dv1 by finite differences."""
    rng = _rng(seed)
    t = complex(m.t)
    worst = 0.0
    for v1, v2, _ in sample_curve_points(m, rng, samples):
        def x_of(h, v1=v1):
            return 2 * (v1 + h) ** 2 / (2 * (v1 + h) + t)

        h0 = 1e-2 * min(1.0, abs(2 * v1 + t))
        dx = fd_derivative(x_of, 0.0, 1, h0)
        e = psi(m, (v1, v2))
        lhs = dx / (2 * e.coords[1])
        rhs = 1 / v2 ** 2
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


def form_relation_symbolic() -> bool:
    """phi^* omega = theta ^ mu in the local coordinates (v1, u1).

    One-forms are pairs of RationalFunction coefficients on (dv1, du1), with
    dv2 = f'(v1)/(4 v2^3) dv1.  Only dz1 ^ dz2 is needed, so du2 never enters.
    """
    v1, v2, u1, u2 = (Polynomial.var(n) for n in ("v1", "v2", "u1", "u2"))
    fprime = f_polynomial().derivative("z").substitute({"z": v1})
    dv2 = (RationalFunction(fprime, 4 * v2 ** 3), RationalFunction(0))
    dz1 = (RationalFunction(1), RationalFunction(0))
    # z2 = u1 v2: dz2 = u1 dv2 + v2 du1
    dz2 = (dv2[0] * u1, dv2[1] * u1 + v2)
    wedge = dz1[0] * dz2[1] - dz1[1] * dz2[0]
    w = u2 * v2
    pulled = wedge * RationalFunction(1, w ** 3)
    target = RationalFunction(1, v2 ** 2) * RationalFunction(1, u2 ** 3)
    return pulled == target


def verify_form_relation(m: FamilyMember, samples: int = 50, seed=0) -> float:
    """Max relative residual of det(d(z1, z2)/d(v1, u1)) / w^3 against 1/(v2^2 u2^3).

    The Jacobian is taken by finite differences, following v2 and u2 along
    their branches with Newton continuation.
    """
    rng = _rng(seed)
    cs = sample_curve_points(m, rng, samples)
    fs = sample_fermat_points(rng, samples)
    worst = 0.0
    for (v1, v2, _), (u1, u2, _) in zip(cs, fs):
        def v2_of(h, v1=v1, v2=v2):
            return _continue_root(m.f(v1 + h), v2)

        h0 = 1e-3
        # z1 = v1 and z2 = u1 v2(v1): d z1/d v1 = 1, d z1/d u1 = 0
        dz2_du1 = fd_derivative(lambda h: (u1 + h) * v2, 0.0, 1, h0)
        dz2_dv1 = fd_derivative(lambda h: u1 * v2_of(h), 0.0, 1, h0)
        det = 1 * dz2_du1 - 0 * dz2_dv1
        w = phi(m, (v1, v2), (u1, u2)).coords[2]
        lhs = det / w ** 3
        rhs = 1 / (v2 ** 2 * u2 ** 3)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst


def verify_tau_phi(m: FamilyMember, samples: int = 50, seed=0) -> float:
    """Max relative residual of p(tau(phi(v, u))) against u1^4/u2^4."""
    rng = _rng(seed)
    cs = sample_curve_points(m, rng, samples)
    fs = sample_fermat_points(rng, samples)
    worst = 0.0
    for (v1, v2, _), (u1, u2, _) in zip(cs, fs):
        z1, z2, _w = phi(m, (v1, v2), (u1, u2)).coords
        p = tau(m, z1, z2).p
        ref = u1 ** 4 / u2 ** 4
        worst = max(worst, abs(p - ref) / max(1.0, abs(ref)))
    return worst


def verify_phi_fibers(m: FamilyMember, samples: int = 20, seed=0) -> dict:
    """Fibers of phi over sampled image points: size, distinctness and mu_4-orbit structure."""
    rng = _rng(seed)
    cs = sample_curve_points(m, rng, samples)
    fs = sample_fermat_points(rng, samples)
    sizes, worst_orbit, worst_image = [], 0.0, 0.0
    for (v1, v2, _), (u1, u2, _) in zip(cs, fs):
        x = phi(m, (v1, v2), (u1, u2))
        fiber = phi_fiber(m, x)
        pts = [np.array([a[0], a[1], b[0], b[1]]) for a, b in fiber]
        distinct = sum(1 for i in range(4) if all(np.linalg.norm(pts[i] - pts[j]) > 1e-8 for j in range(i)))
        sizes.append(distinct)
        base = fiber[0]
        orbit = [mu4_act(k, base[0], base[1]) for k in range(4)]
        for a, b in orbit:
            o = np.array([a[0], a[1], b[0], b[1]])
            worst_orbit = max(worst_orbit, min(np.linalg.norm(o - p) for p in pts))
        for a, b in fiber:
            y = phi(m, a, b).coords
            worst_image = max(worst_image, max(abs(complex(y[i]) - complex(x.coords[i])) for i in range(3)))
    return {"sizes": sizes, "orbit_residual": worst_orbit, "image_residual": worst_image}


def verify_equivariance(m: FamilyMember, samples: int = 20, seed=0) -> float:
    """max |phi(zeta (v, u)) - phi(v, u)| over mu_4 and samples; also psi's x-invariance."""
    rng = _rng(seed)
    cs = sample_curve_points(m, rng, samples)
    fs = sample_fermat_points(rng, samples)
    worst = 0.0
    for (v1, v2, _), (u1, u2, _) in zip(cs, fs):
        base = np.array(phi(m, (v1, v2), (u1, u2)).coords)
        ex = psi(m, (v1, v2)).coords
        for k in range(4):
            a, b = mu4_act(k, (v1, v2), (u1, u2))
            worst = max(worst, float(np.max(np.abs(np.array(phi(m, a, b).coords) - base))))
            worst = max(worst, abs(psi(m, a).coords[0] - ex[0]))
        y_neg = psi(m, (v1, -v2)).coords[1]
        worst = max(worst, abs(y_neg - ex[1]))
    return worst


def tau_boundary_identity() -> bool:
    """On z2 = z1: p = (x/(2 - x))^2 exactly, i.e. z1^4/(z1^4 - f) = z1^4/(z1^2 - 2 z1 - t)^2."""
    z1, t = Polynomial.var("z1"), Polynomial.var("t")
    f = f_polynomial().substitute({"z": z1})
    x = RationalFunction(2 * z1 * z1, 2 * z1 + t)
    p = RationalFunction(z1 ** 4, z1 ** 4 - f)
    bound = (x / (2 - x)) ** 2
    return p == bound


def map_residuals(m: FamilyMember, samples: int = 100, seed=0) -> dict:
    """Worst target-curve residuals of psi (on E) and phi (on X) over seeded samples."""
    rng = _rng(seed)
    cs = sample_curve_points(m, rng, samples)
    fs = sample_fermat_points(rng, samples)
    worst_psi = max(psi(m, (v1, v2)).residual for v1, v2, _ in cs)
    worst_phi = max(phi(m, (v1, v2), (u1, u2)).residual for (v1, v2, _), (u1, u2, _) in zip(cs, fs))
    return {"psi": worst_psi, "phi": worst_phi}
