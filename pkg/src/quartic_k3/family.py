"""The one-parameter family f_t, g_t, its split bitangent conics and the cycle functions.

Coordinates on X_t are affine (z1, z2, w) with w^4 = z2^4 - f_t(z1), where
f_t(z) = (2z + t)(2z^2 - 2z - t) = z^4 - (z^2 - 2z - t)^2.  The two lines
l_0: z2 = z1 and l_1: z2 = -z1 are bitangents of C_t; over each, the curve
splits into the sheets w^2 = t + 2 z1 - z1^2 (sheet 0, through Q) and
w^2 = z1^2 - 2 z1 - t (sheet 1).
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .poly import Polynomial
from .quartic import QuarticForm

EXCLUDED = (Fraction(0), Fraction(-1, 2), Fraction(-1))
SQRT_TOL = 1e-14


class ExcludedParameter(ValueError):
    pass


class RequiresPositiveReal(ValueError):
    pass


def f_polynomial() -> Polynomial:
    """f_t(z) in the variables z, t."""
    return Polynomial.parse("(2*z + t)*(2*z^2 - 2*z - t)")


def g_polynomial() -> Polynomial:
    """g_t(Z0, Z1, Z2) = Z2^4 - Z0 (2 Z1 + t Z0)(2 Z1^2 - 2 Z1 Z0 - t Z0^2)."""
    return Polynomial.parse("Z2^4 - Z0*(2*Z1 + t*Z0)*(2*Z1^2 - 2*Z1*Z0 - t*Z0^2)")


def surface_polynomial() -> Polynomial:
    """w^4 - z2^4 + f_t(z1), whose zero set is the affine part of X_t."""
    return Polynomial.parse("w^4 - z2^4") + f_polynomial().substitute({"z": Polynomial.var("z1")})


def quartic_form(t) -> QuarticForm:
    """g_t as a QuarticForm for a rational (or complex) parameter value."""
    if isinstance(t, Rational):
        return QuarticForm.from_polynomial(g_polynomial().substitute({"t": Fraction(t)}))
    t = complex(t)
    return QuarticForm({
        (0, 0, 4): 1,
        (1, 3, 0): -4,
        (2, 2, 0): 4 - 2 * t,
        (3, 1, 0): 4 * t,
        (4, 0, 0): t * t,
    })


def _num(x):
    return Fraction(x) if isinstance(x, Rational) else complex(x)


def _sqrt(x):
    """Exact square root of a rational square, else the principal complex root."""
    if isinstance(x, Rational):
        x = Fraction(x)
        if x >= 0:
            n, d = _isqrt(x.numerator), _isqrt(x.denominator)
            if n is not None and d is not None:
                return Fraction(n, d)
    return cmath.sqrt(complex(x))


def _isqrt(n: int):
    if n < 0:
        return None
    r = int(round(n ** 0.5))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c * c == n:
            return c
    return None


def _real_positive(x) -> bool:
    if isinstance(x, Rational):
        return x > 0
    x = complex(x)
    return x.imag == 0 and x.real > 0


@dataclass(frozen=True)
class FamilyMember:
    t: complex
    sqrt_t: complex
    alpha: complex
    r: complex
    lam: complex

    @property
    def Q(self) -> tuple:
        return (0, 0, self.sqrt_t)

    def q_point(self, k: int) -> tuple:
        """Q_k = (0, 0, i^k sqrt(t))."""
        return (0, 0, _ipow(k) * self.sqrt_t)

    def f(self, z):
        return (2 * z + self.t) * (2 * z * z - 2 * z - self.t)

    def f_prime(self, z):
        return _fprime(z, self.t)

    def quartic(self) -> QuarticForm:
        return quartic_form(self.t)

    def surface_residual(self, z1, z2, w) -> float:
        lhs = w ** 4
        rhs = z2 ** 4 - self.f(z1)
        return abs(complex(lhs - rhs)) / max(1.0, abs(complex(lhs)), abs(complex(rhs)))

    def to_json(self) -> dict:
        def c(x):
            x = complex(x)
            return [x.real, x.imag]

        return {"t": c(self.t), "sqrt_t": c(self.sqrt_t), "alpha": c(self.alpha), "r": c(self.r),
                "lambda": c(self.lam), "Q": [c(x) for x in self.Q]}


def _fprime(z, t):
    # d/dz (2z + t)(2z^2 - 2z - t) = 12 z^2 + 4(t - 2) z - 4t
    return 12 * z * z + 4 * (t - 2) * z - 4 * t


def _ipow(k: int):
    return (1, 1j, -1, -1j)[k % 4]


def make_member(t, sqrt_t=None) -> FamilyMember:
    """Family member with a chosen square root of t (default: the positive/principal root)."""
    t = _num(t)
    if isinstance(t, Rational):
        excluded = Fraction(t) in EXCLUDED
    else:
        excluded = any(abs(t - complex(e)) <= 1e-14 for e in EXCLUDED)
    if excluded:
        raise ExcludedParameter(f"t = {t} is outside the base (t(t+1)(2t+1) = 0)")
    if sqrt_t is None:
        sqrt_t = _sqrt(t)
    sqrt_t = _num(sqrt_t)
    err = sqrt_t * sqrt_t - t
    if isinstance(err, Rational):
        if err != 0:
            raise ValueError(f"sqrt_t^2 = {sqrt_t * sqrt_t} != t = {t}")
    elif abs(complex(err)) > SQRT_TOL * max(1.0, abs(complex(t))):
        raise ValueError(f"sqrt_t^2 differs from t by {abs(complex(err)):.3g}")
    alpha = (1 + _sqrt(1 + 2 * t)) / 2
    r = 1 + _sqrt(1 + t)
    return FamilyMember(t, sqrt_t, alpha, r, -2 * t)


# -- split conics -----------------------------------------------------------------


@dataclass(frozen=True)
class SplitConic:
    """Component l_(i,j): z2 = (-1)^i z1 and w^2 = s (z1^2 - 2 z1 - t), s = -1 for j = 0."""

    member: FamilyMember
    index: tuple

    @property
    def line_sign(self) -> int:
        return 1 if self.index[0] == 0 else -1

    @property
    def sheet_sign(self) -> int:
        return -1 if self.index[1] == 0 else 1

    def equations(self) -> tuple:
        """Defining polynomials in z1, z2, w, t."""
        z1, z2, w, t = (Polynomial.var(v) for v in ("z1", "z2", "w", "t"))
        return (z2 - self.line_sign * z1, w * w - self.sheet_sign * (z1 * z1 - 2 * z1 - t))

    def residual(self, point) -> float:
        z1, z2, w = (complex(c) for c in point)
        t = complex(self.member.t)
        e1 = abs(z2 - self.line_sign * z1) / max(1.0, abs(z1))
        rhs = self.sheet_sign * (z1 * z1 - 2 * z1 - t)
        e2 = abs(w * w - rhs) / max(1.0, abs(w * w), abs(rhs))
        return max(e1, e2)

    def contains(self, point, tol: float = 1e-12) -> bool:
        return self.residual(point) <= tol

    def point(self, s):
        """Canonical parametrization by projection from Q_2 (sheet 0) or its sigma-image.

        z1(s) = 2(sqrt(t) s + 1)/(s^2 + 1), w0(s) = -sqrt(t) + s z1(s); sheet 1 uses w = i w0.
        ``s = None`` stands for the point at infinity.
        """
        rt = self.member.sqrt_t
        if s is None:
            z1, w = 0, rt
        else:
            den = s * s + 1
            if den == 0:
                raise ZeroDivisionError(f"parameter s = {s} is a pole of the parametrization")
            z1 = 2 * (rt * s + 1) / den
            w = -rt + s * z1
        if self.index[1] == 1:
            w = 1j * w
        return (z1, self.line_sign * z1, w)

    def special_parameters(self) -> dict:
        """Parameter values (None = infinity) of the two points of the conic over z1 = z2 = 0."""
        k0, k2 = (0, 2) if self.index[1] == 0 else (1, 3)
        return {f"Q{k0}": None, f"Q{k2}": -1 / self.member.sqrt_t}

    def to_json(self) -> dict:
        return {"index": list(self.index), "line": f"z2 = {'' if self.line_sign > 0 else '-'}z1",
                "sheet": f"w^2 = {self.sheet_sign}*(z1^2 - 2*z1 - t)"}


def split_line(m: FamilyMember, i: int) -> tuple:
    if i not in (0, 1):
        raise ValueError("line index must be 0 or 1")
    return SplitConic(m, (i, 0)), SplitConic(m, (i, 1))


def sheet_product_identity() -> bool:
    """(t + 2 z1 - z1^2)(z1^2 - 2 z1 - t) = -(z1^2 - 2 z1 - t)^2 and (w^2)^2 = z1^4 - f_t(z1) on the line."""
    z1, t = Polynomial.var("z1"), Polynomial.var("t")
    h = z1 * z1 - 2 * z1 - t
    ok_prod = (t + 2 * z1 - z1 * z1) * h == -(h * h)
    on_line = z1 ** 4 - f_polynomial().substitute({"z": z1})
    return ok_prod and on_line == h * h


# -- cycle functions -----------------------------------------------------------------


@dataclass(frozen=True)
class CycleFunction:
    """f(s) = (a s + b)/(c s + d) on a split conic, in its canonical parameter."""

    conic: SplitConic
    mobius: tuple

    def __call__(self, s):
        a, b, c, d = self.mobius
        if s is None:
            return a / c if c != 0 else float("inf")
        den = c * s + d
        return (a * s + b) / den if den != 0 else float("inf")

    def scaled(self, k) -> CycleFunction:
        a, b, c, d = self.mobius
        return CycleFunction(self.conic, (k * a, k * b, c, d))

    def divisor(self) -> dict:
        """Zeros (+1) and poles (-1) as named points, computed from the Mobius coefficients."""
        a, b, c, d = self.mobius
        if a * d - b * c == 0:
            return {}
        zero = None if a == 0 else -b / a
        pole = None if c == 0 else -d / c
        names = self.conic.special_parameters()
        out: dict = {}
        for s, mult in ((zero, 1), (pole, -1)):
            out[_name_of(s, names)] = out.get(_name_of(s, names), 0) + mult
        return {k: v for k, v in out.items() if v}

    def to_json(self) -> dict:
        def c(x):
            x = complex(x)
            return [x.real, x.imag]

        return {"conic": list(self.conic.index), "mobius": [c(x) for x in self.mobius],
                "divisor": self.divisor()}


def _name_of(s, names: dict) -> str:
    for name, value in names.items():
        if value is None and s is None:
            return name
        if value is not None and s is not None and abs(complex(s) - complex(value)) <= 1e-12 * max(1.0, abs(complex(value))):
            return name
    return "s=inf" if s is None else f"s={s}"


def cycle_functions(m: FamilyMember) -> tuple:
    """f_(0,0)(s) = s + 1/sqrt(t) on l_(0,0), and its reciprocal on l_(1,0)."""
    inv = 1 / m.sqrt_t
    l00 = SplitConic(m, (0, 0))
    l10 = SplitConic(m, (1, 0))
    return CycleFunction(l00, (1, inv, 0, 1)), CycleFunction(l10, (0, 1, 1, inv))


def total_divisor(functions) -> dict:
    out: dict = {}
    for fn in functions:
        for k, v in fn.divisor().items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def tangency_data(m: FamilyMember) -> dict:
    if not _real_positive(m.t):
        raise RequiresPositiveReal(f"t = {m.t} must be real and positive")
    r = m.r
    return {"P": (0, 0), "R0": (r, r), "R1": (r, -r)}
