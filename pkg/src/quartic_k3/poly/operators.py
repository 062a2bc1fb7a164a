"""Second-order linear differential operators with rational-function coefficients."""
from __future__ import annotations

from fractions import Fraction

from ..numkit.finite_diff import fd_derivative
from .polynomial import Polynomial
from .powerproduct import PowerProduct
from .rational import RationalFunction


class PoleAtPoint(ZeroDivisionError):
    pass


class DiffOperator:
    """c2 * d^2/dv^2 + c1 * d/dv + c0 in the variable ``variable``."""

    __slots__ = ("variable", "coefficients")

    def __init__(self, variable: str, coefficients):
        coeffs = [RationalFunction.coerce(c) for c in coefficients]
        if len(coeffs) > 3:
            if any(not c.is_zero() for c in coeffs[3:]):
                raise ValueError("only operators of order <= 2 are supported")
            coeffs = coeffs[:3]
        coeffs += [RationalFunction(0)] * (3 - len(coeffs))
        self.variable = variable
        self.coefficients = tuple(coeffs)

    @property
    def order(self) -> int:
        for k in (2, 1, 0):
            if not self.coefficients[k].is_zero():
                return k
        return 0

    def with_constant(self, c0) -> DiffOperator:
        """Copy with the zeroth-order coefficient replaced (used for mutation checks)."""
        return DiffOperator(self.variable, (c0,) + self.coefficients[1:])

    def __call__(self, expr):
        """Apply symbolically to a Polynomial, RationalFunction or PowerProduct."""
        v = self.variable
        if isinstance(expr, PowerProduct):
            out = PowerProduct()
            d = expr
            for k in range(3):
                c = self.coefficients[k]
                if not c.is_zero():
                    out = out + d * c
                if k < 2:
                    d = d.derivative(v)
            return out
        expr = RationalFunction.coerce(expr)
        out = RationalFunction(0)
        d = expr
        for k in range(3):
            out = out + self.coefficients[k] * d
            if k < 2:
                d = d.derivative(v)
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.variable == other.variable and self.coefficients == other.coefficients

    def __hash__(self):
        return hash((self.variable, self.coefficients))

    def __repr__(self):
        c0, c1, c2 = self.coefficients
        v = self.variable
        return f"DiffOperator[({c2})*d{v}^2 + ({c1})*d{v} + ({c0})]"

    def substitute(self, new_variable: str, scale) -> DiffOperator:
        return op_substitute(self, new_variable, scale)

    def apply_numeric(self, f, t0, h0: float = 1e-2):
        return op_apply_numeric(self, f, t0, h0)


def op_substitute(D: DiffOperator, new_variable: str, scale) -> DiffOperator:
    """Rewrite D in ``new_variable`` where old = scale * new (so d/dold = (1/scale) d/dnew)."""
    a = Fraction(scale)
    if not a:
        raise ValueError("scale must be nonzero")
    old = D.variable
    image = Polynomial.var(new_variable) * a
    coeffs = []
    for k, c in enumerate(D.coefficients):
        c_new = c.substitute({old: image}) if old != new_variable or a != 1 else c
        coeffs.append(c_new * (1 / a ** k))
    return DiffOperator(new_variable, coeffs)


def op_apply_numeric(D: DiffOperator, f, t0, h0: float = 1e-2):
    """c2(t0) f''(t0) + c1(t0) f'(t0) + c0(t0) f(t0).

    Exact objects (Polynomial / RationalFunction in the operator variable) are
    differentiated symbolically; plain callables go through ``fd_derivative``.
    """
    v = D.variable
    coeff_vals = []
    for c in D.coefficients:
        den = c.den.evaluate_float(**{v: t0})
        if den == 0:
            raise PoleAtPoint(f"coefficient {c} has a pole at {v} = {t0}")
        coeff_vals.append(c.num.evaluate_float(**{v: t0}) / den)
    if isinstance(f, (Polynomial, RationalFunction)):
        r = RationalFunction.coerce(f)
        derivs = [r, r.derivative(v), r.derivative(v, 2)]
        vals = [d.evaluate_float(**{v: t0}) for d in derivs]
    else:
        vals = [f(t0), fd_derivative(f, t0, 1, h0), fd_derivative(f, t0, 2, h0)]
    return sum(c * val for c, val in zip(coeff_vals, vals) if c != 0)


def hypergeometric_operator(a, b, c, variable: str = "lam") -> DiffOperator:
    """lam(1-lam) d^2 + (c - (a+b+1) lam) d - ab."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    lam = Polynomial.var(variable)
    return DiffOperator(variable, [Polynomial.const(-a * b), c - (a + b + 1) * lam, lam * (1 - lam)])


def picard_fuchs_operator(variable: str = "t", constant=Fraction(-1, 4)) -> DiffOperator:
    """-1/2 t(1+2t) d^2 - 1/2 (1+4t) d + constant; the family's operator has constant = -1/4."""
    t = Polynomial.var(variable)
    half = Fraction(1, 2)
    return DiffOperator(variable, [Polynomial.const(Fraction(constant)), -half * (1 + 4 * t), -half * t * (1 + 2 * t)])
