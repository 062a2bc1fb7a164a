"""Reduced quotients of polynomials over Q."""
from __future__ import annotations

from numbers import Rational

from .polynomial import DivisionByZeroPolynomial, Polynomial, gcd


class RationalFunction:
    """num/den with gcd(num, den) = 1 and den integer-primitive with positive leading coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, *, reduce: bool = True):
        num = Polynomial.coerce(num)
        den = Polynomial.coerce(den)
        if den.is_zero():
            raise DivisionByZeroPolynomial("zero denominator")
        if reduce:
            if num.is_zero():
                num, den = num, Polynomial.const(1)
            else:
                g = gcd(num, den)
                if not g.is_constant():
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                scale = den.integer_content()
                if den.leading_coefficient() < 0:
                    scale = -scale
                num = num * (1 / scale)
                den = den * (1 / scale)
        self.num = num
        self.den = den

    @classmethod
    def coerce(cls, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        return cls(Polynomial.coerce(other))

    @property
    def variables(self) -> tuple:
        return tuple(sorted(set(self.num.free_variables()) | set(self.den.free_variables())))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError("not a polynomial")
        return self.num * (1 / self.den.constant_value())

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _ok(other) -> bool:
        return isinstance(other, (RationalFunction, Polynomial, Rational, float))

    def __add__(self, other):
        if not self._ok(other):
            return NotImplemented
        o = RationalFunction.coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        if not self._ok(other):
            return NotImplemented
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        if not self._ok(other):
            return NotImplemented
        o = RationalFunction.coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not self._ok(other):
            return NotImplemented
        o = RationalFunction.coerce(other)
        if o.is_zero():
            raise DivisionByZeroPolynomial("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num ** n, self.den ** n, reduce=False)

    def derivative(self, var: str, order: int = 1) -> RationalFunction:
        r = self
        for _ in range(order):
            r = RationalFunction(
                r.num.derivative(var) * r.den - r.num * r.den.derivative(var), r.den * r.den
            )
        return r

    def substitute(self, mapping: dict) -> RationalFunction:
        """Substitute polynomials or rational functions for variables."""
        poly_map = {}
        rat_map = {}
        for k, v in mapping.items():
            if isinstance(v, RationalFunction) and not v.is_polynomial():
                rat_map[k] = v
            else:
                poly_map[k] = v.as_polynomial() if isinstance(v, RationalFunction) else v
        num, den = self.num.substitute(poly_map), self.den.substitute(poly_map)
        if not rat_map:
            return RationalFunction(num, den)
        return _substitute_rational(num, rat_map) / _substitute_rational(den, rat_map)

    def __call__(self, **values):
        d = self.den(**values)
        return self.num(**values) / d

    def evaluate_float(self, **values):
        return self.num.evaluate_float(**values) / self.den.evaluate_float(**values)

    def __eq__(self, other):
        if not self._ok(other):
            return NotImplemented
        o = RationalFunction.coerce(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.den == Polynomial.const(1):
            return str(self.num)
        return f"({self.num})/({self.den})"


def _substitute_rational(p: Polynomial, mapping: dict) -> RationalFunction:
    total = RationalFunction(0)
    keys = [k for k in mapping if k in p.variables]
    idx = [p.variables.index(k) for k in keys]
    rest = tuple(v for v in p.variables if v not in mapping)
    ridx = [p.variables.index(v) for v in rest]
    for e, c in p.terms.items():
        term = RationalFunction(Polynomial({tuple(e[i] for i in ridx): c}, rest))
        for k, i in zip(keys, idx):
            if e[i]:
                term = term * mapping[k] ** e[i]
        total = total + term
    return total


def rational(num, den=1) -> RationalFunction:
    if isinstance(num, str):
        num = Polynomial.parse(num)
    if isinstance(den, str):
        den = Polynomial.parse(den)
    return RationalFunction(num, den)


__all__ = ["RationalFunction", "rational"]
