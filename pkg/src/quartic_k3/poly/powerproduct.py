"""Sums of terms c * prod(base_i ** e_i) with polynomial bases and rational exponents.

These hold the singular integrands of the regulator computation.  Equality is
decided on a canonical form: terms are grouped by the fractional parts of
their exponents, each group becomes ``prod(b ** e_min) * cofactor`` with an
exact polynomial cofactor, and bases are pulled out of the cofactor while they
divide it.  No factorization across different bases is attempted.
"""
from __future__ import annotations

from fractions import Fraction
from math import floor
from numbers import Rational

import numpy as np

from .polynomial import Polynomial, _as_fraction
from .rational import RationalFunction


class FractionalSignFlip(ValueError):
    """Two bases differ by a sign (or scalar) but carry fractional exponents."""


def _frac(e) -> Fraction:
    return e if isinstance(e, Fraction) else Fraction(e)


def _normalize_term(coef: Fraction, factors) -> tuple[Fraction, tuple]:
    merged: dict[Polynomial, Fraction] = {}
    for base, e in factors:
        base = Polynomial.coerce(base).trimmed()
        e = _frac(e)
        if not e:
            continue
        if base.is_constant():
            c = base.constant_value()
            if e.denominator == 1:
                coef *= c ** int(e)
            elif c != 1:
                raise ValueError(f"constant base {c} with fractional exponent {e} is not rational")
            continue
        if e.denominator == 1:
            # integer exponents: move content and sign into the coefficient
            prim = base.primitive()
            scale = base.leading_coefficient() / prim.leading_coefficient()
            coef *= scale ** int(e)
            base = prim
        merged[base] = merged.get(base, Fraction(0)) + e
    items = tuple(sorted(((b, e) for b, e in merged.items() if e), key=lambda be: be[0].sort_key()))
    return coef, items


class PowerProduct:
    __slots__ = ("terms",)

    def __init__(self, terms=()):
        acc: dict[tuple, Fraction] = {}
        for coef, factors in terms:
            coef = _as_fraction(coef)
            if not coef:
                continue
            coef, factors = _normalize_term(coef, factors)
            if coef:
                acc[factors] = acc.get(factors, Fraction(0)) + coef
        self.terms = tuple((c, f) for f, c in acc.items() if c)

    @classmethod
    def term(cls, coef, factors=()) -> PowerProduct:
        return cls([(coef, list(factors))])

    @classmethod
    def coerce(cls, other) -> PowerProduct:
        if isinstance(other, PowerProduct):
            return other
        if isinstance(other, RationalFunction):
            return cls.term(1, [(other.num, 1), (other.den, -1)])
        if isinstance(other, Polynomial):
            return cls.term(1, [(other, 1)])
        return cls.term(_as_fraction(other))

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _ok(other) -> bool:
        return isinstance(other, (PowerProduct, RationalFunction, Polynomial, Rational, float))

    def __add__(self, other):
        if not self._ok(other):
            return NotImplemented
        return PowerProduct(self.terms + PowerProduct.coerce(other).terms)

    __radd__ = __add__

    def __neg__(self):
        return PowerProduct([(-c, f) for c, f in self.terms])

    def __sub__(self, other):
        if not self._ok(other):
            return NotImplemented
        return self + (-PowerProduct.coerce(other))

    def __rsub__(self, other):
        return PowerProduct.coerce(other) - self

    def __mul__(self, other):
        if not self._ok(other):
            return NotImplemented
        o = PowerProduct.coerce(other)
        return PowerProduct([(c1 * c2, f1 + f2) for c1, f1 in self.terms for c2, f2 in o.terms])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (Rational, float)):
            return self * (1 / _as_fraction(other))
        if isinstance(other, Polynomial):
            return self * PowerProduct.term(1, [(other, -1)])
        if isinstance(other, PowerProduct) and len(other.terms) == 1:
            c, f = other.terms[0]
            return self * PowerProduct.term(1 / c, [(b, -e) for b, e in f])
        return NotImplemented

    # -- calculus -----------------------------------------------------------

    def derivative(self, var: str) -> PowerProduct:
        """Exact partial derivative by the product and chain rules."""
        out = []
        for coef, factors in self.terms:
            for i, (base, e) in enumerate(factors):
                db = base.derivative(var)
                if db.is_zero():
                    continue
                rest = list(factors[:i]) + list(factors[i + 1:])
                new = rest + [(base, e - 1), (db, 1)]
                out.append((coef * e, new))
        return PowerProduct(out)

    def variables(self) -> tuple:
        names = set()
        for _, factors in self.terms:
            for b, _ in factors:
                names.update(b.free_variables())
        return tuple(sorted(names))

    # -- numerics -----------------------------------------------------------

    def evaluate(self, **values):
        """Numeric value; fractional powers use numpy's principal branch."""
        cache: dict = {}
        total = 0.0
        for coef, factors in self.terms:
            term = float(coef)
            for b, e in factors:
                if b not in cache:
                    cache[b] = b.evaluate_float(**values)
                v = cache[b]
                if e.denominator == 1:
                    term = term * v ** int(e) if e > 0 else term / v ** int(-e)
                else:
                    term = term * np.power(v, float(e))
            total = total + term
        return total

    __call__ = evaluate

    # -- canonical form / equality -------------------------------------------

    def canonical(self) -> tuple:
        """Tuple of (radical factors, cofactor polynomial) pairs; empty iff the expression is zero."""
        frac_bases: dict = {}
        classes: dict = {}
        for coef, factors in self.terms:
            cof = Polynomial.const(coef)
            rad = {}
            for b, e in factors:
                if e.denominator == 1 and e > 0:
                    cof = cof * b ** int(e)
                else:
                    rad[b] = e
                    if e.denominator != 1:
                        frac_bases.setdefault(b.primitive(), set()).add(b)
            key = frozenset((b, e - floor(e)) for b, e in rad.items() if e.denominator != 1)
            classes.setdefault(key, []).append((rad, cof))
        for group in frac_bases.values():
            if len(group) > 1:
                raise FractionalSignFlip(
                    "bases " + ", ".join(str(b) for b in group) + " differ by a scalar under a fractional power"
                )
        out = []
        for key, items in classes.items():
            bases = set()
            for rad, _ in items:
                bases.update(rad)
            emin = {b: min(rad.get(b, Fraction(0)) for rad, _ in items) for b in bases}
            total = Polynomial.const(0)
            for rad, cof in items:
                for b in bases:
                    k = rad.get(b, Fraction(0)) - emin[b]
                    if k:
                        cof = cof * b ** int(k)
                total = total + cof
            if total.is_zero():
                continue
            for b in sorted(bases, key=lambda p: p.sort_key()):
                while emin[b].denominator != 1 or emin[b] < 0:
                    q, r = total.divmod(b)
                    if not r.is_zero():
                        break
                    total = q
                    emin[b] += 1
            rad = tuple(sorted(((b, e) for b, e in emin.items() if e), key=lambda be: be[0].sort_key()))
            out.append((rad, total.trimmed()))
        out.sort(key=lambda item: ([(b.sort_key(), e) for b, e in item[0]], item[1].sort_key()))
        return tuple(out)

    def normalized(self) -> PowerProduct:
        terms = []
        for rad, cof in self.canonical():
            terms.append((1, list(rad) + [(cof, 1)]))
        return PowerProduct(terms)

    def is_zero(self) -> bool:
        return not self.canonical()

    def __eq__(self, other):
        if not self._ok(other):
            return NotImplemented
        return (self - PowerProduct.coerce(other)).is_zero()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"PowerProduct({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for coef, factors in self.terms:
            fs = "*".join(f"({b})" if e == 1 else f"({b})^({e})" for b, e in factors)
            parts.append(f"{coef}" + (f"*{fs}" if fs else ""))
        return " + ".join(parts)


def pp_derivative(e: PowerProduct, var: str) -> PowerProduct:
    return e.derivative(var)
