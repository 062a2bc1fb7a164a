"""Sparse multivariate polynomials with exact rational coefficients."""
from __future__ import annotations

import ast
from fractions import Fraction
from math import gcd as _igcd
from numbers import Rational

import numpy as np


class DivisionByZeroPolynomial(ZeroDivisionError):
    pass


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficient {c!r} is not an exact rational")


def _remap(exps: tuple, src: tuple, dst: tuple) -> tuple:
    pos = {v: i for i, v in enumerate(src)}
    return tuple(exps[pos[v]] if v in pos else 0 for v in dst)


class Polynomial:
    """Immutable polynomial over Q.

    Variables are kept in sorted order; terms map exponent tuples (aligned
    with ``variables``) to nonzero Fractions.  Monomial order is lex with
    respect to that variable order.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, terms=None, variables=()):
        variables = tuple(variables)
        order = tuple(sorted(set(variables)))
        clean = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != len(variables):
                    raise ValueError("exponent vector does not match variables")
                if order != variables:
                    exps = _remap(exps, variables, order)
                c = _as_fraction(c)
                if c:
                    clean[exps] = clean.get(exps, 0) + c
                    if not clean[exps]:
                        del clean[exps]
        self.variables = order
        self.terms = clean
        self._hash = None

    # -- construction -------------------------------------------------------

    @classmethod
    def var(cls, name: str) -> Polynomial:
        return cls({(1,): 1}, (name,))

    @classmethod
    def const(cls, c, variables=()) -> Polynomial:
        variables = tuple(sorted(set(variables)))
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def coerce(cls, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        return cls.const(other)

    @classmethod
    def parse(cls, text: str) -> Polynomial:
        """Build a polynomial from an arithmetic expression such as ``"(2*z+t)*(z^2-1)"``."""
        tree = ast.parse(text.replace("^", "**"), mode="eval")
        return _eval_node(tree.body)

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def free_variables(self) -> tuple:
        used = [False] * len(self.variables)
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def trimmed(self) -> Polynomial:
        """Drop variables that do not occur."""
        keep = self.free_variables()
        if keep == self.variables:
            return self
        return Polynomial({_remap(e, self.variables, keep): c for e, c in self.terms.items()}, keep)

    def with_variables(self, variables) -> Polynomial:
        variables = tuple(sorted(set(variables) | set(self.variables)))
        if variables == self.variables:
            return self
        return Polynomial({_remap(e, self.variables, variables): c for e, c in self.terms.items()}, variables)

    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.variables:
            return 0
        i = self.variables.index(var)
        return max(e[i] for e in self.terms)

    def leading_term(self):
        exps = max(self.terms)
        return exps, self.terms[exps]

    def leading_coefficient(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return self.terms[max(self.terms)]

    def coefficients(self, var: str) -> list[Polynomial]:
        """Coefficients in ``var`` (index = power), each a polynomial in the remaining variables."""
        if var not in self.variables:
            return [self]
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        buckets: dict[int, dict] = {}
        for exps, c in self.terms.items():
            buckets.setdefault(exps[i], {})[exps[:i] + exps[i + 1:]] = c
        out = [Polynomial({}, rest) for _ in range(self.degree(var) + 1)]
        for k, terms in buckets.items():
            out[k] = Polynomial(terms, rest)
        return out

    @classmethod
    def from_coefficients(cls, coeffs, var: str) -> Polynomial:
        total = cls({}, (var,))
        x = cls.var(var)
        for k, c in enumerate(coeffs):
            c = cls.coerce(c)
            if not c.is_zero():
                total = total + c * x ** k
        return total

    def univariate_coefficients(self) -> list[Fraction]:
        """Ascending coefficient list of a polynomial in at most one variable."""
        p = self.trimmed()
        if len(p.variables) > 1:
            raise ValueError(f"not univariate: {p.variables}")
        if not p.terms:
            return []
        if not p.variables:
            return [p.constant_value()]
        out = [Fraction(0)] * (p.degree() + 1)
        for (e,), c in p.terms.items():
            out[e] = c
        return out

    # -- arithmetic ---------------------------------------------------------

    def _aligned(self, other: Polynomial):
        if self.variables == other.variables:
            return self.variables, self.terms, other.terms
        variables = tuple(sorted(set(self.variables) | set(other.variables)))
        a = self.with_variables(variables)
        b = other.with_variables(variables)
        return variables, a.terms, b.terms

    def __add__(self, other):
        if not isinstance(other, (Polynomial, Rational, float)):
            return NotImplemented
        other = Polynomial.coerce(other)
        variables, a, b = self._aligned(other)
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(out, variables)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        if not isinstance(other, (Polynomial, Rational, float)):
            return NotImplemented
        return self + (-Polynomial.coerce(other))

    def __rsub__(self, other):
        return Polynomial.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (Polynomial, Rational, float)):
            return NotImplemented
        if not isinstance(other, Polynomial):
            c = _as_fraction(other)
            if not c:
                return Polynomial._raw({}, self.variables)
            return Polynomial._raw({e: v * c for e, v in self.terms.items()}, self.variables)
        variables, a, b = self._aligned(other)
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return Polynomial._raw({e: c for e, c in out.items() if c}, variables)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Polynomial.const(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if other.is_constant():
                return self / other.constant_value()
            from .rational import RationalFunction
            return RationalFunction(self, other)
        c = _as_fraction(other)
        if not c:
            raise DivisionByZeroPolynomial("division by zero")
        return self * (1 / c)

    def __rtruediv__(self, other):
        from .rational import RationalFunction
        return RationalFunction(Polynomial.coerce(other), self)

    @classmethod
    def _raw(cls, terms, variables):
        p = cls.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    def divmod(self, other: Polynomial):
        """Division by the lex leading term of ``other``; exact whenever ``other`` divides ``self``."""
        other = Polynomial.coerce(other)
        if other.is_zero():
            raise DivisionByZeroPolynomial("division by the zero polynomial")
        variables, a, b = self._aligned(other)
        rem = dict(a)
        quot: dict = {}
        lead_e = max(b)
        lead_c = b[lead_e]
        while rem:
            # reduce the largest term divisible by the divisor's leading monomial
            for e in sorted(rem, reverse=True):
                if all(x >= y for x, y in zip(e, lead_e)):
                    break
            else:
                break
            factor_e = tuple(x - y for x, y in zip(e, lead_e))
            factor_c = rem[e] / lead_c
            quot[factor_e] = quot.get(factor_e, 0) + factor_c
            for eb, cb in b.items():
                t = tuple(x + y for x, y in zip(eb, factor_e))
                v = rem.get(t, 0) - factor_c * cb
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return Polynomial._raw(quot, variables), Polynomial._raw(rem, variables)

    def exact_div(self, other) -> Polynomial:
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def divides(self, other: Polynomial) -> bool:
        """True if ``self`` divides ``other`` exactly."""
        return other.divmod(self)[1].is_zero()

    # -- calculus and substitution -----------------------------------------

    def derivative(self, var: str, order: int = 1) -> Polynomial:
        p = self
        for _ in range(order):
            if var not in p.variables:
                return Polynomial._raw({}, p.variables)
            i = p.variables.index(var)
            out = {}
            for e, c in p.terms.items():
                if e[i]:
                    ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                    out[ne] = c * e[i]
            p = Polynomial._raw(out, p.variables)
        return p

    def substitute(self, mapping: dict) -> Polynomial:
        """Replace variables by polynomials (or exact constants)."""
        mapping = {k: Polynomial.coerce(v) for k, v in mapping.items() if k in self.variables}
        if not mapping:
            return self
        keep = tuple(v for v in self.variables if v not in mapping)
        idx_keep = [self.variables.index(v) for v in keep]
        subs = [(self.variables.index(k), v) for k, v in mapping.items()]
        powers: dict = {}

        def power(j, p, n):
            key = (j, n)
            if key not in powers:
                powers[key] = p ** n
            return powers[key]

        total = Polynomial({}, keep)
        for e, c in self.terms.items():
            term = Polynomial._raw({tuple(e[i] for i in idx_keep): c}, keep)
            for j, p in subs:
                if e[j]:
                    term = term * power(j, p, e[j])
            total = total + term
        return total

    def __call__(self, *args, **values):
        """Numeric (or exact) evaluation; positional arguments follow ``variables``."""
        if args:
            values = dict(zip(self.variables, args), **values)
        missing = [v for v in self.free_variables() if v not in values]
        if missing:
            raise ValueError(f"missing values for {missing}")
        total = 0
        cache: dict = {}
        for e, c in self.terms.items():
            term = c if not _is_numeric_array(values) else float(c)
            for v, k in zip(self.variables, e):
                if k:
                    key = (v, k)
                    if key not in cache:
                        cache[key] = values[v] ** k
                    term = term * cache[key]
            total = total + term
        return total

    def evaluate_float(self, **values):
        """Evaluate with float coefficients (fast path for numpy arrays and complex input)."""
        total = 0.0
        cache: dict = {}
        for e, c in self.terms.items():
            term = float(c)
            for v, k in zip(self.variables, e):
                if k:
                    key = (v, k)
                    if key not in cache:
                        cache[key] = values[v] ** k
                    term = term * cache[key]
            total = total + term
        return total

    # -- content / normalization -------------------------------------------

    def integer_content(self) -> Fraction:
        """Positive rational c with self / c integral and primitive."""
        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self.terms.values():
            num = _igcd(num, c.numerator)
            den = den * c.denominator // _igcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> Polynomial:
        """Integer-primitive associate with positive lex leading coefficient."""
        if not self.terms:
            return self
        c = self.integer_content()
        if self.leading_coefficient() < 0:
            c = -c
        return self * (1 / c)

    def monic(self) -> Polynomial:
        return self * (1 / self.leading_coefficient())

    # -- comparison / hashing ----------------------------------------------

    def _key(self):
        p = self.trimmed()
        return (p.variables, tuple(sorted(p.terms.items())))

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial.coerce(other)
            except TypeError:
                return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def sort_key(self):
        p = self.trimmed()
        return (p.variables, sorted(((e, (c.numerator, c.denominator)) for e, c in p.terms.items()), reverse=True))

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "terms": [
                {"exponents": list(e), "num": c.numerator, "den": c.denominator}
                for e, c in sorted(self.terms.items(), reverse=True)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> Polynomial:
        variables = tuple(data["variables"])
        terms = {}
        for t in data["terms"]:
            e = tuple(t["exponents"])
            terms[e] = terms.get(e, 0) + Fraction(t["num"], t.get("den", 1))
        return cls(terms, variables)


def _is_numeric_array(values: dict) -> bool:
    return any(isinstance(v, (np.ndarray, float, complex, np.floating, np.complexfloating)) for v in values.values())


def _eval_node(node):
    if isinstance(node, ast.BinOp):
        left, right = _eval_node(node.left), _eval_node(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right.is_constant():
                raise ValueError("only division by constants is allowed")
            return left / right.constant_value()
        if isinstance(node.op, ast.Pow):
            if not right.is_constant():
                raise ValueError("exponent must be a constant")
            n = right.constant_value()
            if n.denominator != 1:
                raise ValueError("exponent must be an integer")
            return left ** int(n)
    if isinstance(node, ast.UnaryOp):
        v = _eval_node(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return Polynomial.const(Fraction(str(node.value)) if isinstance(node.value, float) else node.value)
    if isinstance(node, ast.Name):
        return Polynomial.var(node.id)
    raise ValueError(f"unsupported expression: {ast.dump(node)}")


def poly(text: str) -> Polynomial:
    return Polynomial.parse(text)


# -- gcd ----------------------------------------------------------------------


def _pseudo_remainder(a: list, b: list) -> list:
    """prem of univariate polynomials given as ascending coefficient lists."""
    a = list(a)
    db = len(b) - 1
    lc = b[-1]
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        la = a[-1]
        a = [c * lc for c in a]
        shift = da - db
        for k in range(db + 1):
            a[k + shift] = a[k + shift] - la * b[k]
        while a and a[-1].is_zero():
            a.pop()
    return a


def _poly_list_gcd(coeffs):
    g = Polynomial({}, ())
    for c in coeffs:
        g = gcd(g, c)
        if g.is_constant() and not g.is_zero():
            return Polynomial.const(1)
    return g


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Greatest common divisor over Q, normalized by ``Polynomial.primitive``."""
    a = Polynomial.coerce(a).trimmed()
    b = Polynomial.coerce(b).trimmed()
    if a.is_zero():
        return b.primitive() if not b.is_constant() else (Polynomial.const(1) if not b.is_zero() else b)
    if b.is_zero():
        return a.primitive() if not a.is_constant() else Polynomial.const(1)
    if a.is_constant() or b.is_constant():
        return Polynomial.const(1)
    variables = tuple(sorted(set(a.variables) | set(b.variables)))
    x = variables[0]
    if x not in a.variables:
        return gcd(a, _poly_list_gcd(b.coefficients(x)))
    if x not in b.variables:
        return gcd(_poly_list_gcd(a.coefficients(x)), b)
    ca_list, cb_list = a.coefficients(x), b.coefficients(x)
    ca, cb = _poly_list_gcd(ca_list), _poly_list_gcd(cb_list)
    content = gcd(ca, cb)
    pa = [c.exact_div(ca) for c in ca_list]
    pb = [c.exact_div(cb) for c in cb_list]
    if len(pa) < len(pb):
        pa, pb = pb, pa
    while pb:
        r = _pseudo_remainder(pa, pb)
        pa = pb
        if not r:
            pb = []
            break
        rc = _poly_list_gcd(r)
        pb = [c.exact_div(rc) for c in r]
        # keep integer coefficients small
        scale = Polynomial.from_coefficients(pb, x).integer_content()
        pb = [c * (1 / scale) for c in pb]
    g = Polynomial.from_coefficients(pa, x)
    g = g.exact_div(_poly_list_gcd(g.coefficients(x)))
    return (g * content).primitive()


def squarefree_part(p: Polynomial, var: str | None = None) -> Polynomial:
    """p / gcd(p, dp/dvar) for a polynomial in (at least) ``var``."""
    if var is None:
        free = p.free_variables()
        if len(free) != 1:
            raise ValueError("squarefree_part needs an explicit variable")
        var = free[0]
    g = gcd(p, p.derivative(var))
    return p.exact_div(g).primitive()
