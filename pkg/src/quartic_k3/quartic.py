"""Plane quartics: smoothness, restriction to lines, bitangent certificates and enumeration."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from .numkit import complex_roots
from .poly import Polynomial, gcd, resultant, squarefree_part

VARS = ("Z0", "Z1", "Z2")
MONOMIALS = tuple(sorted(((i, j, 4 - i - j) for i in range(5) for j in range(5 - i)), reverse=True))

CERT_TOL = 1e-8
DEDUP_TOL = 1e-6
INFLECTION_TOL = 1e-6
SMOOTH_ACCEPT = 1e-8
SMOOTH_BAND = 1e-6


class DegenerateRestriction(ValueError):
    """The line lies on the quartic: the restriction vanishes identically."""


class Indeterminate(ArithmeticError):
    """A numeric smoothness test landed too close to its decision threshold."""


class CountMismatch(RuntimeError):
    def __init__(self, message: str, found: list):
        super().__init__(message)
        self.found = found


def _is_exact(x) -> bool:
    return isinstance(x, Rational)


class QuarticForm:
    """Ternary quartic sum c_m Z0^m0 Z1^m1 Z2^m2 with exact rational or complex coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        if isinstance(coeffs, dict):
            items = coeffs.items()
        else:
            coeffs = list(coeffs)
            if len(coeffs) != len(MONOMIALS):
                raise ValueError("expected 15 coefficients")
            items = zip(MONOMIALS, coeffs)
        clean = {}
        for m, c in items:
            m = tuple(int(e) for e in m)
            if len(m) != 3 or sum(m) != 4 or min(m) < 0:
                raise ValueError(f"{m} is not a quartic monomial")
            if isinstance(c, Rational):
                c = Fraction(c)
            elif isinstance(c, (float, complex, np.number)):
                c = complex(c)
            else:
                raise TypeError(f"unsupported coefficient {c!r}")
            if c != 0:
                clean[m] = clean.get(m, 0) + c
        if not clean:
            raise ValueError("the zero form is not a quartic")
        self.coeffs = clean

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> QuarticForm:
        p = p.with_variables(VARS)
        if set(p.variables) != set(VARS):
            raise ValueError(f"expected variables {VARS}, got {p.variables}")
        return cls({e: c for e, c in p.terms.items()})

    @classmethod
    def parse(cls, text: str) -> QuarticForm:
        return cls.from_polynomial(Polynomial.parse(text))

    @property
    def exact(self) -> bool:
        return all(_is_exact(c) for c in self.coeffs.values())

    def coefficient(self, m) -> complex | Fraction:
        return self.coeffs.get(tuple(m), Fraction(0))

    def vector(self) -> np.ndarray:
        return np.array([complex(self.coefficient(m)) for m in MONOMIALS])

    def to_polynomial(self) -> Polynomial:
        if not self.exact:
            raise ValueError("complex coefficients have no exact Polynomial form")
        return Polynomial(dict(self.coeffs), VARS)

    def __call__(self, point):
        z = [complex(v) for v in point]
        return sum(complex(c) * z[0] ** m[0] * z[1] ** m[1] * z[2] ** m[2] for m, c in self.coeffs.items())

    def transform(self, matrix) -> QuarticForm:
        """The form Z -> q(M Z)."""
        if self.exact and all(_is_exact(x) for row in matrix for x in row):
            p = self.to_polynomial()
            z = [Polynomial.var(v) for v in VARS]
            images = {VARS[i]: sum((Fraction(matrix[i][j]) * z[j] for j in range(3)), Polynomial.const(0))
                      for i in range(3)}
            return QuarticForm.from_polynomial(p.substitute(images))
        m = np.asarray(matrix, dtype=complex)
        out: dict = {}
        for mono, c in self.coeffs.items():
            prod = {(0, 0, 0): complex(c)}
            for i, e in enumerate(mono):
                for _ in range(e):
                    nxt: dict = {}
                    for k, v in prod.items():
                        for j in range(3):
                            if m[i, j] != 0:
                                kk = list(k)
                                kk[j] += 1
                                nxt[tuple(kk)] = nxt.get(tuple(kk), 0) + v * m[i, j]
                    prod = nxt
            for k, v in prod.items():
                out[k] = out.get(k, 0) + v
        return QuarticForm(out)

    def __eq__(self, other):
        if not isinstance(other, QuarticForm):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self):
        if self.exact:
            return f"QuarticForm({self.to_polynomial()})"
        return f"QuarticForm({self.coeffs})"

    def to_json(self) -> dict:
        if not self.exact:
            raise ValueError("only rational quartics serialize to JSON")
        return {"coeffs": [[*m, c.numerator, c.denominator] for m, c in sorted(self.coeffs.items(), reverse=True)]}

    @classmethod
    def from_json(cls, data: dict) -> QuarticForm:
        coeffs: dict = {}
        for row in data["coeffs"]:
            e0, e1, e2, num = row[:4]
            den = row[4] if len(row) > 4 else 1
            coeffs[(e0, e1, e2)] = coeffs.get((e0, e1, e2), 0) + Fraction(num, den)
        return cls(coeffs)


def fermat_quartic() -> QuarticForm:
    """U2^4 - U1^4 + U0^4, i.e. the curve U2^4 = U1^4 - U0^4."""
    return QuarticForm.parse("Z2^4 - Z1^4 + Z0^4")


# -- lines -----------------------------------------------------------------------


class ProjectiveLine:
    """Line lambda0 Z0 + lambda1 Z1 + lambda2 Z2 = 0 given by its dual coordinates."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        coords = tuple(coords)
        if len(coords) != 3:
            raise ValueError("a line needs three dual coordinates")
        if all(_is_exact(c) for c in coords):
            coords = tuple(Fraction(c) for c in coords)
        else:
            coords = tuple(complex(c) for c in coords)
        if all(c == 0 for c in coords):
            raise ValueError("dual coordinates are all zero")
        self.coords = coords

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coords)

    def normalized(self) -> np.ndarray:
        """Unit vector whose first non-negligible entry is positive real; idempotent."""
        v = np.array([complex(c) for c in self.coords])
        v = v / np.linalg.norm(v)
        big = np.max(np.abs(v))
        for c in v:
            if abs(c) > 1e-9 * big:
                v = v * (abs(c) / c)
                break
        return v

    def distance(self, other: ProjectiveLine) -> float:
        """Sine of the angle between the dual vectors (scale invariant)."""
        a, b = self.normalized(), other.normalized()
        return float(np.sqrt(max(0.0, 1.0 - abs(np.vdot(a, b)) ** 2)))

    def parametrization(self):
        """Points P, Q spanning the line; the parameter z gives P + z Q.

        The pivot k is the last index of largest |lambda_k|; with the other
        indices i < j, P = e_i - (lambda_i/lambda_k) e_k, Q = e_j - (lambda_j/lambda_k) e_k.
        """
        lam = self.coords
        mags = [abs(complex(c)) for c in lam]
        k = max(i for i in range(3) if mags[i] == max(mags))
        i, j = [m for m in range(3) if m != k]
        zero = Fraction(0) if self.exact else 0j
        one = Fraction(1) if self.exact else 1 + 0j
        p = [zero] * 3
        q = [zero] * 3
        p[i], p[k] = one, -lam[i] / lam[k]
        q[j], q[k] = one, -lam[j] / lam[k]
        return tuple(p), tuple(q)

    def contains(self, point, tol: float = 1e-10) -> bool:
        x = np.array([complex(v) for v in point])
        lam = np.array([complex(c) for c in self.coords])
        return abs(lam @ x) <= tol * np.linalg.norm(lam) * np.linalg.norm(x)

    def __repr__(self):
        return f"ProjectiveLine({list(self.coords)})"

    def to_json(self) -> list:
        v = self.normalized()
        return [[float(c.real), float(c.imag)] for c in v]


def _mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def restriction_coefficients(q: QuarticForm, p, qq) -> list:
    """Ascending coefficients of the binary quartic z -> q(P + z Q)."""
    out = [0] * 5
    for m, c in q.coeffs.items():
        term = [c]
        for idx, e in enumerate(m):
            lin = [p[idx], qq[idx]]
            for _ in range(e):
                term = _mul(term, lin)
        for k, v in enumerate(term):
            out[k] = out[k] + v
    return out


@dataclass
class BinaryQuartic:
    """Restriction of a quartic to a parametrized line (ascending coefficients)."""

    coeffs: tuple
    base_point: tuple
    direction: tuple

    @property
    def exact(self) -> bool:
        return all(_is_exact(c) for c in self.coeffs)

    def to_polynomial(self, var: str = "z") -> Polynomial:
        return Polynomial.from_coefficients([Fraction(c) for c in self.coeffs], var)

    def vector(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs])


def restrict_to_line(q: QuarticForm, l: ProjectiveLine) -> BinaryQuartic:
    p, d = l.parametrization()
    if not (q.exact and l.exact):
        p = tuple(complex(x) for x in p)
        d = tuple(complex(x) for x in d)
    return BinaryQuartic(tuple(restriction_coefficients(q, p, d)), p, d)


# -- bitangent certificates ----------------------------------------------------


@dataclass
class BitangentCertificate:
    line: ProjectiveLine
    accepted: bool
    quadratic: tuple = ()  # ascending (q0, q1, q2) in the line parameter
    scale: complex = 0
    residual: float = float("inf")
    tangency_points: list = field(default_factory=list)
    is_inflection: bool = False
    parametrization: tuple = ()

    def __bool__(self):
        return self.accepted

    def to_json(self) -> dict:
        def cplx(z):
            z = complex(z)
            return [z.real, z.imag]

        return {
            "line": self.line.to_json(),
            "accepted": self.accepted,
            "quadratic": [cplx(c) for c in self.quadratic],
            "residual": self.residual,
            "tangency_points": [[cplx(c) for c in pt] for pt in self.tangency_points],
            "is_inflection": self.is_inflection,
        }


def _square_root(c: list):
    """(scale, quadratic) with c ~ scale * quadratic^2, by coefficient matching."""
    mag = [abs(complex(x)) for x in c]
    norm = float(np.sqrt(sum(m * m for m in mag)))
    if max(mag[0], mag[4]) >= 1e-6 * norm:
        if mag[4] >= mag[0]:
            u = c[3] / (2 * c[4])
            v = (c[2] / c[4] - u * u) / 2
            return c[4], (v, u, 1)
        u = c[1] / (2 * c[0])
        v = (c[2] / c[0] - u * u) / 2
        scale, quad = c[0], (1, u, v)
    else:
        scale, quad = c[2], (0, 1, 0)
    q2 = quad[2]
    if q2 != 0 and abs(complex(q2)) >= 1e-6 * max(abs(complex(x)) for x in quad):
        quad = tuple(x / q2 for x in quad)
        scale = scale * q2 * q2
    return scale, quad


def _binary_roots(quad) -> list:
    """Roots (z : w) of q0 w^2 + q1 z w + q2 z^2 as homogeneous pairs."""
    q0, q1, q2 = (complex(x) for x in quad)
    if abs(q2) >= abs(q0):
        if q2 == 0:
            return [(1 + 0j, 0j), (1 + 0j, 0j)]
        d = np.sqrt(q1 * q1 - 4 * q0 * q2 + 0j)
        r1 = (-q1 + d) / (2 * q2)
        r2 = (-q1 - d) / (2 * q2)
        # the smaller root from Vieta for accuracy
        if abs(r1) < abs(r2) and r2 != 0:
            r1 = (q0 / q2) / r2
        elif r1 != 0:
            r2 = (q0 / q2) / r1
        return [(r1, 1 + 0j), (r2, 1 + 0j)]
    d = np.sqrt(q1 * q1 - 4 * q0 * q2 + 0j)
    s1 = (-q1 + d) / (2 * q0)
    s2 = (-q1 - d) / (2 * q0)
    return [(1 + 0j, s1), (1 + 0j, s2)]


def _point_distance(x, y) -> float:
    a = np.asarray(x, dtype=complex)
    b = np.asarray(y, dtype=complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return float(np.sqrt(max(0.0, 1.0 - abs(np.vdot(a, b)) ** 2)))


def is_bitangent(q: QuarticForm, l: ProjectiveLine, tol: float = CERT_TOL) -> BitangentCertificate:
    """Certificate that q restricted to l is c * quadratic^2 (``accepted`` is False otherwise)."""
    r = restrict_to_line(q, l)
    c = list(r.coeffs)
    if all(x == 0 for x in c):
        raise DegenerateRestriction(f"{l} lies on the quartic")
    scale, quad = _square_root(c)
    sq = _mul(list(quad), list(quad))
    diff = [c[k] - scale * sq[k] for k in range(5)]
    num = float(np.linalg.norm([complex(x) for x in diff]))
    residual = num / float(np.linalg.norm([complex(x) for x in c]))
    cert = BitangentCertificate(l, residual <= tol, tuple(quad), scale, residual,
                                parametrization=(r.base_point, r.direction))
    if cert.accepted:
        p = np.array([complex(x) for x in r.base_point])
        d = np.array([complex(x) for x in r.direction])
        pts = []
        for z, w in _binary_roots(quad):
            pt = p * w + d * z
            pts.append(pt / pt[np.argmax(np.abs(pt))])
        cert.tangency_points = pts
        cert.is_inflection = _point_distance(pts[0], pts[1]) <= INFLECTION_TOL
    return cert


# -- enumeration -------------------------------------------------------------------

_CHARTS = (
    # (substitution for (Z0, Z1, Z2), dual coordinates of the line as a function of (a, b))
    (("1", "z", "a*z+b"), lambda a, b: (b, a, -1)),
    (("1", "a*z+b", "z"), lambda a, b: (b, -1, a)),
    (("a*z+b", "z", "1"), lambda a, b: (-1, a, b)),
)


class _ChartSystem:
    """Restriction coefficients c_k(a, b) of one dual-plane chart and the square conditions."""

    def __init__(self, q: QuarticForm, chart: int):
        subs, self.dual = _CHARTS[chart]
        p = q.to_polynomial().substitute({v: Polynomial.parse(s) for v, s in zip(VARS, subs)})
        cs = p.coefficients("z") if "z" in p.variables else [p]
        cs = (cs + [Polynomial.const(0)] * 5)[:5]
        self.c = [ck.with_variables(("a", "b")) for ck in cs]
        c0, c1, c2, c3, c4 = self.c
        self.e3 = 8 * c0 ** 2 * c3 - c1 * (4 * c0 * c2 - c1 ** 2)
        self.e4 = 64 * c0 ** 3 * c4 - (4 * c0 * c2 - c1 ** 2) ** 2
        self.da = [ck.derivative("a") for ck in self.c]
        self.db = [ck.derivative("b") for ck in self.c]

    def eliminant(self) -> Polynomial:
        r = resultant(self.e3, self.e4, "b")
        if r.is_zero():
            g = gcd(self.e3, self.e4)
            r = resultant(self.e3.exact_div(g), self.e4.exact_div(g), "b")
        return r

    @staticmethod
    def _b_table(e: Polynomial) -> list:
        """Coefficients of e in b, each as a descending float array in a."""
        out = []
        for ck in e.coefficients("b"):
            cs = ck.with_variables(("a",)).trimmed().univariate_coefficients() if not ck.is_zero() else [0]
            out.append(np.array([float(c) for c in cs[::-1]]))
        return out

    def b_candidates(self, a0: complex) -> list:
        """Roots in b of E3(a0, b), or of E4(a0, b) when E3(a0, .) vanishes numerically."""
        for e in (self.e3, self.e4):
            table = self._b_table(e)
            vals = np.array([np.polyval(c, a0) for c in table], dtype=complex)
            ref = np.array([np.polyval(np.abs(c), abs(a0)) for c in table])
            live = np.nonzero(np.abs(vals) > 1e-10 * np.maximum(ref, 1e-300))[0]
            if live.size == 0:
                continue
            top = int(live[-1])
            if top == 0:
                return []
            return list(complex_roots(vals[: top + 1][::-1]).roots)
        return []

    def newton(self, a: complex, b: complex, steps: int = 40):
        """Polish (a, b) on c_k(a, b) = (q0 + q1 z + q2 z^2)^2 coefficients."""

        def ev(polys, a, b):
            return np.array([p.evaluate_float(a=a, b=b) if not p.is_constant() else complex(p.constant_value())
                             for p in polys], dtype=complex)

        c = ev(self.c, a, b)
        scale, quad = _square_root(list(c))
        root = np.sqrt(complex(scale))
        x = np.array([a, b, *(root * complex(v) for v in quad)], dtype=complex)

        def resid(x):
            a, b, q0, q1, q2 = x
            sq = np.array([q0 * q0, 2 * q0 * q1, q1 * q1 + 2 * q0 * q2, 2 * q1 * q2, q2 * q2])
            return ev(self.c, a, b) - sq

        f = resid(x)
        best, best_n = x.copy(), np.linalg.norm(f)
        for _ in range(steps):
            a, b, q0, q1, q2 = x
            jac = np.zeros((5, 5), dtype=complex)
            jac[:, 0] = ev(self.da, a, b)
            jac[:, 1] = ev(self.db, a, b)
            jac[:, 2] = [-2 * q0, -2 * q1, -2 * q2, 0, 0]
            jac[:, 3] = [0, -2 * q0, -2 * q1, -2 * q2, 0]
            jac[:, 4] = [0, 0, -2 * q0, -2 * q1, -2 * q2]
            step = np.linalg.lstsq(jac, -f, rcond=None)[0]
            x = x + step
            f = resid(x)
            n = np.linalg.norm(f)
            if not np.isfinite(n):
                break
            if n < best_n:
                best, best_n = x.copy(), n
            if np.linalg.norm(step) <= 1e-15 * max(1.0, np.linalg.norm(x)):
                break
        return complex(best[0]), complex(best[1])


def find_bitangents(q: QuarticForm, strict: bool = True, tol: float = CERT_TOL) -> list:
    """All distinct certified bitangents of a quartic with rational coefficients.

    Each of the three dual-plane charts is eliminated exactly (resultant in b,
    squarefree part in a); roots are back-substituted, Newton-polished and
    certified with ``is_bitangent``.  Raises CountMismatch when strict and the
    number of distinct lines is not 28.
    """
    if not q.exact:
        raise ValueError("find_bitangents needs exact rational coefficients")
    found: list[BitangentCertificate] = []
    for chart in range(3):
        system = _ChartSystem(q, chart)
        elim = system.eliminant()
        if "a" not in elim.free_variables():
            continue
        sf = squarefree_part(elim, "a")
        for a0 in complex_roots(sf).distinct():
            for b0 in system.b_candidates(a0):
                a1, b1 = system.newton(a0, b0)
                line = ProjectiveLine(system.dual(a1, b1))
                try:
                    cert = is_bitangent(q, line, tol)
                except DegenerateRestriction:
                    continue
                if not cert.accepted:
                    continue
                for i, other in enumerate(found):
                    if other.line.distance(line) <= DEDUP_TOL:
                        if cert.residual < other.residual:
                            found[i] = cert
                        break
                else:
                    found.append(cert)

    def key(cert):
        v = cert.line.normalized()
        return tuple(round(float(x), 8) for c in v for x in (c.real, c.imag))

    found.sort(key=key)
    if strict and len(found) != 28:
        raise CountMismatch(f"found {len(found)} distinct bitangents, expected 28", found)
    return found


# -- smoothness ----------------------------------------------------------------------


def _rational_roots(p: Polynomial) -> list:
    """Rational roots of a univariate polynomial, found numerically and confirmed exactly."""
    out = []
    coeffs = p.univariate_coefficients()
    if len(coeffs) < 2:
        return out
    for r in complex_roots([complex(c) for c in coeffs[::-1]]).distinct():
        if abs(r.imag) > 1e-6:
            continue
        cand = Fraction(r.real).limit_denominator(10 ** 6)
        if p.trimmed()(**{p.free_variables()[0]: cand}) == 0 and cand not in out:
            out.append(cand)
    return out


def _univariate_common_root(polys) -> bool:
    g = Polynomial.const(0)
    for p in polys:
        g = gcd(g, p)
    return not g.is_constant() or g.is_zero()


def _singular_abscissa_eliminant(hs) -> Polynomial:
    """A polynomial in Z1 vanishing at every common zero of hs.

    Pairs that both involve Z2 contribute their resultant in Z2; a partial
    free of Z2 contributes itself (the resultant of two Z2-free polynomials
    is a constant and would wrongly certify smoothness).
    """
    cands = []
    for i in range(len(hs)):
        for j in range(i + 1, len(hs)):
            a, b = hs[i], hs[j]
            ia, ib = "Z2" in a.free_variables(), "Z2" in b.free_variables()
            if ia and ib:
                cands.append(resultant(a, b, "Z2"))
            else:
                cands.extend(h for h, inv in ((a, ia), (b, ib)) if not inv)
    elim = Polynomial.const(0)
    for c in cands:
        if not c.is_zero():
            elim = gcd(elim, c)
    return elim


def is_smooth(q: QuarticForm) -> bool:
    """True iff the partial derivatives have no common projective zero.

    Exact where possible: a shared factor of two partials, a common zero on
    the line Z0 = 0, or a rational singular abscissa are all decided in Q.
    Remaining candidates from the resultant eliminant are tested numerically;
    a normalized residual within [1e-8, 1e-6] raises Indeterminate.
    """
    if not q.exact:
        raise ValueError("is_smooth needs exact rational coefficients")
    p = q.to_polynomial()
    g0, g1, g2 = (p.derivative(v).with_variables(VARS) for v in VARS)
    if not gcd(g1, g2).is_constant() or g1.is_zero() or g2.is_zero():
        return False
    # points at infinity: (0, 1, z) and (0, 0, 1)
    at_inf = [g.substitute({"Z0": 0, "Z1": 1}) for g in (g0, g1, g2)]
    if _univariate_common_root(at_inf):
        return False
    if all(g(Z0=0, Z1=0, Z2=1) == 0 for g in (g0, g1, g2)):
        return False
    # affine chart Z0 = 1
    h0, h1, h2 = (g.substitute({"Z0": 1}) for g in (g0, g1, g2))
    elim = _singular_abscissa_eliminant((h0, h1, h2))
    if elim.is_zero():
        return False
    if elim.is_constant():
        return True
    elim = squarefree_part(elim, "Z1") if "Z1" in elim.free_variables() else elim
    rational = _rational_roots(elim)
    for x in rational:
        if _univariate_common_root([h.substitute({"Z1": x}) for h in (h0, h1, h2)]):
            return False
    norms = [sum(abs(float(c)) for c in h.terms.values()) for h in (h0, h1, h2)]
    for z1 in complex_roots(elim).distinct():
        if any(abs(z1 - float(x)) < 1e-9 for x in rational):
            continue
        rho = _chart_residual((h0, h1, h2), norms, z1)
        if rho <= SMOOTH_ACCEPT:
            return False
        if rho < SMOOTH_BAND:
            raise Indeterminate(f"singular-point residual {rho:.3g} at Z1 = {z1} is inside the indeterminate band")
    return True


def _chart_residual(hs, norms, z1: complex) -> float:
    """min over candidate Z2 of max_k |h_k(z1, Z2)| / (norm_k (1 + |z1| + |Z2|)^3)."""
    for h in hs:
        if "Z2" not in h.free_variables():
            continue
        cs = np.array([c.evaluate_float(Z1=z1) + 0j if not c.is_constant() else complex(c.constant_value())
                       for c in h.coefficients("Z2")])
        if not np.any(np.abs(cs[1:]) > 1e-12 * np.max(np.abs(cs))):
            continue
        best = np.inf
        for z2 in complex_roots(cs[::-1]).roots:
            size = (1 + abs(z1) + abs(z2)) ** 3
            rho = max(abs(complex(hk.evaluate_float(Z1=z1, Z2=z2))) / (nk * size) for hk, nk in zip(hs, norms))
            best = min(best, rho)
        return float(best)
    return float("inf")
