"""Elliptic periods of E_lambda: y^2 = x(x-1)(x-lambda), and their Picard-Fuchs equation.

P1 = int_0^1 dx / sqrt(x(x-1)(x-lambda)) and P2 = int_1^oo of the same
integrand (compactified by x = 1/s), with the principal square root of the
complex product along the real path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .numkit import SingularWeight, integrate_1d
from .poly import DiffOperator, Polynomial, hypergeometric_operator, op_apply_numeric, picard_fuchs_operator

HALF = Fraction(1, 2)
W_BOTH = SingularWeight(-HALF, -HALF)


class BranchPointOnPath(ValueError):
    pass


class OutsideDisk(ValueError):
    pass


@dataclass(frozen=True)
class PeriodValue:
    lam: complex
    P1: complex
    P2: complex
    method: str
    error_estimate: float = 0.0

    def to_json(self) -> dict:
        def c(z):
            z = complex(z)
            return [z.real, z.imag]

        return {"lambda": c(self.lam), "P1": c(self.P1), "P2": c(self.P2), "method": self.method,
                "error_estimate": self.error_estimate}


def _principal_inv_sqrt(prod):
    prod = np.asarray(prod) + 0j
    # + 0.0 turns a signed -0.0 imaginary part into +0.0 so negative reals map to +i
    prod = prod.real + 1j * (prod.imag + 0.0)
    return 1 / np.sqrt(prod)


def _p1_pieces(lam: complex):
    """(interval, integrand(x, x - a, b - x)) pieces of P1, split at a real lam in (0, 1)."""
    def whole(x, dlo, dhi):
        return _principal_inv_sqrt(dlo * -dhi * (x - lam))

    if not (lam.imag == 0 and 0 < lam.real < 1):
        return [((0.0, 1.0), whole)]
    c = lam.real

    def left(x, dlo, dhi):
        return _principal_inv_sqrt(dlo * (x - 1) * -dhi)

    def right(x, dlo, dhi):
        return _principal_inv_sqrt(x * -dhi * dlo)

    return [((0.0, c), left), ((c, 1.0), right)]


def _p2_pieces(lam: complex):
    """Pieces of P2 in s = 1/x, where s (x - 1) = 1 - s and s (x - lam) = 1 - lam s."""
    def g(s, one_minus_s, e):
        return _principal_inv_sqrt(one_minus_s * e / s ** 3) / (s * s)

    def whole(s, dlo, dhi):
        return g(dlo, dhi, 1 - lam * s)

    if not (lam.imag == 0 and lam.real > 1):
        return [((0.0, 1.0), whole)]
    c = 1 / lam.real

    def left(s, dlo, dhi):
        return g(dlo, 1 - s, lam * dhi)

    def right(s, dlo, dhi):
        return g(s, dhi, -lam * dlo)

    return [((0.0, c), left), ((c, 1.0), right)]


def _integrate_pieces(pieces, tol: float, strict: bool):
    if strict and len(pieces) > 1:
        raise BranchPointOnPath(f"branch point at {pieces[0][0][1]} lies on the integration path")
    total, err = 0j, 0.0
    for interval, f in pieces:
        r = integrate_1d(f, interval, W_BOTH, tol / len(pieces), offsets=True)
        total += r.value
        err += r.error_estimate
    return total, err


def period_values(lam, tol: float = 1e-12, method: str = "quadrature", strict: bool = False) -> PeriodValue:
    """P1 and P2 at lam by quadrature, or by the AGM for real lam < 0 (``method='agm'``).

    A real lam in (0, 1) or (1, oo) lies on one of the paths; by default the
    path is split there (still the principal branch of the product), and
    ``strict=True`` raises BranchPointOnPath instead.
    """
    lam = complex(lam)
    if lam in (0, 1):
        raise ValueError("lambda must avoid 0 and 1")
    if method == "agm":
        return PeriodValue(lam, p1_agm(lam), p2_agm(lam), "agm")
    p1, e1 = _integrate_pieces(_p1_pieces(lam), tol, strict)
    p2, e2 = _integrate_pieces(_p2_pieces(lam), tol, strict)
    return PeriodValue(lam, complex(p1), complex(p2), "quadrature", float(e1 + e2))


def agm(a: float, b: float) -> float:
    # quadratic convergence; 40 steps is far more than double precision needs
    for _ in range(40):
        if abs(a - b) <= 4e-16 * abs(a):
            break
        a, b = (a + b) / 2, math.sqrt(a * b)
    return (a + b) / 2


def p1_agm(lam) -> complex:
    """P1 for real lam < 0: -i pi / (sqrt(1 + mu) AGM(1, sqrt(mu/(1 + mu)))), mu = -lam."""
    lam = complex(lam)
    if lam.imag != 0 or lam.real >= 0:
        raise ValueError("the AGM evaluation is implemented for real lambda < 0 only")
    mu = -lam.real
    return -1j * math.pi / (math.sqrt(1 + mu) * agm(1.0, math.sqrt(mu / (1 + mu))))


def p2_agm(lam) -> complex:
    """P2 = pi 2F1(1/2, 1/2; 1; lam) = pi / AGM(1, sqrt(1 - lam)) for real lam < 1."""
    lam = complex(lam)
    if lam.imag != 0 or lam.real >= 1:
        raise ValueError("the AGM evaluation of P2 needs real lambda < 1")
    return complex(math.pi / agm(1.0, math.sqrt(1 - lam.real)))


# -- hypergeometric series -------------------------------------------------------------


def hypergeometric_coefficients(a, b, c, N: int) -> list:
    """(a)_n (b)_n / ((c)_n n!) for n = 0..N, exactly."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if c.denominator == 1 and c <= 0:
        raise ValueError("c must not be a nonpositive integer")
    out = [Fraction(1)]
    for n in range(N):
        out.append(out[-1] * (a + n) * (b + n) / ((c + n) * (n + 1)))
    return out


def hypergeometric_polynomial(a, b, c, N: int, variable: str = "lam") -> Polynomial:
    return Polynomial.from_coefficients(hypergeometric_coefficients(a, b, c, N), variable)


def hypergeometric_series(a, b, c, lam, N: int = 60) -> complex:
    lam = complex(lam)
    if abs(lam) >= 1:
        raise OutsideDisk(f"|lambda| = {abs(lam)} >= 1")
    total = 0j
    for coef in reversed(hypergeometric_coefficients(a, b, c, N)):
        total = total * lam + float(coef)
    return total


# -- Picard-Fuchs annihilation -------------------------------------------------------------


@dataclass(frozen=True)
class AnnihilationReport:
    t0: float
    residual_P1: float
    residual_P2: float
    raw_P1: complex
    raw_P2: complex

    def to_json(self) -> dict:
        return {"t0": self.t0, "residual_P1": self.residual_P1, "residual_P2": self.residual_P2}


def _relative_residual(D: DiffOperator, f, x0: float, h: float) -> tuple:
    from .numkit import fd_derivative

    raw = op_apply_numeric(D, f, x0, h)
    scale = abs(f(x0)) + abs(fd_derivative(f, x0, 1, h)) + abs(fd_derivative(f, x0, 2, h))
    return abs(raw) / scale, raw


def pf_annihilation_report(t0: float, h: float = 1e-2, tol: float = 1e-13,
                           operator: DiffOperator | None = None) -> AnnihilationReport:
    """Relative residuals of D_t applied to P1(-2t) and P2(-2t) at t0 > 0 (finite differences in t)."""
    if t0 <= 0:
        raise ValueError("t0 must be positive")
    D = operator if operator is not None else picard_fuchs_operator()
    r1, raw1 = _relative_residual(D, lambda t: period_values(-2 * t, tol).P1, t0, h)
    r2, raw2 = _relative_residual(D, lambda t: period_values(-2 * t, tol).P2, t0, h)
    return AnnihilationReport(t0, r1, r2, raw1, raw2)


def hg_annihilation_report(lam0: float, h: float = 2e-2, tol: float = 1e-13) -> AnnihilationReport:
    """Same residuals in the lambda variable with the (1/2, 1/2, 1) hypergeometric operator."""
    D = hypergeometric_operator(HALF, HALF, 1)
    r1, raw1 = _relative_residual(D, lambda x: period_values(x, tol).P1, lam0, h)
    r2, raw2 = _relative_residual(D, lambda x: period_values(x, tol).P2, lam0, h)
    return AnnihilationReport(lam0, r1, r2, raw1, raw2)
