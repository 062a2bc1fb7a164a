"""Sylvester resultants evaluated by fraction-free (Bareiss) elimination."""
from __future__ import annotations

from .polynomial import Polynomial


def sylvester_matrix(f: Polynomial, g: Polynomial, var: str) -> list[list[Polynomial]]:
    fc = f.coefficients(var)[::-1]  # descending
    gc = g.coefficients(var)[::-1]
    m, n = len(fc) - 1, len(gc) - 1
    size = m + n
    rest = tuple(v for v in sorted(set(f.variables) | set(g.variables)) if v != var)
    zero = Polynomial({}, rest)
    rows = []
    for i in range(n):
        rows.append([zero] * i + fc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + gc + [zero] * (size - n - 1 - i))
    return rows


def bareiss_determinant(matrix) -> Polynomial:
    """Determinant of a square matrix over an integral domain (entries support +, -, *, exact_div)."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return Polynomial.const(1)
    sign = 1
    prev = Polynomial.const(1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Polynomial.const(0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                v = pivot * row_i[j] - aik * row_k[j]
                row_i[j] = v.exact_div(prev) if not prev.is_constant() else v * (1 / prev.constant_value())
            row_i[k] = Polynomial.const(0)
        prev = pivot
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def resultant(f: Polynomial, g: Polynomial, var: str) -> Polynomial:
    """Res_var(f, g) = lc(f)^deg(g) * prod g(roots of f).

    Degrees are the actual degrees in ``var``.  If one argument does not involve
    ``var`` the result is that argument raised to the other's degree.
    """
    f = Polynomial.coerce(f)
    g = Polynomial.coerce(g)
    if f.is_zero() or g.is_zero():
        return Polynomial.const(0)
    m, n = f.degree(var), g.degree(var)
    if m == 0:
        return f ** n
    if n == 0:
        return g ** m
    return bareiss_determinant(sylvester_matrix(f, g, var)).trimmed()
