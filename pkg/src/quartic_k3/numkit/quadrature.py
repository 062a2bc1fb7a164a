"""Adaptive Gauss-Kronrod quadrature with endpoint power-singularity removal.

Endpoint singularities of the form (x-a)^e * smooth are removed by the
substitution x = a + h s^k, where k is the denominator of e; the transformed
integrand is then bounded at s = 0 and an ordinary adaptive G7/K15 rule
applies.  Refinement order is fixed by a heap keyed on (-error, position), and
the final sum is taken left-to-right with ``math.fsum``, so results are
reproducible bit for bit.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DEFAULT_BUDGET = 2_000_000

# 15-point Kronrod nodes on [-1, 1] (nonnegative half) and weights; the
# odd-indexed nodes are the 7-point Gauss nodes.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_KW = np.concatenate([_WK[:-1], _WK[::-1]])
_GW = np.zeros(15)
_GW[1:7:2] = _WG[:3]
_GW[7] = _WG[3]
_GW[9:15:2] = _WG[2::-1]


class NonConvergence(RuntimeError):
    """Node budget exhausted before the tolerance was met; ``result`` holds the best estimate."""

    def __init__(self, message: str, result: QuadratureResult):
        super().__init__(message)
        self.result = result


class InvalidWeight(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    nodes_used: int
    converged: bool = True

    def __float__(self):
        return float(np.real(self.value))


@dataclass(frozen=True)
class SingularWeight:
    """Exponents of the endpoint power singularities of the integrand."""

    exponent_at_lower: Fraction = Fraction(0)
    exponent_at_upper: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("exponent_at_lower", "exponent_at_upper"):
            e = Fraction(getattr(self, name))
            if e <= -1:
                raise InvalidWeight(f"{name} = {e} is not integrable (must exceed -1)")
            object.__setattr__(self, name, e)

    @staticmethod
    def power(e: Fraction) -> int:
        """Substitution power k for an exponent; 1 means no substitution is needed."""
        e = Fraction(e)
        if e.denominator == 1 and e >= 0:
            return 1
        return e.denominator


NO_WEIGHT = SingularWeight()


def _call(f, x: np.ndarray) -> np.ndarray:
    """Evaluate f on a node array; falls back to a Python loop for scalar-only integrands."""
    try:
        y = np.asarray(f(x))
    except (TypeError, ValueError):
        y = None
    if y is None or y.shape[-1:] != x.shape:
        y = np.stack([np.asarray(f(float(xi))) for xi in x], axis=-1)
    return y


def _gk(g, a: float, b: float):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    y = _call(g, c + h * _NODES)
    k = h * (y @ _KW)
    gs = h * (y @ _GW)
    y0 = y if y.ndim == 1 else y[0]
    err = abs(complex(np.ravel(k)[0] - np.ravel(gs)[0]))
    floor = 50 * np.finfo(float).eps * abs(h) * float(np.abs(y0) @ _KW)
    return k, max(err, floor), floor


def _fsum(values) -> complex | float:
    values = list(values)
    re = math.fsum(float(np.real(v)) for v in values)
    if any(np.iscomplexobj(v) for v in values):
        return complex(re, math.fsum(float(np.imag(v)) for v in values))
    return re


def _adaptive(g, a: float, b: float, tol: float, budget: int):
    """Globally adaptive GK15 on [a, b]; returns (values per interval sorted, error, nodes, converged)."""
    k, err, floor = _gk(g, a, b)
    nodes = 15
    heap = [(-err, a, b, k, err, floor)]
    frozen = []
    total = err
    min_width = 64 * np.finfo(float).eps * max(abs(a), abs(b), 1e-300)
    while total > tol and heap:
        if nodes + 30 > budget:
            break
        _, lo, hi, kv, e, fl = heapq.heappop(heap)
        if e <= fl or hi - lo < min_width:
            frozen.append((lo, hi, kv, e))
            continue
        mid = 0.5 * (lo + hi)
        k1, e1, f1 = _gk(g, lo, mid)
        k2, e2, f2 = _gk(g, mid, hi)
        nodes += 30
        total += e1 + e2 - e
        heapq.heappush(heap, (-e1, lo, mid, k1, e1, f1))
        heapq.heappush(heap, (-e2, mid, hi, k2, e2, f2))
    parts = sorted([(lo, hi, kv, e) for _, lo, hi, kv, e, _ in heap] + frozen, key=lambda p: p[0])
    err = math.fsum(p[3] for p in parts)
    converged = err <= tol or not heap
    return [p[2] for p in parts], err, nodes, converged


def _sum_components(parts):
    parts = [np.atleast_1d(np.asarray(p)) for p in parts]
    return [_fsum(p[i] for p in parts) for i in range(parts[0].shape[0])]


def _transformed(f, a: float, b: float, k: int, lower: bool, offsets: bool):
    """Integrand in s for x = a + h s^k (lower) or x = b - h s^k (upper), h = b - a, with Jacobian.

    With ``offsets`` f receives (x, x - a, b - x); the distance to the
    substituted endpoint is h s^k itself and never suffers cancellation.
    """
    h = b - a

    def g(s):
        s = np.asarray(s, dtype=float)
        d = h * s ** k
        jac = h if k == 1 else k * h * s ** (k - 1)
        if lower:
            x, dlo, dhi = a + d, d, h - d
        else:
            x, dlo, dhi = b - d, h - d, d
        return (f(x, dlo, dhi) if offsets else f(x)) * jac

    return g


def _pieces(f, a: float, b: float, weight: SingularWeight, offsets: bool = False):
    """Split [a, b] into substituted pieces over s in [0, 1]."""
    kl = SingularWeight.power(weight.exponent_at_lower)
    ku = SingularWeight.power(weight.exponent_at_upper)
    if kl == 1 and ku == 1:
        if offsets:
            return [(lambda x: f(x, x - a, b - x), a, b)]
        return [(f, a, b)]
    if ku == 1:
        return [(_transformed(f, a, b, kl, True, offsets), 0.0, 1.0)]
    if kl == 1:
        return [(_transformed(f, a, b, ku, False, offsets), 0.0, 1.0)]
    m = 0.5 * (a + b)
    if offsets:
        # the half-intervals keep distances to the original endpoints
        left = lambda x, dlo, dhi: f(x, dlo, dhi + (b - m))  # noqa: E731
        right = lambda x, dlo, dhi: f(x, dlo + (m - a), dhi)  # noqa: E731
    else:
        left = right = f
    return [
        (_transformed(left, a, m, kl, True, offsets), 0.0, 1.0),
        (_transformed(right, m, b, ku, False, offsets), 0.0, 1.0),
    ]


def _integrate_vector(f, a: float, b: float, weight: SingularWeight, tol: float, budget: int,
                      offsets: bool = False):
    """Integrate a possibly vector-valued integrand; error control uses component 0."""
    pieces = _pieces(f, a, b, weight, offsets)
    values, err, nodes, ok = [], 0.0, 0, True
    for g, lo, hi in pieces:
        parts, e, n, c = _adaptive(g, lo, hi, tol / len(pieces), max(budget - nodes, 15))
        values.extend(parts)
        err += e
        nodes += n
        ok = ok and c
    return _sum_components(values), err, nodes, ok


def integrate_1d(f, interval, weight: SingularWeight | None = None, tol: float = 1e-10,
                 budget: int = DEFAULT_BUDGET, offsets: bool = False) -> QuadratureResult:
    """Integral of f over [a, b].

    ``f`` should accept a numpy array of nodes (scalar-only callables are
    detected and looped over).  ``weight`` declares the endpoint exponents of
    f, which must be > -1.  With ``offsets=True`` f is called as
    f(x, x - a, b - x) with the endpoint distances computed exactly, for
    integrands whose singular factors would otherwise cancel catastrophically.
    Raises NonConvergence if ``budget`` evaluations do not reach ``tol``.
    """
    weight = NO_WEIGHT if weight is None else weight
    a, b = float(interval[0]), float(interval[1])
    if not (np.isfinite(a) and np.isfinite(b)) or not a < b:
        raise ValueError(f"need finite a < b, got [{a}, {b}]")
    comps, err, nodes, ok = _integrate_vector(f, a, b, weight, tol, budget, offsets)
    res = QuadratureResult(comps[0], float(err), nodes, ok)
    if not ok:
        raise NonConvergence(f"error {err:.3g} > tol {tol:.3g} after {nodes} nodes", res)
    return res


def integrate_2d_iterated(f, outer, inner_bounds, outer_weight: SingularWeight | None = None,
                          inner_weight: SingularWeight | None = None, tol: float = 1e-8,
                          budget: int = DEFAULT_BUDGET) -> QuadratureResult:
    """Iterated integral  int_a^b int_{c(x)}^{d(x)} f(x, y) dy dx.

    Inner integrals run at tol / (2(b-a)); their error estimates are carried as
    a second component of the outer integrand, so the reported error is the
    outer estimate plus the integrated inner estimates.
    """
    a, b = float(outer[0]), float(outer[1])
    inner_tol = tol / (2 * (b - a))
    node_count = [0]
    failures = []

    def row(x: float):
        c, d = inner_bounds(x)
        c, d = float(c), float(d)
        if not d > c:
            return np.array([0.0, 0.0])
        try:
            r = integrate_1d(lambda y: f(x, y), (c, d), inner_weight, inner_tol, budget)
        except NonConvergence as exc:
            r = exc.result
            failures.append(x)
        node_count[0] += r.nodes_used
        return np.array([r.value, r.error_estimate])

    def outer_f(xs):
        xs = np.atleast_1d(xs)
        rows = [row(float(x)) for x in xs]
        return np.stack(rows, axis=-1)

    weight = NO_WEIGHT if outer_weight is None else outer_weight
    comps, err, nodes, ok = _integrate_vector(outer_f, a, b, weight, tol / 2, budget)
    total_err = float(err) + abs(float(np.real(comps[1])))
    res = QuadratureResult(comps[0], total_err, nodes + node_count[0], ok and not failures)
    if not res.converged:
        raise NonConvergence(
            f"2D integral did not converge (outer ok={ok}, inner failures={len(failures)})", res
        )
    return res
