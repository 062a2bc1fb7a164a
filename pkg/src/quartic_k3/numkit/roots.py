"""Complex roots of univariate polynomials: companion matrix, Newton polish, clustering."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CLUSTER_RADIUS = 1e-6
RESIDUAL_TARGET = 1e-8


class IllConditioned(ArithmeticError):
    pass


@dataclass
class RootSet:
    roots: list
    clusters: list = field(default_factory=list)  # (center, multiplicity)
    residuals: list = field(default_factory=list)
    ill_conditioned: bool = False

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    def __getitem__(self, i):
        return self.roots[i]

    def distinct(self) -> list:
        return [c for c, _ in self.clusters]


def _coeffs(p) -> np.ndarray:
    if hasattr(p, "univariate_coefficients"):
        c = [complex(x) for x in p.univariate_coefficients()][::-1]
    else:
        c = [complex(x) for x in p]
    return np.array(c, dtype=complex)


def backward_residual(c: np.ndarray, r: complex) -> float:
    """|p(r)| / sum |c_i| |r|^i: the relative backward error of r as a root."""
    val = np.polyval(c, r)
    scale = np.polyval(np.abs(c), abs(r))
    return float(abs(val) / scale) if scale else float(abs(val))


def _polish(c: np.ndarray, dc: np.ndarray, r: complex, steps: int = 8) -> complex:
    best, best_res = r, backward_residual(c, r)
    for _ in range(steps):
        d = np.polyval(dc, r)
        if d == 0:
            break
        r = r - np.polyval(c, r) / d
        res = backward_residual(c, r)
        if not np.isfinite(res):
            break
        if res < best_res:
            best, best_res = r, res
        if best_res < 1e-16:
            break
    return best


def _cluster(roots: list, radius: float) -> list:
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= radius * max(1.0, abs(roots[i])):
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(roots[i])
    out = [(complex(np.mean(g)), len(g)) for g in groups.values()]
    out.sort(key=lambda cm: (round(cm[0].real, 9), round(cm[0].imag, 9)))
    return out


def complex_roots(p, trim: float = 1e-14, radius: float = CLUSTER_RADIUS,
                  strict: bool = False) -> RootSet:
    """All roots of p (coefficients highest degree first, or a univariate Polynomial).

    Leading coefficients below ``trim`` times the largest are dropped.  Each
    root is Newton-polished; the residual reported is the relative backward
    error.  ``ill_conditioned`` is set when some residual exceeds 1e-8, and
    ``strict`` turns that into an IllConditioned exception.
    """
    c = _coeffs(p)
    big = np.max(np.abs(c)) if c.size else 0.0
    if big == 0:
        raise ValueError("zero polynomial")
    nz = np.nonzero(np.abs(c) > trim * big)[0]
    c = c[nz[0]:]
    if c.size < 2:
        raise ValueError("polynomial has degree < 1 after trimming")
    raw = np.roots(c)
    dc = np.polyder(c)
    roots = [_polish(c, dc, complex(r)) for r in raw]
    residuals = [backward_residual(c, r) for r in roots]
    ill = any(r > RESIDUAL_TARGET for r in residuals)
    if ill and strict:
        raise IllConditioned(f"max residual {max(residuals):.3g} exceeds {RESIDUAL_TARGET}")
    return RootSet(roots, _cluster(roots, radius), residuals, ill)
