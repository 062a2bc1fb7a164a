"""Exact arithmetic for even integral lattices given by Gram matrices.

Convention: the root lattices A1, D4 and E8 are taken negative definite, so
the K3 lattice U^3 + E8^2 has signature (3, 19).  Names may be combined as
"U+U(2)+D4^2+A1^2": "(k)" scales a Gram matrix by k, "^m" repeats a summand
and a leading "-" negates it.  "H" and "K3" name the two lattices of interest.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class UnknownName(KeyError):
    pass


class DegenerateLattice(ValueError):
    pass


def _cartan(n: int, edges) -> list:
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 2
    for i, j in edges:
        m[i][j] = m[j][i] = -1
    return m


# E8 Dynkin diagram: chain 0-1-2-3-4-5-6 with node 7 attached to node 4
_E8_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)]
_D4_EDGES = [(0, 1), (0, 2), (0, 3)]


def _neg(m):
    return [[-x for x in row] for row in m]


_BASE = {
    "U": [[0, 1], [1, 0]],
    "A1": [[-2]],
    "D4": _neg(_cartan(4, _D4_EDGES)),
    "E8": _neg(_cartan(8, _E8_EDGES)),
}
_ALIASES = {
    "H": "U+U(2)+D4^2+A1^2",
    "K3": "U^3+E8^2",
}


@dataclass(frozen=True)
class Lattice:
    gram: tuple

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)
        if n and determinant(g) == 0:
            raise DegenerateLattice("Gram matrix is singular")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def scaled(self, k: int) -> Lattice:
        if k == 0:
            raise DegenerateLattice("scaling by 0")
        return Lattice([[k * x for x in row] for row in self.gram])

    def negated(self) -> Lattice:
        return self.scaled(-1)

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def to_json(self) -> dict:
        return {"rank": self.rank, "signature": list(signature(self)), "discriminant": discriminant(self)}


def direct_sum(lattices) -> Lattice:
    lattices = list(lattices)
    n = sum(L.rank for L in lattices)
    g = [[0] * n for _ in range(n)]
    off = 0
    for L in lattices:
        for i, row in enumerate(L.gram):
            for j, x in enumerate(row):
                g[off + i][off + j] = x
        off += L.rank
    return Lattice(g)


_TERM = re.compile(r"^(-?)([A-Za-z][A-Za-z0-9]*)(?:\((-?\d+)\))?(?:\^(\d+))?$")


def builtin(name: str) -> Lattice:
    """Lattice from a name or a '+'-separated combination of names."""
    text = _ALIASES.get(name.strip(), name).replace(" ", "")
    if not text:
        raise UnknownName(name)
    parts = []
    for term in text.split("+"):
        m = _TERM.match(term)
        if not m or m.group(2) not in _BASE:
            raise UnknownName(f"unknown lattice {term!r} in {name!r}")
        sign, base, scale, power = m.groups()
        L = Lattice(_BASE[base])
        if scale is not None:
            L = L.scaled(int(scale))
        if sign:
            L = L.negated()
        parts.extend([L] * int(power or 1))
    return parts[0] if len(parts) == 1 else direct_sum(parts)


def determinant(gram) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix."""
    a = [list(row) for row in gram]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def discriminant(L: Lattice) -> int:
    return determinant(L.gram)


def signature(L: Lattice) -> tuple:
    """(positive, negative) inertia by symmetric Gaussian elimination over the rationals."""
    m = [[Fraction(x) for x in row] for row in L.gram]
    pos = neg = 0
    while m:
        n = len(m)
        k = next((i for i in range(n) if m[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if m[i][j] != 0), None)
            if pair is None:
                raise DegenerateLattice("zero block left during diagonalization")
            i, j = pair
            # e_i -> e_i + e_j makes the (i, i) entry 2 m[i][j] != 0
            for c in range(n):
                m[i][c] += m[j][c]
            for r in range(n):
                m[r][i] += m[r][j]
            k = i
        p = m[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rest = [r for r in range(n) if r != k]
        m = [[m[r][c] - m[r][k] * m[k][c] / p for c in rest] for r in rest]
    return pos, neg
