import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_k3.lattice import (
    DegenerateLattice,
    Lattice,
    UnknownName,
    builtin,
    direct_sum,
    discriminant,
    signature,
)

NAMES = ["U", "U(2)", "A1", "D4", "E8", "-A1", "U(3)", "-D4"]


def numeric_signature(L):
    ev = np.linalg.eigvalsh(np.array(L.gram, dtype=float))
    return int((ev > 0).sum()), int((ev < 0).sum())


def test_examples():
    assert discriminant(builtin("U")) == -1 and signature(builtin("U")) == (1, 1)
    assert builtin("A1").gram == ((-2,),) and signature(builtin("A1")) == (0, 1)
    E8 = builtin("E8")
    assert E8.rank == 8 and discriminant(E8) == 1 and signature(E8) == (0, 8)
    assert signature(builtin("U+U")) == (2, 2)


def test_named_lattices():
    H = builtin("H")
    assert H.rank == 14 and signature(H) == (2, 12)
    K3 = builtin("K3")
    assert K3.rank == 22 and signature(K3) == (3, 19)
    assert discriminant(K3) == -1
    assert all(L.is_even() for L in (H, K3))


def test_unknown():
    with pytest.raises(UnknownName):
        builtin("E7")


def test_degenerate():
    with pytest.raises(DegenerateLattice):
        Lattice([[0, 0], [0, 0]])
    with pytest.raises(DegenerateLattice):
        Lattice([[2, 2], [2, 2]])


def test_asymmetric():
    with pytest.raises(ValueError):
        Lattice([[0, 1], [2, 0]])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(NAMES), min_size=1, max_size=5))
def test_sum_properties(names):
    parts = [builtin(n) for n in names]
    L = direct_sum(parts)
    sigs = [signature(p) for p in parts]
    assert signature(L) == (sum(s[0] for s in sigs), sum(s[1] for s in sigs))
    assert discriminant(L) == np.prod([discriminant(p) for p in parts])
    assert signature(L) == numeric_signature(L)
    assert signature(L.negated()) == signature(L)[::-1]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_random_symmetric(rows):
    n = len(rows)
    g = [[rows[min(i, j)][max(i, j)] for j in range(n)] for i in range(n)]
    if round(np.linalg.det(np.array(g, dtype=float))) == 0:
        return
    L = Lattice(g)
    assert signature(L) == numeric_signature(L)
    assert discriminant(L) == round(np.linalg.det(np.array(g, dtype=float)))
