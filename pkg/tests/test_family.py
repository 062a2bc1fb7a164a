import math
from fractions import Fraction as F

import pytest

from quartic_k3.family import (
    ExcludedParameter,
    RequiresPositiveReal,
    SplitConic,
    cycle_functions,
    f_polynomial,
    g_polynomial,
    make_member,
    sheet_product_identity,
    split_line,
    surface_polynomial,
    tangency_data,
    total_divisor,
)
from quartic_k3.poly import Polynomial


def test_f_identity():
    z, t = Polynomial.var("z"), Polynomial.var("t")
    assert f_polynomial() == z ** 4 - (z * z - 2 * z - t) ** 2


def test_g_is_homogenized_f():
    g = g_polynomial()
    Z0, Z1, Z2 = (Polynomial.var(v) for v in ("Z0", "Z1", "Z2"))
    f = f_polynomial().substitute({"z": Z1})
    # dehomogenize at Z0 = 1
    assert g.substitute({"Z0": 1}) == Z2 ** 4 - f


def test_member_t1():
    m = make_member(1)
    assert m.sqrt_t == 1 and m.lam == -2
    assert abs(complex(m.alpha) - (1 + math.sqrt(3)) / 2) < 1e-15
    assert abs(complex(m.r) - (1 + math.sqrt(2))) < 1e-15


def test_member_exact_square_root():
    m = make_member(F(9, 4))
    assert m.sqrt_t == F(3, 2)


def test_negative_root_choice():
    m = make_member(2, -math.sqrt(2))
    assert m.Q == (0, 0, -math.sqrt(2))


@pytest.mark.parametrize("t", [0, -1, F(-1, 2)])
def test_excluded(t):
    with pytest.raises(ExcludedParameter):
        make_member(t)


def test_bad_root_rejected():
    with pytest.raises(ValueError):
        make_member(2, 1.4)


def test_sheet_zero_contains_q0_q2():
    m = make_member(1)
    l00 = SplitConic(m, (0, 0))
    assert l00.contains((0, 0, 1)) and l00.contains((0, 0, -1))
    z1, w = Polynomial.var("z1"), Polynomial.var("w")
    # w^2 = t + 2 z1 - z1^2 at t = 1
    assert l00.equations()[1].substitute({"t": 1}) == w * w - (1 + 2 * z1 - z1 * z1)


@pytest.mark.parametrize("index", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_conic_parametrization_on_surface(index):
    m = make_member(F(3, 2))
    c = SplitConic(m, index)
    for s in (-1.3, 0.2, 0.7, 2.5, None):
        p = c.point(s)
        assert c.residual(p) < 1e-13
        assert m.surface_residual(*p) < 1e-13


def test_split_line_indices():
    m = make_member(1)
    assert [c.index for c in split_line(m, 1)] == [(1, 0), (1, 1)]
    with pytest.raises(ValueError):
        split_line(m, 2)


def test_sheet_identity():
    assert sheet_product_identity()


def test_divisors_cancel():
    m = make_member(F(1, 4))
    f0, f1 = cycle_functions(m)
    assert f0.divisor() == {"Q2": 1, "Q0": -1}
    assert f1.divisor() == {"Q0": 1, "Q2": -1}
    assert total_divisor((f0, f1)) == {}
    # scaling a function does not move its divisor
    assert f0.scaled(3).divisor() == f0.divisor()


def test_tangency():
    d = tangency_data(make_member(1))
    assert abs(d["R0"][0] - (1 + math.sqrt(2))) < 1e-15
    with pytest.raises(RequiresPositiveReal):
        tangency_data(make_member(complex(1, 1)))


def test_surface_polynomial_vanishes_on_conics():
    m = make_member(2)
    S = surface_polynomial()
    for idx in ((0, 0), (1, 1)):
        z1, z2, w = SplitConic(m, idx).point(0.4)
        assert abs(complex(S.evaluate_float(z1=z1, z2=z2, w=w, t=2))) < 1e-12
