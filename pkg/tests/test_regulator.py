import math
from fractions import Fraction as F

import numpy as np
import pytest
from scipy import integrate, special

from quartic_k3.regulator import (
    RegionSpec,
    closed_form_rhs,
    dt_g_fd,
    dt_g_under_integral,
    edge_terms,
    emit_region_data,
    g_direct,
    g_triangles,
    inhomogeneous_pf_check,
    inner_p_integral,
    potential_identities,
    region_of,
    rhs_integral,
    stokes_boundary_check,
    tau_sampling_check,
    tri1_bound,
    u_substitution_check,
)

T_VALUES = [0.25, 0.5, 1.0, 2.0]


def oracle_g(t):
    """Inner integral in closed form (incomplete beta), outer by QUADPACK with algebraic weights."""
    inner = lambda b: special.beta(0.25, 0.5) * special.betainc(0.25, 0.5, min(b, 1.0))  # noqa: E731
    a, _ = integrate.quad(lambda x: inner((x / (2 - x)) ** 2) / (2 * math.sqrt(x * (x + 2 * t))),
                          0, 1, weight="alg", wvar=(0, -0.5), epsabs=1e-12, epsrel=1e-12, limit=200)
    b, _ = integrate.quad(lambda x: inner(((2 - x) / x) ** 2) / (2 * math.sqrt(x * (x + 2 * t))),
                          1, 2, weight="alg", wvar=(-0.5, 0), epsabs=1e-12, epsrel=1e-12, limit=200)
    return a + b


@pytest.mark.parametrize("t", T_VALUES)
def test_g_triangles_matches_oracle(t):
    assert abs(g_triangles(t).value - oracle_g(t)) < 1e-8


@pytest.mark.parametrize("t", T_VALUES)
def test_cross_method(t):
    gt, gd = g_triangles(t).value, g_direct(t).value
    assert abs(gd - gt) <= 1e-3 * gt
    # in practice the two routes agree far more closely
    assert abs(gd - gt) <= 1e-8 * gt


def test_symmetric_halves():
    assert abs(g_direct(1.0, half="upper").value - g_direct(1.0, half="lower").value) < 1e-9


def test_g_decreasing():
    vals = [g_triangles(t).value for t in T_VALUES]
    assert all(a > b > 0 for a, b in zip(vals, vals[1:]))


def test_inner_integral_two_routes():
    a = inner_p_integral((1 / 3) ** 2, "weighted")
    b = inner_p_integral((1 / 3) ** 2, "substituted")
    assert abs(a - b) < 1e-10
    ref = special.beta(0.25, 0.5) * special.betainc(0.25, 0.5, 1 / 9)
    assert abs(a - ref) < 1e-12


def test_triangle_corner():
    assert tri1_bound(1.0) == 1.0


@pytest.mark.parametrize("t", T_VALUES)
def test_inhomogeneous_equation(t):
    rhs = closed_form_rhs(t)
    assert abs(dt_g_under_integral(t) - rhs) <= 1e-3 * rhs
    assert abs(dt_g_fd(t) - rhs) <= 1e-2 * rhs


def test_rhs_values():
    assert closed_form_rhs(1) == 0.25
    assert abs(closed_form_rhs(0.25) - 0.8) < 1e-15
    assert abs(closed_form_rhs(2) - 1 / (6 * math.sqrt(2))) < 1e-15
    assert abs(rhs_integral(1.0).value - 0.25) < 1e-10


def test_report_and_mutation():
    rep = inhomogeneous_pf_check(1.0)
    assert rep.rel_err_under_integral < 1e-3 and rep.rel_err_fd < 1e-2 and rep.rel_err_cross < 1e-3
    assert abs(rep.Dt_G_under_integral - rep.stokes_rhs) < 1e-6
    bad = inhomogeneous_pf_check(1.0, constant=F(-1, 2), direct=False)
    assert bad.rel_err_under_integral > 1e-3 and bad.rel_err_fd > 1e-2
    assert rep.to_json()["rhs"] == 0.25


@pytest.mark.parametrize("t", [0.25, 1.0, 2.0])
def test_stokes(t):
    lhs, rhs, diff = stokes_boundary_check(t)
    assert diff < 1e-6
    assert abs(rhs - closed_form_rhs(t)) < 1e-10


def test_edges_vanish():
    sums = [sum(edge_terms(1.0, e).values()) for e in (1e-2, 1e-3, 1e-4)]
    assert sums[0] > sums[1] > sums[2]
    # the slowest edges decay like sqrt(eps)
    assert sums[2] < 0.01


def test_u_substitution():
    for t in (1, F(1, 4), F(2)):
        res = u_substitution_check(t)
        assert all(v for k, v in res.items() if k != "value")


def test_potential_identities():
    assert potential_identities() == (True, True)


def test_membership():
    assert RegionSpec(1, "K1").contains(0.5, 0.25)
    assert region_of(1, 1.5, 1.0) is None  # inside the pocket z2^4 <= f
    assert RegionSpec(1, "Tri1").contains(0.25, 0.0013)
    with pytest.raises(ValueError):
        RegionSpec(-1, "K1")
    with pytest.raises(ValueError):
        RegionSpec(1, "K3")


@pytest.mark.parametrize("t", [0.25, 1.0, 2.0])
def test_tau_sampling(t):
    rep = tau_sampling_check(t, 1000, seed=5)
    assert rep.ok, rep


def test_region_data():
    text = emit_region_data(1.0, 20)
    rows = [r.split(",") for r in text.strip().splitlines()]
    assert rows[0] == ["region", "a", "b", "inside"]
    kinds = {r[0] for r in rows[1:]}
    assert {"K1", "K2", "Tri1", "Tri2", "curve:z2=z1", "curve:p=(x/(2-x))^2"} <= kinds
    k1_z1 = [float(r[1]) for r in rows if r[0] == "K1" and r[3] == "1"]
    assert max(k1_z1) < (1 + math.sqrt(3)) / 2


def test_rejects_nonpositive_t():
    with pytest.raises(ValueError):
        g_triangles(0)
