import math

import numpy as np
import pytest

from quartic_k3.family import make_member
from quartic_k3.maps import (
    Indeterminacy,
    PoleOfMap,
    curve_residual,
    form_relation_symbolic,
    map_residuals,
    mu4_act,
    phi,
    phi_fiber,
    phi_projective,
    psi,
    psi_pullback_symbolic,
    sigma_pullback_factor,
    tau,
    tau_boundary_identity,
    verify_equivariance,
    verify_form_relation,
    verify_phi_fibers,
    verify_pullback_psi,
    verify_tau_phi,
)

M1 = make_member(1)


def test_psi_example():
    x, y = psi(M1, (2, 15 ** 0.25)).coords
    assert abs(x - 1.6) < 1e-15
    assert abs(y - 12 * math.sqrt(15) / 25) < 1e-14
    assert abs(y * y - 432 / 125) < 1e-13


def test_psi_two_torsion():
    x, y = psi(M1, (M1.alpha, 0)).coords
    assert abs(x - 1) < 1e-14 and y == 0


def test_psi_pole():
    with pytest.raises(PoleOfMap):
        psi(M1, (-0.5, 0))


def test_phi_example():
    z1, z2, w = phi(M1, (2, 15 ** 0.25), (2 ** 0.25, 1)).coords
    assert abs(z1 - 2) < 1e-15
    assert abs(z2 - 30 ** 0.25) < 1e-14 and abs(w - 15 ** 0.25) < 1e-14
    assert curve_residual(M1, "X", (z1, z2, w)) < 1e-14


def test_phi_indeterminacy():
    with pytest.raises(Indeterminacy):
        phi_projective((1, 0.3, 0), (0, 1, 1))


def test_tau_examples():
    img = tau(M1, 2, 30 ** 0.25)
    assert abs(img.x - 1.6) < 1e-15 and abs(img.p - 2) < 1e-13
    img = tau(M1, 0.5, 0.25)
    assert abs(img.x - 0.25) < 1e-15
    assert abs(img.p - 0.25 ** 4 / (0.25 ** 4 + 3)) < 1e-16
    assert img.p < (0.25 / 1.75) ** 2


def test_symbolic_identities():
    assert psi_pullback_symbolic()
    assert form_relation_symbolic()
    assert tau_boundary_identity()


@pytest.mark.parametrize("t", [1, 2])
def test_map_residuals(t):
    res = map_residuals(make_member(t), 100, seed=7)
    assert res["psi"] <= 1e-10 and res["phi"] <= 1e-10


def test_numeric_pullbacks():
    assert verify_pullback_psi(M1, 100, seed=1) <= 1e-6
    assert verify_form_relation(M1, 50, seed=1) <= 1e-6
    assert verify_tau_phi(M1, 50, seed=1) <= 1e-10


def test_equivariance_and_fibers():
    assert verify_equivariance(M1, 20, seed=3) <= 1e-12
    fib = verify_phi_fibers(M1, 10, seed=3)
    assert fib["sizes"] == [4] * 10
    assert fib["orbit_residual"] < 1e-12 and fib["image_residual"] < 1e-12


def test_mu4_is_a_group_action():
    p, q = (0.7 + 0.1j, 1.2 - 0.3j), (0.4j, 2.0)
    a = mu4_act(1, *mu4_act(3, p, q))
    assert np.allclose(a[0], p) and np.allclose(a[1], q)


def test_fiber_has_four_points():
    x = phi(M1, (2, 15 ** 0.25), (2 ** 0.25, 1))
    assert len(phi_fiber(M1, x)) == 4


def test_sigma_factor():
    assert sigma_pullback_factor(1) == pytest.approx(1j)
    assert sigma_pullback_factor(2) == pytest.approx(-1)


def test_seeded_reproducible():
    a = map_residuals(M1, 20, seed=11)
    b = map_residuals(M1, 20, seed=11)
    assert a == b
