import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_k3.numkit import (
    InvalidWeight,
    NonConvergence,
    SingularWeight,
    complex_roots,
    fd_derivative,
    integrate_1d,
    integrate_2d_iterated,
)


def test_arcsine_integral_is_pi():
    r = integrate_1d(lambda x: 1 / np.sqrt(x * (1 - x)), (0, 1), SingularWeight(F(-1, 2), F(-1, 2)), 1e-12)
    assert abs(r.value - math.pi) < 1e-10


def test_quarter_power_integral_is_4():
    r = integrate_1d(lambda p: p ** -0.75, (0, 1), SingularWeight(F(-3, 4), 0), 1e-12)
    assert abs(r.value - 4) < 1e-10


def test_offsets_mode_avoids_cancellation():
    # int_0^1 (1-x)^(-1/2) dx = 2, written through the exact distance to the upper end
    r = integrate_1d(lambda x, lo, hi: hi ** -0.5, (0, 1), SingularWeight(0, F(-1, 2)), 1e-13, offsets=True)
    assert abs(r.value - 2) < 1e-12


def test_invalid_weight():
    with pytest.raises(InvalidWeight):
        SingularWeight(F(-1), 0)


def test_nonconvergence_carries_estimate():
    with pytest.raises(NonConvergence) as exc:
        integrate_1d(lambda x: np.sin(1 / x), (1e-6, 1), tol=1e-14, budget=300)
    assert exc.value.result.nodes_used <= 330


def test_two_dimensional_iterated():
    r = integrate_2d_iterated(lambda x, y: x * y + 0 * y, (0, 2), lambda x: (0, x), tol=1e-12)
    assert abs(r.value - 2.0) < 1e-11


def test_deterministic():
    f = lambda x: np.exp(-x) * np.cos(20 * x)  # noqa: E731
    a = integrate_1d(f, (0, 3), tol=1e-12)
    b = integrate_1d(f, (0, 3), tol=1e-12)
    assert a.value == b.value and a.nodes_used == b.nodes_used


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(-7, 24))
def test_power_weights(den, num):
    e = F(num, den)
    if e <= -1:
        return
    w = SingularWeight(e, 0)
    r = integrate_1d(lambda x: x ** float(e), (0, 1), w, 1e-11)
    assert abs(r.value - 1 / (float(e) + 1)) < 1e-9


def test_fd_derivative_sin():
    assert abs(fd_derivative(math.sin, 0.3, 1) - math.cos(0.3)) < 1e-10
    assert abs(fd_derivative(math.sin, 0.3, 2) + math.sin(0.3)) < 1e-8


def test_complex_roots_known():
    rs = complex_roots([1, 0, 0, 0, -1])
    got = sorted(rs.roots, key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    want = sorted([1, -1, 1j, -1j], key=lambda z: (round(complex(z).real, 6), round(complex(z).imag, 6)))
    assert all(abs(a - b) < 1e-12 for a, b in zip(got, want))
    assert max(rs.residuals) < 1e-14


def test_complex_roots_cluster_multiplicity():
    rs = complex_roots(np.poly([2, 2, -1]))
    mult = {round(c.real): m for c, m in rs.clusters}
    assert mult == {2: 2, -1: 1}


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=1, max_size=6))
def test_complex_roots_backward_stable(roots):
    rs = complex_roots(np.poly(roots))
    assert len(rs) == len(roots)
    assert max(rs.residuals) < 1e-8
