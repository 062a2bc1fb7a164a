"""Central finite differences with two levels of Richardson extrapolation."""
from __future__ import annotations


def _central(f, t0, order: int, h: float):
    if order == 1:
        return (f(t0 + h) - f(t0 - h)) / (2 * h)
    if order == 2:
        return (f(t0 + h) - 2 * f(t0) + f(t0 - h)) / (h * h)
    raise ValueError("order must be 1 or 2")


def fd_derivative(f, t0: float, order: int = 1, h0: float = 1e-2):
    """Derivative of f at t0 from steps h0, h0/2, h0/4.

    The central formulas have error series in h^2, so the tableau uses the
    factors 4 and 16.  Error is O(h0^6) for smooth f.
    """
    if h0 <= 0:
        raise ValueError("h0 must be positive")
    d0, d1, d2 = (_central(f, t0, order, h0 / 2 ** j) for j in range(3))
    r1 = (4 * d1 - d0) / 3
    r2 = (4 * d2 - d1) / 3
    return (16 * r2 - r1) / 15
