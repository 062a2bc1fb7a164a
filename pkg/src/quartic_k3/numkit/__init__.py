from .finite_diff import fd_derivative
from .quadrature import (
    DEFAULT_BUDGET,
    NO_WEIGHT,
    InvalidWeight,
    NonConvergence,
    QuadratureResult,
    SingularWeight,
    integrate_1d,
    integrate_2d_iterated,
)
from .roots import IllConditioned, RootSet, backward_residual, complex_roots

__all__ = [
    "DEFAULT_BUDGET", "NO_WEIGHT", "InvalidWeight", "NonConvergence", "QuadratureResult",
    "SingularWeight", "integrate_1d", "integrate_2d_iterated", "fd_derivative",
    "IllConditioned", "RootSet", "backward_residual", "complex_roots",
]
