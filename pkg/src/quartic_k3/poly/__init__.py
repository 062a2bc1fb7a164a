from .operators import (
    DiffOperator,
    PoleAtPoint,
    hypergeometric_operator,
    op_apply_numeric,
    op_substitute,
    picard_fuchs_operator,
)
from .polynomial import DivisionByZeroPolynomial, Polynomial, gcd, poly, squarefree_part
from .powerproduct import FractionalSignFlip, PowerProduct, pp_derivative
from .rational import RationalFunction, rational
from .resultant import bareiss_determinant, resultant, sylvester_matrix

__all__ = [
    "DiffOperator", "PoleAtPoint", "hypergeometric_operator", "op_apply_numeric", "op_substitute",
    "picard_fuchs_operator", "DivisionByZeroPolynomial", "Polynomial", "gcd", "poly",
    "squarefree_part", "FractionalSignFlip", "PowerProduct", "pp_derivative", "RationalFunction",
    "rational", "bareiss_determinant", "resultant", "sylvester_matrix",
]
