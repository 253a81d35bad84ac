"""Exact-arithmetic Belavin-Drinfeld cluster seeds and Poisson brackets on SL(n)."""

from .dual import Dual2, grad
from .linalg import (Mat, NonGeneric, det, det_cofactor, dual_matrix,
                     factor_b_nm, factor_np_b, gauss, inverse, load_matrix,
                     lower_upper_parts, save_matrix)
from .poly import NotDivisible, Poly, poly_matrix_vars

__all__ = [
    "Dual2", "grad", "Mat", "NonGeneric", "det", "det_cofactor", "dual_matrix",
    "factor_b_nm", "factor_np_b", "gauss", "inverse", "load_matrix",
    "lower_upper_parts", "save_matrix", "NotDivisible", "Poly", "poly_matrix_vars",
]
