"""Exact-arithmetic reference computations over the Gaussian rationals."""

from .scalars import GQ, gq_sqrt
from .poly import Poly, exact_roots, rational_roots
from .ratfun import RatFun
from .matrix import (
    ExactQuadruple,
    ExactRationalMatrix,
    ExactSingularError,
    ExactStructureError,
    full_structure_exact,
    infinity_structure_exact,
    local_structure_exact,
    minimal_indices_exact,
    poly_det,
    solve_exact,
    transfer_exact,
)
