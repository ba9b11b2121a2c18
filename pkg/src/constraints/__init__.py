"""Constraint rows and the polynomial cost matrix."""

from .cost import CostPoly, eval_cost, eval_cost_derivative, min_eigen, min_eigenvalues, stack_cost
from .rows import RowPoly, SolverMode, affine_rows, build_rows, correspondence_rows, epipolar_row

__all__ = [
    "CostPoly",
    "RowPoly",
    "SolverMode",
    "affine_rows",
    "build_rows",
    "correspondence_rows",
    "epipolar_row",
    "eval_cost",
    "eval_cost_derivative",
    "min_eigen",
    "min_eigenvalues",
    "stack_cost",
]
