"""Polynomial eigenvalue solver for the yaw parameter and translation."""

from .char_system import CharSystem, char_polys
from .pencil import CandidateSet, PencilB, build_pencil, companion_eigen
from .pipeline import RelativePoseSolver, SolveReport, solve
from .selection import GridResult, Selection, grid_oracle, select_solution

__all__ = [
    "CandidateSet",
    "CharSystem",
    "GridResult",
    "PencilB",
    "RelativePoseSolver",
    "Selection",
    "SolveReport",
    "build_pencil",
    "char_polys",
    "companion_eigen",
    "grid_oracle",
    "select_solution",
    "solve",
]
