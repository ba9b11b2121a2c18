"""Characteristic polynomial of C(s) and its stationarity conditions."""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from ..constraints.cost import CostPoly
from ..constraints.rows import SolverMode
from ..utils.config import DEGREE_TRUNCATION_TOL
from ..utils.exceptions import StructuralError
from .polynomials import polymat_det, polymat_mul, polymat_trace, truncate

logger = logging.getLogger(__name__)

_ALPHA = np.array([1.0, 0.0, 1.0])
_S = np.array([0.0, 1.0])


def nominal_degrees(mode: SolverMode) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Degrees of (g_1..g_4) and (w_1..w_4)."""
    if mode == "full":
        return (4, 8, 12, 16), (4, 8, 12, 16)
    return (2, 4, 6, 8), (1, 3, 5, 7)


@dataclass(frozen=True)
class CharSystem:
    """
    Coefficient lists (ascending powers) of g_1..g_4 and w_1..w_4.

    With beta = alpha^2 lambda in full mode (beta = lambda when linearized),
    det(C - lambda I) = 0 reads beta^4 + g_1 beta^3 + g_2 beta^2 + g_3 beta + g_4 = 0
    and the stationarity condition reads w_1 beta^3 + w_2 beta^2 + w_3 beta + w_4 = 0.
    """

    g: tuple[np.ndarray, ...]
    w: tuple[np.ndarray, ...]
    mode: SolverMode

    @property
    def degree(self) -> int:
        return 16 if self.mode == "full" else 8

    def f(self, s: float) -> np.ndarray:
        """Characteristic coefficients f_1..f_4 of C(s) itself."""
        values = np.array([P.polyval(s, g) for g in self.g])
        if self.mode == "full":
            alpha = 1.0 + s * s
            values = values / alpha ** (2 * np.arange(1, 5))
        return values


def _checked_truncate(c: np.ndarray, degree: int, name: str) -> np.ndarray:
    out = truncate(c, degree, DEGREE_TRUNCATION_TOL)
    if out is None:
        raise StructuralError(f"{name} has non-negligible coefficients above degree {degree}")
    return out


def char_polys(cp: CostPoly) -> CharSystem:
    """
    Build g_i and w_i from the cost numerator.

    The numerator N has degree 4, so g_i = f_i alpha^(2i) comes straight from the
    trace and determinant formulas applied to N. In full mode
    w_i = g_i' alpha - 4 i s g_i, whose degree-(4i+1) term cancels; in
    linearized mode w_i = g_i'.

    Raises:
        StructuralError: If a coefficient expected to vanish does not
    """
    N = cp.numerator
    N2 = polymat_mul(N, N)
    N3 = polymat_mul(N2, N)
    t1 = polymat_trace(N)
    t2 = polymat_trace(N2)
    t3 = polymat_trace(N3)
    t1_sq = P.polymul(t1, t1)

    raw_g = (
        -t1,
        0.5 * P.polysub(t1_sq, t2),
        P.polyadd(P.polyadd(-P.polymul(t1_sq, t1) / 6.0, 0.5 * P.polymul(t1, t2)), -t3 / 3.0),
        polymat_det(N),
    )

    g_degrees, w_degrees = nominal_degrees(cp.mode)
    g = tuple(_checked_truncate(c, d, f"g{i + 1}") for i, (c, d) in enumerate(zip(raw_g, g_degrees, strict=True)))

    w_list = []
    for i, gi in enumerate(g, start=1):
        dg = P.polyder(gi)
        if cp.mode == "full":
            wi = P.polysub(P.polymul(dg, _ALPHA), 4.0 * i * P.polymul(_S, gi))
        else:
            wi = dg
        w_list.append(_checked_truncate(wi, w_degrees[i - 1], f"w{i}"))

    logger.debug(f"Characteristic system built ({cp.mode}, g degrees {g_degrees})")
    return CharSystem(g=g, w=tuple(w_list), mode=cp.mode)
