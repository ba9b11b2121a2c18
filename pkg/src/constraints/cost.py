"""Polynomial cost matrix C(s) = sum of m_i m_i^T over all constraint rows."""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from ..utils.exceptions import ValidationError
from .rows import RowPoly, SolverMode, check_mode

logger = logging.getLogger(__name__)

MIN_ROWS = 6
COST_DEGREE = 4


@dataclass(frozen=True)
class CostPoly:
    """
    Numerator of the 4x4 cost matrix, shape (4, 4, 5), ascending powers.

    Full mode: C(s) = numerator(s) / (1 + s^2)^2 with s the Cayley parameter.
    Linearized mode: C(theta) = numerator(theta), theta the yaw angle.
    """

    numerator: np.ndarray
    n_rows: int
    mode: SolverMode = "full"

    def __post_init__(self) -> None:
        num = np.array(self.numerator, dtype=float).reshape(4, 4, COST_DEGREE + 1)
        if not np.all(np.isfinite(num)):
            raise ValidationError("Cost coefficients must be finite")
        num.setflags(write=False)
        object.__setattr__(self, "numerator", num)
        check_mode(self.mode)

    def scaled(self, factor: float) -> "CostPoly":
        """Same cost multiplied by ``factor``; minimizers and eigenvectors are unchanged."""
        return CostPoly(self.numerator * factor, self.n_rows, self.mode)

    def normalized(self) -> "CostPoly":
        """Scale so that the largest numerator coefficient has magnitude 1."""
        peak = float(np.max(np.abs(self.numerator)))
        if peak == 0.0:
            return self
        return self.scaled(1.0 / peak)


def stack_cost(rows: list[RowPoly]) -> CostPoly:
    """
    Accumulate the outer products of all rows as exact polynomial products.

    Args:
        rows: Constraint rows, all built in the same mode

    Returns:
        CostPoly whose entries have degree <= 4

    Raises:
        ValidationError: If there are fewer than 6 rows or the modes differ
    """
    if len(rows) < MIN_ROWS:
        raise ValidationError(
            f"Need at least {MIN_ROWS} rows (2 affine correspondences), got {len(rows)}"
        )
    modes = {row.mode for row in rows}
    if len(modes) != 1:
        raise ValidationError(f"Rows mix solver modes: {sorted(modes)}")

    # Summation order follows the row order
    stacked = np.stack([row.coeffs for row in rows])
    numerator = np.zeros((4, 4, COST_DEGREE + 1))
    for p in range(3):
        for q in range(3):
            numerator[:, :, p + q] += np.einsum("na,nb->ab", stacked[:, :, p], stacked[:, :, q])

    return CostPoly(numerator=numerator, n_rows=len(rows), mode=modes.pop())


def _denominator(cp: CostPoly, s: np.ndarray) -> np.ndarray:
    if cp.mode == "full":
        return (1.0 + s * s) ** 2
    return np.ones_like(s)


def eval_cost(cp: CostPoly, s: float) -> np.ndarray:
    """Symmetric 4x4 cost matrix at ``s``."""
    if not np.isfinite(s):
        raise ValidationError("Cost parameter must be finite")
    num = P.polyval(s, np.moveaxis(cp.numerator, -1, 0))
    C = num / _denominator(cp, np.asarray(s, dtype=float))
    return 0.5 * (C + C.T)


def eval_cost_batch(cp: CostPoly, s: np.ndarray) -> np.ndarray:
    """Cost matrices for an array of parameters, shape (K, 4, 4)."""
    s = np.asarray(s, dtype=float).reshape(-1)
    num = P.polyval(s, np.moveaxis(cp.numerator, -1, 0), tensor=True)
    C = np.moveaxis(num, -1, 0) / _denominator(cp, s)[:, None, None]
    return 0.5 * (C + np.swapaxes(C, 1, 2))


def eval_cost_derivative(cp: CostPoly, s: float) -> np.ndarray:
    """
    dC/ds at ``s``.

    Full mode: (N' alpha - 4 s N) / alpha^3, with N the numerator matrix.
    """
    coeffs = np.moveaxis(cp.numerator, -1, 0)
    num = P.polyval(s, coeffs)
    dnum = P.polyval(s, P.polyder(coeffs))
    if cp.mode == "full":
        alpha = 1.0 + s * s
        D = (dnum * alpha - 4.0 * s * num) / alpha**3
    else:
        D = dnum
    return 0.5 * (D + D.T)


def min_eigen(cp: CostPoly, s: float) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue of C(s) and its unit eigenvector."""
    w, V = np.linalg.eigh(eval_cost(cp, s))
    return float(w[0]), V[:, 0]


def min_eigenvalues(cp: CostPoly, s: np.ndarray) -> np.ndarray:
    """Vectorized lambda_min(C(s)) over an array of parameters."""
    return np.linalg.eigvalsh(eval_cost_batch(cp, s))[:, 0]
