"""Per-correspondence constraint rows as quadratic polynomials in the yaw parameter."""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..geometry.residuals import translation_gradient
from ..geometry.rig import AffineCorrespondence, ImuAttitude, RigExtrinsics
from ..geometry.rotations import cayley_y_numerator, imu_rotation, linearized_y
from ..utils.exceptions import ValidationError

logger = logging.getLogger(__name__)

SolverMode = Literal["full", "linearized"]
SOLVER_MODES: tuple[str, ...] = ("full", "linearized")

# Interpolation nodes for the quadratic numerators
_FULL_NODES = np.array([-1.0, 0.0, 1.0])
_VANDERMONDE = np.vander(_FULL_NODES, 3, increasing=True)


def check_mode(mode: str) -> SolverMode:
    if mode not in SOLVER_MODES:
        raise ValidationError(f"Unknown solver mode: {mode!r}. Expected one of {SOLVER_MODES}")
    return mode  # type: ignore[return-value]


@dataclass(frozen=True)
class RowPoly:
    """
    One constraint row m(s) acting on t_hat = [t_tilde; 1].

    ``coeffs[a]`` holds (c0, c1, c2) of the numerator of entry a in ascending
    powers. In full mode the row is numerator / (1 + s^2); in linearized mode
    the parameter is the yaw angle itself and there is no denominator.
    """

    coeffs: np.ndarray
    mode: SolverMode = "full"

    def __post_init__(self) -> None:
        coeffs = np.array(self.coeffs, dtype=float).reshape(4, 3)
        if not np.all(np.isfinite(coeffs)):
            raise ValidationError("Row coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def numerator(self, s: float) -> np.ndarray:
        return self.coeffs @ np.array([1.0, s, s * s])

    def evaluate(self, s: float) -> np.ndarray:
        """Row value at ``s`` including the denominator."""
        if self.mode == "full":
            return self.numerator(s) / (1.0 + s * s)
        return self.numerator(s)


def _gradient_coefficients(
    c: AffineCorrespondence,
    rig: RigExtrinsics,
    R_imu_i: np.ndarray,
    R_imu_j: np.ndarray,
    mode: SolverMode,
) -> np.ndarray:
    """Interpolated coefficients, shape (3 rows, 4 entries, 3 powers)."""
    if mode == "full":
        # alpha * R_y(s) is polynomial in s, so each sample is an exact numerator value
        samples = np.stack(
            [translation_gradient(c, rig, R_imu_i, R_imu_j, cayley_y_numerator(s)) for s in _FULL_NODES]
        )
        coeffs = np.linalg.solve(_VANDERMONDE, samples.reshape(3, -1)).reshape(3, 3, 4)
        return np.moveaxis(coeffs, 0, -1)

    at_zero = translation_gradient(c, rig, R_imu_i, R_imu_j, linearized_y(0.0))
    at_one = translation_gradient(c, rig, R_imu_i, R_imu_j, linearized_y(1.0))
    return np.stack([at_zero, at_one - at_zero, np.zeros_like(at_zero)], axis=-1)


def correspondence_rows(
    c: AffineCorrespondence,
    rig: RigExtrinsics,
    imu_i: ImuAttitude,
    imu_j: ImuAttitude,
    mode: SolverMode = "full",
) -> tuple[RowPoly, RowPoly, RowPoly]:
    """
    Epipolar row followed by the two affine rows of one correspondence.

    Raises:
        UnknownCameraError: If a camera id is missing from the rig
    """
    mode = check_mode(mode)
    coeffs = _gradient_coefficients(c, rig, imu_rotation(imu_i), imu_rotation(imu_j), mode)
    return tuple(RowPoly(coeffs[r], mode) for r in range(3))  # type: ignore[return-value]


def epipolar_row(
    c: AffineCorrespondence,
    rig: RigExtrinsics,
    imu_i: ImuAttitude,
    imu_j: ImuAttitude,
    mode: SolverMode = "full",
) -> RowPoly:
    """Generalized epipolar constraint on t_hat; the last entry is the t_tilde-free term."""
    return correspondence_rows(c, rig, imu_i, imu_j, mode)[0]


def affine_rows(
    c: AffineCorrespondence,
    rig: RigExtrinsics,
    imu_i: ImuAttitude,
    imu_j: ImuAttitude,
    mode: SolverMode = "full",
) -> tuple[RowPoly, RowPoly]:
    """The two affine constraint rows, one per component of the affine residual."""
    _, first, second = correspondence_rows(c, rig, imu_i, imu_j, mode)
    return first, second


def build_rows(
    corrs: list[AffineCorrespondence],
    rig: RigExtrinsics,
    imu_i: ImuAttitude,
    imu_j: ImuAttitude,
    mode: SolverMode = "full",
) -> list[RowPoly]:
    """All rows in input order, three per correspondence."""
    mode = check_mode(mode)
    R_imu_i = imu_rotation(imu_i)
    R_imu_j = imu_rotation(imu_j)
    rows: list[RowPoly] = []
    for c in corrs:
        coeffs = _gradient_coefficients(c, rig, R_imu_i, R_imu_j, mode)
        rows.extend(RowPoly(coeffs[r], mode) for r in range(3))
    logger.debug(f"Built {len(rows)} {mode} rows from {len(corrs)} correspondences")
    return rows
