"""Attitude and yaw rotation construction."""

import math

import numpy as np

from .rig import ImuAttitude


def skew(v: np.ndarray) -> np.ndarray:
    """Return the cross-product matrix [v]_x."""
    x, y, z = v
    return np.array(
        [
            [0.0, -z, y],
            [z, 0.0, -x],
            [-y, x, 0.0],
        ]
    )


def rotation_x(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rotation_z(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotation_y(theta: float) -> np.ndarray:
    """Yaw rotation about the vertical (y) axis by ``theta`` radians."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def imu_rotation(att: ImuAttitude) -> np.ndarray:
    """
    Build the attitude rotation R_x(roll) @ R_z(pitch) reported by the IMU.

    Args:
        att: Roll and pitch in radians

    Returns:
        3x3 rotation taking body coordinates into the gravity-aligned frame
    """
    return rotation_x(att.roll) @ rotation_z(att.pitch)


def cayley_y(s: float) -> np.ndarray:
    """
    Yaw rotation from the Cayley parameter s = tan(theta_y / 2).

    The (2, 2) entry is (1 + s^2) / (1 + s^2) = 1, so the result is exactly
    rotation_y(2 * arctan(s)).
    """
    alpha = 1.0 + s * s
    c = (1.0 - s * s) / alpha
    sn = 2.0 * s / alpha
    return np.array([[c, 0.0, sn], [0.0, 1.0, 0.0], [-sn, 0.0, c]])


def cayley_y_numerator(s: float) -> np.ndarray:
    """alpha * cayley_y(s); every entry is a polynomial of degree <= 2 in s."""
    alpha = 1.0 + s * s
    return np.array(
        [
            [1.0 - s * s, 0.0, 2.0 * s],
            [0.0, alpha, 0.0],
            [-2.0 * s, 0.0, 1.0 - s * s],
        ]
    )


def linearized_y(theta: float) -> np.ndarray:
    """First-order yaw matrix [[1, 0, theta], [0, 1, 0], [-theta, 0, 1]] (not orthonormal)."""
    return np.array([[1.0, 0.0, theta], [0.0, 1.0, 0.0], [-theta, 0.0, 1.0]])


def cayley_from_angle(theta: float) -> float:
    return math.tan(theta / 2.0)


def angle_from_cayley(s: float) -> float:
    return 2.0 * math.atan(s)


def is_rotation(R: np.ndarray, tol: float = 1e-12) -> bool:
    """Check orthonormality and unit determinant within ``tol``."""
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3) or not np.all(np.isfinite(R)):
        return False
    ortho = np.linalg.norm(R.T @ R - np.eye(3), ord="fro")
    return bool(ortho <= tol and abs(np.linalg.det(R) - 1.0) <= tol)
