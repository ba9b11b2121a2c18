"""Rotation and translation error metrics reported in degrees or unitless."""

import math

import numpy as np

from ..utils.exceptions import ValidationError


def _clamped_arccos_deg(value: float) -> float:
    return math.degrees(math.acos(min(1.0, max(-1.0, value))))


def eps_rotation(R_gt: np.ndarray, R: np.ndarray) -> float:
    """
    Angle of R_gt R^T in degrees.

    Equal to arccos((trace(R_gt R^T) - 1) / 2); evaluated as atan2 of the
    skew and trace parts so that angles near zero keep full precision.
    """
    M = np.asarray(R_gt) @ np.asarray(R).T
    cos_angle = min(1.0, max(-1.0, (np.trace(M) - 1.0) / 2.0))
    sin_angle = 0.5 * np.linalg.norm([M[2, 1] - M[1, 2], M[0, 2] - M[2, 0], M[1, 0] - M[0, 1]])
    return math.degrees(math.atan2(sin_angle, cos_angle))


def eps_translation(t_gt: np.ndarray, t: np.ndarray) -> float:
    """Scale-aware translation error 2 |t_gt - t| / (|t_gt| + |t|), in [0, 2]."""
    denom = np.linalg.norm(t_gt) + np.linalg.norm(t)
    if denom == 0.0:
        return 0.0
    return float(2.0 * np.linalg.norm(np.asarray(t_gt) - np.asarray(t)) / denom)


def eps_direction(t_gt: np.ndarray, t: np.ndarray) -> float:
    """Angle between translation directions in degrees (norm-product denominator)."""
    n_gt = float(np.linalg.norm(t_gt))
    n = float(np.linalg.norm(t))
    if n_gt <= 1e-12 or n <= 1e-12:
        raise ValidationError("eps_direction is undefined for a zero-norm translation")
    return _clamped_arccos_deg(float(np.dot(t_gt, t)) / (n_gt * n))
