"""Aligned and body-frame relative poses, and pairwise essential matrices."""

import math
from dataclasses import dataclass

import numpy as np

from ..utils.exceptions import ValidationError
from .rig import ImuAttitude, RigCamera
from .rotations import angle_from_cayley, cayley_y, imu_rotation, skew


@dataclass(frozen=True)
class AlignedPose:
    """Yaw (as Cayley parameter s) and translation t_tilde between gravity-aligned views."""

    s: float
    t_tilde: np.ndarray

    def __post_init__(self) -> None:
        if not math.isfinite(self.s):
            raise ValidationError("Cayley parameter s must be finite")
        t = np.array(self.t_tilde, dtype=float).reshape(3)
        t.setflags(write=False)
        object.__setattr__(self, "t_tilde", t)

    @property
    def theta_y(self) -> float:
        return angle_from_cayley(self.s)

    @property
    def t_hat(self) -> np.ndarray:
        """Homogeneous translation [t_tilde; 1]."""
        return np.append(self.t_tilde, 1.0)


@dataclass(frozen=True)
class RelativePose:
    """
    Body-frame motion between time i and time j.

    A point X_i in the body frame at time i maps to X_j = R @ X_i + t.
    """

    R: np.ndarray
    t: np.ndarray

    def __post_init__(self) -> None:
        R = np.array(self.R, dtype=float).reshape(3, 3)
        t = np.array(self.t, dtype=float).reshape(3)
        R.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "t", t)

    @classmethod
    def identity(cls) -> "RelativePose":
        return cls(np.eye(3), np.zeros(3))


def unaligned_pose(p: AlignedPose, imu_i: ImuAttitude, imu_j: ImuAttitude) -> RelativePose:
    """Undo the IMU alignment: R = R'_imu^T R_y R_imu, t = R'_imu^T t_tilde."""
    R_i = imu_rotation(imu_i)
    R_j = imu_rotation(imu_j)
    return RelativePose(R=R_j.T @ cayley_y(p.s) @ R_i, t=R_j.T @ p.t_tilde)


def camera_motion(cam_i: RigCamera, cam_j: RigCamera, pose: RelativePose) -> tuple[np.ndarray, np.ndarray]:
    """
    Motion from camera ``cam_i`` at time i to camera ``cam_j`` at time j.

    Returns:
        (R_ij, t_ij) with R_ij = R_k'^T R R_k and t_ij = R_k'^T (R t_k + t - t_k')
    """
    R_ij = cam_j.R.T @ pose.R @ cam_i.R
    t_ij = cam_j.R.T @ (pose.R @ cam_i.t + pose.t - cam_j.t)
    return R_ij, t_ij


def pairwise_essential(cam_i: RigCamera, cam_j: RigCamera, pose: RelativePose) -> np.ndarray:
    """
    Essential matrix between camera ``cam_i`` at time i and ``cam_j`` at time j.

    Uses the expanded form E = R_k'^T (R [t_k]_x + [t - t_k']_x R) R_k, which
    equals [t_ij]_x R_ij built from ``camera_motion``.
    """
    R = pose.R
    inner = R @ skew(cam_i.t) + skew(pose.t - cam_j.t) @ R
    return cam_j.R.T @ inner @ cam_i.R


def essential_from_motion(R_ij: np.ndarray, t_ij: np.ndarray) -> np.ndarray:
    return skew(t_ij) @ R_ij


def relative_to_matrix(pose: RelativePose) -> np.ndarray:
    T = np.eye(4)
    T[:3, :3] = pose.R
    T[:3, 3] = pose.t
    return T


def matrix_to_relative(T: np.ndarray) -> RelativePose:
    T = np.asarray(T, dtype=float)
    return RelativePose(R=T[:3, :3], t=T[:3, 3])
