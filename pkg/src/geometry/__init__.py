"""Rig geometry, Plucker lines, pose composition and error metrics."""

from .metrics import eps_direction, eps_rotation, eps_translation
from .pose import AlignedPose, RelativePose, pairwise_essential, unaligned_pose
from .residuals import direct_residuals
from .rig import AffineCorrespondence, ImuAttitude, PluckerLine, RigCamera, RigExtrinsics, plucker
from .rotations import cayley_y, imu_rotation

__all__ = [
    "AffineCorrespondence",
    "AlignedPose",
    "ImuAttitude",
    "PluckerLine",
    "RelativePose",
    "RigCamera",
    "RigExtrinsics",
    "cayley_y",
    "direct_residuals",
    "eps_direction",
    "eps_rotation",
    "eps_translation",
    "imu_rotation",
    "pairwise_essential",
    "plucker",
    "unaligned_pose",
]
