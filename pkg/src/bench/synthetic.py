"""Synthetic rigs, motions and plane-induced affine correspondences."""

import logging
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ..geometry.pose import AlignedPose, RelativePose, camera_motion, unaligned_pose
from ..geometry.rig import AffineCorrespondence, ImuAttitude, RigCamera, RigExtrinsics
from ..geometry.rotations import cayley_from_angle, imu_rotation, rotation_y
from ..utils.config import (
    DEFAULT_PLANES,
    DEFAULT_RIG_CAMERAS,
    DEFAULT_RIG_RADIUS_M,
    DEPTH_RANGE_M,
    FOCAL_LENGTH_PX,
    IMAGE_HEIGHT,
    IMAGE_WIDTH,
    MAX_NORMAL_TILT_RAD,
    MAX_RESAMPLE_ATTEMPTS,
    MAX_TILT_DEG,
    MAX_YAW_DEG,
    PRINCIPAL_POINT,
    TRANSLATION_NORM_M,
)
from ..utils.exceptions import FrustumExhaustedError, ValidationError

logger = logging.getLogger(__name__)

MotionMode = Literal["random", "forward", "planar", "sideways"]
MOTION_MODES: tuple[str, ...] = ("random", "forward", "planar", "sideways")
Pairing = Literal["intra", "cross"]


@dataclass(frozen=True)
class RigSpec:
    """Cameras spread evenly on a circle in the rig x-z plane, each looking outward."""

    count: int = DEFAULT_RIG_CAMERAS
    radius: float = DEFAULT_RIG_RADIUS_M

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValidationError(f"Rig needs at least one camera, got {self.count}")
        if self.radius < 0.0 or (self.radius == 0.0 and self.count > 1):
            raise ValidationError(f"Rig radius must be positive, got {self.radius}")


def default_rig(spec: RigSpec | None = None) -> RigExtrinsics:
    """
    Build the rig: camera k sits at angle 2 pi k / count about the vertical axis.

    With four cameras the centers are (0, 0, r), (r, 0, 0), (0, 0, -r), (-r, 0, 0)
    and each optical axis points away from the rig center.
    """
    spec = spec or RigSpec()
    cameras = []
    for k in range(spec.count):
        R_k = rotation_y(2.0 * math.pi * k / spec.count)
        cameras.append(RigCamera(id=k, R=R_k, t=R_k @ np.array([0.0, 0.0, spec.radius])))
    return RigExtrinsics(tuple(cameras))


def check_motion(mode: str) -> MotionMode:
    if mode not in MOTION_MODES:
        raise ValidationError(f"Unknown motion mode: {mode!r}. Expected one of {MOTION_MODES}")
    return mode  # type: ignore[return-value]


def motion_direction(mode: MotionMode, rng: np.random.Generator) -> np.ndarray:
    """Unit translation direction following the motion template."""
    match mode:
        case "forward":
            return np.array([0.0, 0.0, rng.choice([-1.0, 1.0])])
        case "sideways":
            return np.array([rng.choice([-1.0, 1.0]), 0.0, 0.0])
        case "planar":
            psi = rng.uniform(0.0, 2.0 * math.pi)
            return np.array([math.cos(psi), 0.0, math.sin(psi)])
        case "random":
            d = rng.standard_normal(3)
            return d / np.linalg.norm(d)
        case _:
            raise ValidationError(f"Unknown motion mode: {mode!r}")


def sample_motion(
    mode: MotionMode,
    rng: np.random.Generator,
    max_yaw_deg: float = MAX_YAW_DEG,
    max_tilt_deg: float = MAX_TILT_DEG,
    translation_norm: float = TRANSLATION_NORM_M,
) -> tuple[AlignedPose, ImuAttitude, ImuAttitude]:
    """
    Draw a yaw, two IMU attitudes and a translation of fixed norm.

    The motion template fixes the body-frame translation t; the aligned
    translation follows as t_tilde = R'_imu t.

    Returns:
        (aligned pose, attitude at time i, attitude at time j)
    """
    mode = check_motion(mode)
    theta = math.radians(rng.uniform(-max_yaw_deg, max_yaw_deg))
    tilts = np.radians(rng.uniform(-max_tilt_deg, max_tilt_deg, size=4))
    imu_i = ImuAttitude(float(tilts[0]), float(tilts[1]))
    imu_j = ImuAttitude(float(tilts[2]), float(tilts[3]))
    t = translation_norm * motion_direction(mode, rng)
    return AlignedPose(s=cayley_from_angle(theta), t_tilde=imu_rotation(imu_j) @ t), imu_i, imu_j


def to_normalized(pixel: np.ndarray) -> np.ndarray:
    cx, cy = PRINCIPAL_POINT
    return np.array([(pixel[0] - cx) / FOCAL_LENGTH_PX, (pixel[1] - cy) / FOCAL_LENGTH_PX, 1.0])


def to_pixel(x: np.ndarray) -> np.ndarray:
    cx, cy = PRINCIPAL_POINT
    return np.array([x[0] * FOCAL_LENGTH_PX + cx, x[1] * FOCAL_LENGTH_PX + cy])


def in_frustum(X_cam: np.ndarray) -> bool:
    if X_cam[2] <= 0.0:
        return False
    u, v = to_pixel(X_cam / X_cam[2])
    return 0.0 <= u < IMAGE_WIDTH and 0.0 <= v < IMAGE_HEIGHT


def plane_homography(R_ij: np.ndarray, t_ij: np.ndarray, n: np.ndarray, d: float) -> np.ndarray:
    """Calibrated homography H = R_ij + t_ij n^T / d of the plane n^T X = d (camera i frame)."""
    return R_ij + np.outer(t_ij, n) / d


def transfer(H: np.ndarray, x_i: np.ndarray) -> np.ndarray:
    y = H @ x_i
    return y / y[2]


def affine_from_homography(H: np.ndarray, x_i: np.ndarray, x_j: np.ndarray) -> np.ndarray:
    """
    First-order affine map of H at (x_i, x_j).

    a11 = (h11 - h31 u_j) / b, a12 = (h21 - h31 v_j) / b,
    a21 = (h12 - h32 u_j) / b, a22 = (h22 - h32 v_j) / b, with b = h3^T x_i.
    The result is the transpose of the Jacobian of x_j with respect to x_i.
    """
    b = H[2] @ x_i
    u_j, v_j = x_j[0], x_j[1]
    return np.array(
        [
            [H[0, 0] - H[2, 0] * u_j, H[1, 0] - H[2, 0] * v_j],
            [H[0, 1] - H[2, 1] * u_j, H[1, 1] - H[2, 1] * v_j],
        ]
    ) / b


@dataclass(frozen=True)
class ScenePlane:
    """Plane n^T X = d in the frame of camera ``cam_i`` at time i, with its homography."""

    cam_i: int
    cam_j: int
    n: np.ndarray
    d: float
    H: np.ndarray


@dataclass(frozen=True)
class GroundTruth:
    rig: RigExtrinsics
    imu_i: ImuAttitude
    imu_j: ImuAttitude
    aligned: AlignedPose
    relative: RelativePose
    planes: tuple[ScenePlane, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class SyntheticInstance:
    """
    Observed solver inputs plus the ground truth that produced them.

    Noise changes the observed fields only; ``truth`` always holds the exact scene.
    """

    rig: RigExtrinsics
    imu_i: ImuAttitude
    imu_j: ImuAttitude
    correspondences: tuple[AffineCorrespondence, ...]
    truth: GroundTruth


def _random_normal_near(ray: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    perp = np.cross(ray, rng.standard_normal(3))
    perp /= np.linalg.norm(perp)
    tilt = rng.uniform(0.0, MAX_NORMAL_TILT_RAD)
    return math.cos(tilt) * ray + math.sin(tilt) * perp


def _sample_plane(
    cam_i: RigCamera,
    cams_j: tuple[RigCamera, ...],
    relative: RelativePose,
    rng: np.random.Generator,
) -> tuple[AffineCorrespondence, ScenePlane]:
    """Place one plane seen by ``cam_i`` at time i and by one of ``cams_j`` at time j."""
    motions = [camera_motion(cam_i, cam_j, relative) for cam_j in cams_j]
    for _ in range(MAX_RESAMPLE_ATTEMPTS):
        pixel = rng.uniform([0.0, 0.0], [IMAGE_WIDTH, IMAGE_HEIGHT])
        x_i = to_normalized(pixel)
        ray = x_i / np.linalg.norm(x_i)
        X_i = rng.uniform(*DEPTH_RANGE_M) * ray
        visible = [k for k, (R_ij, t_ij) in enumerate(motions) if in_frustum(R_ij @ X_i + t_ij)]
        if not visible:
            continue

        pick = visible[int(rng.integers(len(visible)))] if len(visible) > 1 else visible[0]
        cam_j = cams_j[pick]
        R_ij, t_ij = motions[pick]
        n = _random_normal_near(ray, rng)
        d = float(n @ X_i)
        H = plane_homography(R_ij, t_ij, n, d)
        x_j = transfer(H, x_i)
        corr = AffineCorrespondence(
            cam_i=cam_i.id,
            cam_j=cam_j.id,
            x_i=x_i,
            x_j=x_j,
            A=affine_from_homography(H, x_i, x_j),
        )
        return corr, ScenePlane(cam_i=cam_i.id, cam_j=cam_j.id, n=n, d=d, H=H)

    raise FrustumExhaustedError(
        f"No point of camera {cam_i.id} visible at time j after {MAX_RESAMPLE_ATTEMPTS} samples"
    )


def generate_instance(
    rig: RigExtrinsics,
    motion: MotionMode,
    rng: np.random.Generator,
    n_planes: int = DEFAULT_PLANES,
    pairing: Pairing = "intra",
    motion_sample: tuple[AlignedPose, ImuAttitude, ImuAttitude] | None = None,
) -> SyntheticInstance:
    """
    Generate one noise-free problem with one correspondence per random plane.

    Args:
        rig: Rig extrinsics
        motion: Translation template
        rng: Random generator (the only source of randomness)
        n_planes: Number of planes, and therefore correspondences
        pairing: "intra" matches a camera with itself over time, "cross" matches it with
            any camera that sees the point at time j
        motion_sample: Fixed (aligned pose, imu_i, imu_j) used instead of drawing one

    Returns:
        SyntheticInstance whose correspondences satisfy all constraints at the true pose

    Raises:
        ValidationError: If arguments are invalid
        FrustumExhaustedError: If a plane cannot be placed in both views
    """
    if n_planes < 1:
        raise ValidationError(f"n_planes must be positive, got {n_planes}")
    if pairing not in ("intra", "cross"):
        raise ValidationError(f"Unknown pairing: {pairing!r}")

    aligned, imu_i, imu_j = motion_sample if motion_sample is not None else sample_motion(motion, rng)
    relative = unaligned_pose(aligned, imu_i, imu_j)

    corrs = []
    planes = []
    for _ in range(n_planes):
        cam_i = rig.cameras[int(rng.integers(len(rig)))]
        cams_j = rig.cameras if pairing == "cross" else (cam_i,)
        corr, plane = _sample_plane(cam_i, cams_j, relative, rng)
        corrs.append(corr)
        planes.append(plane)

    truth = GroundTruth(
        rig=rig,
        imu_i=imu_i,
        imu_j=imu_j,
        aligned=aligned,
        relative=relative,
        planes=tuple(planes),
    )
    logger.debug(f"Generated {motion} instance with {n_planes} planes, theta_y={math.degrees(aligned.theta_y):.4f} deg")
    return SyntheticInstance(rig=rig, imu_i=imu_i, imu_j=imu_j, correspondences=tuple(corrs), truth=truth)
