"""Noise injection on image points, affine maps, IMU attitudes and rig extrinsics."""

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from ..geometry.rig import AffineCorrespondence, ImuAttitude, RigCamera, RigExtrinsics
from ..utils.config import FOCAL_LENGTH_PX
from ..utils.exceptions import ValidationError
from .synthetic import SyntheticInstance, affine_from_homography

NOISE_KINDS: dict[str, str] = {
    "pixel": "pixel_sigma",
    "pitch": "pitch_sigma",
    "roll": "roll_sigma",
    "extrinsic_rotation": "extrinsic_rot_perturb",
    "extrinsic_translation": "extrinsic_trans_perturb",
}


@dataclass(frozen=True)
class NoiseSpec:
    """
    Noise levels for one trial.

    Pixel noise is a standard deviation in pixels at the synthetic focal
    length; pitch and roll noise are standard deviations in degrees; the
    extrinsic perturbations are a rotation angle in radians and a
    translation norm in meters.
    """

    pixel_sigma: float = 0.0
    pitch_sigma: float = 0.0
    roll_sigma: float = 0.0
    extrinsic_rot_perturb: float = 0.0
    extrinsic_trans_perturb: float = 0.0
    affine_from_noisy_points: bool = True

    def __post_init__(self) -> None:
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name != "affine_from_noisy_points" and not (math.isfinite(value) and value >= 0.0):
                raise ValidationError(f"Noise level {f.name} must be a finite value >= 0, got {value}")

    @property
    def is_zero(self) -> bool:
        return not any(getattr(self, name) for name in NOISE_KINDS.values())

    def with_level(self, kind: str, level: float) -> "NoiseSpec":
        """Copy with the field behind ``kind`` set to ``level``."""
        if kind not in NOISE_KINDS:
            raise ValidationError(f"Unknown noise kind: {kind!r}. Expected one of {tuple(NOISE_KINDS)}")
        return dataclasses.replace(self, **{NOISE_KINDS[kind]: level})


def _perturb_point(x: np.ndarray, sigma: float, rng: np.random.Generator) -> np.ndarray:
    noisy = np.array(x, dtype=float)
    noisy[:2] += rng.normal(0.0, sigma / FOCAL_LENGTH_PX, size=2)
    return noisy


def _perturb_attitude(att: ImuAttitude, ns: NoiseSpec, rng: np.random.Generator) -> ImuAttitude:
    d_roll, d_pitch = rng.normal(0.0, [ns.roll_sigma, ns.pitch_sigma])
    return ImuAttitude(att.roll + math.radians(d_roll), att.pitch + math.radians(d_pitch))


def _random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def perturb_rig(rig: RigExtrinsics, angle: float, distance: float, rng: np.random.Generator) -> RigExtrinsics:
    """Rotate every camera by ``angle`` radians about a random axis and shift it by ``distance`` meters."""
    cameras = []
    for cam in rig.cameras:
        dR = Rotation.from_rotvec(angle * _random_unit(rng)).as_matrix()
        dt = distance * _random_unit(rng)
        cameras.append(RigCamera(id=cam.id, R=dR @ cam.R, t=cam.t + dt))
    return RigExtrinsics(tuple(cameras))


def apply_noise(inst: SyntheticInstance, ns: NoiseSpec, rng: np.random.Generator) -> SyntheticInstance:
    """
    Perturb the observed inputs of ``inst``.

    Image points receive Gaussian pixel noise; when ``affine_from_noisy_points``
    is set the affine maps are recomputed from the true homographies at the
    noisy locations, otherwise they stay exact. IMU attitudes at both times
    receive independent roll and pitch noise. The solver's rig is perturbed
    while the ground truth keeps the exact rig.

    Returns:
        A new instance, or ``inst`` itself when every level is zero
    """
    if ns.is_zero:
        return inst

    corrs = inst.correspondences
    if ns.pixel_sigma > 0.0:
        noisy = []
        for c, plane in zip(corrs, inst.truth.planes, strict=True):
            x_i = _perturb_point(c.x_i, ns.pixel_sigma, rng)
            x_j = _perturb_point(c.x_j, ns.pixel_sigma, rng)
            A = affine_from_homography(plane.H, x_i, x_j) if ns.affine_from_noisy_points else c.A
            noisy.append(AffineCorrespondence(cam_i=c.cam_i, cam_j=c.cam_j, x_i=x_i, x_j=x_j, A=A))
        corrs = tuple(noisy)

    imu_i, imu_j = inst.imu_i, inst.imu_j
    if ns.roll_sigma > 0.0 or ns.pitch_sigma > 0.0:
        imu_i = _perturb_attitude(imu_i, ns, rng)
        imu_j = _perturb_attitude(imu_j, ns, rng)

    rig = inst.rig
    if ns.extrinsic_rot_perturb > 0.0 or ns.extrinsic_trans_perturb > 0.0:
        rig = perturb_rig(rig, ns.extrinsic_rot_perturb, ns.extrinsic_trans_perturb, rng)

    return dataclasses.replace(inst, rig=rig, imu_i=imu_i, imu_j=imu_j, correspondences=corrs)
