"""Multi-camera rig, IMU attitude and affine correspondence types."""

import math
from dataclasses import dataclass

import numpy as np

from ..utils.exceptions import UnknownCameraError, ValidationError


def _frozen_array(values: object, shape: tuple[int, ...], name: str) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(shape)
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} must contain finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ImuAttitude:
    """Roll (about x) and pitch (about z) in radians."""

    roll: float
    pitch: float

    def __post_init__(self) -> None:
        if not (abs(self.roll) < math.pi and abs(self.pitch) < math.pi):
            raise ValidationError(f"IMU angles must lie in (-pi, pi), got roll={self.roll}, pitch={self.pitch}")

    @classmethod
    def from_degrees(cls, roll_deg: float, pitch_deg: float) -> "ImuAttitude":
        return cls(math.radians(roll_deg), math.radians(pitch_deg))

    @property
    def roll_deg(self) -> float:
        return math.degrees(self.roll)

    @property
    def pitch_deg(self) -> float:
        return math.degrees(self.pitch)


IDENTITY_ATTITUDE = ImuAttitude(0.0, 0.0)


@dataclass(frozen=True)
class RigCamera:
    """Camera-to-body extrinsics of one rig camera (t_k in meters)."""

    id: int
    R: np.ndarray
    t: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "R", _frozen_array(self.R, (3, 3), f"camera {self.id} R"))
        object.__setattr__(self, "t", _frozen_array(self.t, (3,), f"camera {self.id} t"))


@dataclass(frozen=True)
class RigExtrinsics:
    """Ordered cameras of a rig, looked up by id."""

    cameras: tuple[RigCamera, ...]

    def __post_init__(self) -> None:
        cameras = tuple(self.cameras)
        if not cameras:
            raise ValidationError("A rig needs at least one camera")
        ids = [cam.id for cam in cameras]
        if len(set(ids)) != len(ids):
            raise ValidationError(f"Camera ids must be unique, got {ids}")
        object.__setattr__(self, "cameras", cameras)

    def camera(self, cam_id: int) -> RigCamera:
        for cam in self.cameras:
            if cam.id == cam_id:
                return cam
        raise UnknownCameraError(f"Unknown camera id: {cam_id}")

    @property
    def ids(self) -> list[int]:
        return [cam.id for cam in self.cameras]

    def __len__(self) -> int:
        return len(self.cameras)


@dataclass(frozen=True)
class AffineCorrespondence:
    """
    A point match between camera ``cam_i`` at time i and ``cam_j`` at time j.

    ``x_i`` and ``x_j`` are normalized homogeneous points (third entry 1).
    ``A`` uses the homography first-order layout, which is the transpose of
    the Jacobian of x_j with respect to x_i.
    """

    cam_i: int
    cam_j: int
    x_i: np.ndarray
    x_j: np.ndarray
    A: np.ndarray

    def __post_init__(self) -> None:
        for name in ("x_i", "x_j"):
            x = np.array(getattr(self, name), dtype=float).reshape(-1)
            if x.shape == (2,):
                x = np.append(x, 1.0)
            if x.shape != (3,) or x[2] != 1.0:
                raise ValidationError(f"{name} must be a normalized homogeneous point with third entry 1")
            object.__setattr__(self, name, _frozen_array(x, (3,), name))
        object.__setattr__(self, "A", _frozen_array(self.A, (2, 2), "A"))


@dataclass(frozen=True)
class PluckerLine:
    """Unit direction f and moment m = t x f of a viewing ray (moment in meters)."""

    f: np.ndarray
    m: np.ndarray


def bearing(x: np.ndarray, cam: RigCamera) -> np.ndarray:
    """Unit ray direction of image point ``x`` expressed in the body frame."""
    d = cam.R @ np.asarray(x, dtype=float)
    return d / np.linalg.norm(d)


def plucker(x: np.ndarray, cam: RigCamera) -> PluckerLine:
    """
    Plucker line of the ray through normalized point ``x`` of camera ``cam``.

    Args:
        x: Homogeneous normalized image point (third entry 1)
        cam: Rig camera observing the point

    Returns:
        PluckerLine with f = R_k x / |R_k x| and m = t_k x f
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (3,) or x[2] != 1.0:
        raise ValidationError("plucker expects a homogeneous point with third entry 1")
    f = bearing(x, cam)
    return PluckerLine(f=f, m=np.cross(cam.t, f))
