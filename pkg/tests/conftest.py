"""Shared fixtures: rigs, motions and noise-free synthetic instances."""

import math

import numpy as np
import pytest

from src.bench.synthetic import SyntheticInstance, default_rig, generate_instance
from src.geometry.pose import AlignedPose
from src.geometry.rig import AffineCorrespondence, ImuAttitude, RigExtrinsics


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def rig() -> RigExtrinsics:
    return default_rig()


def make_instance(
    seed: int,
    motion: str = "random",
    n_planes: int = 30,
    pairing: str = "intra",
    theta_deg: float | None = None,
    t_tilde: tuple[float, float, float] | None = None,
    imu_deg: tuple[float, float, float, float] | None = None,
) -> SyntheticInstance:
    """Noise-free instance; any of yaw, translation and attitudes can be pinned."""
    rng = np.random.default_rng(seed)
    motion_sample = None
    if theta_deg is not None or t_tilde is not None or imu_deg is not None:
        angles = imu_deg if imu_deg is not None else (3.0, -2.0, -4.0, 5.0)
        motion_sample = (
            AlignedPose(
                s=math.tan(math.radians(theta_deg if theta_deg is not None else 4.0) / 2.0),
                t_tilde=np.array(t_tilde if t_tilde is not None else (1.2, 0.3, -1.5)),
            ),
            ImuAttitude.from_degrees(angles[0], angles[1]),
            ImuAttitude.from_degrees(angles[2], angles[3]),
        )
    return generate_instance(
        default_rig(), motion, rng, n_planes=n_planes, pairing=pairing, motion_sample=motion_sample
    )


def random_correspondence(rng: np.random.Generator, rig: RigExtrinsics) -> AffineCorrespondence:
    """Arbitrary (not geometrically consistent) correspondence between two random cameras."""
    ids = rig.ids
    return AffineCorrespondence(
        cam_i=ids[int(rng.integers(len(ids)))],
        cam_j=ids[int(rng.integers(len(ids)))],
        x_i=np.append(rng.uniform(-0.8, 0.8, size=2), 1.0),
        x_j=np.append(rng.uniform(-0.8, 0.8, size=2), 1.0),
        A=np.eye(2) + rng.normal(0.0, 0.2, size=(2, 2)),
    )


@pytest.fixture
def instance() -> SyntheticInstance:
    return make_instance(seed=7)
