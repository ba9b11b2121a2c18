"""Pose chain accumulation and absolute trajectory error."""

import logging
from dataclasses import dataclass

import numpy as np

from ..geometry.pose import RelativePose, relative_to_matrix
from ..solver.pipeline import RelativePoseSolver
from ..utils.config import DEFAULT_SEED
from ..utils.exceptions import ValidationError
from .noise import NoiseSpec, apply_noise
from .synthetic import MotionMode, RigSpec, default_rig, generate_instance

logger = logging.getLogger(__name__)


def accumulate_trajectory(poses: list[RelativePose]) -> np.ndarray:
    """
    Chain relative motions into absolute poses, starting from the identity.

    Each relative pose maps body coordinates at step k to step k + 1, so the
    absolute pose advances as T_{k+1} = T_k inv(T_rel).

    Returns:
        Array of shape (len(poses) + 1, 4, 4)
    """
    if not poses:
        raise ValidationError("Cannot accumulate an empty pose chain")
    traj = np.zeros((len(poses) + 1, 4, 4))
    traj[0] = np.eye(4)
    for k, pose in enumerate(poses):
        traj[k + 1] = traj[k] @ np.linalg.inv(relative_to_matrix(pose))
    return traj


def position_errors(traj: np.ndarray, gt: np.ndarray) -> np.ndarray:
    """Per-frame distance between the translation parts of two trajectories."""
    traj = np.asarray(traj, dtype=float)
    gt = np.asarray(gt, dtype=float)
    if traj.shape[0] != gt.shape[0]:
        raise ValidationError(f"Trajectory length mismatch: {traj.shape[0]} vs {gt.shape[0]} poses")
    if traj.shape[0] == 0:
        raise ValidationError("Trajectories are empty")
    return np.linalg.norm(traj[:, :3, 3] - gt[:, :3, 3], axis=1)


def ate(traj: np.ndarray, gt: np.ndarray) -> float:
    """Root-mean-square position error without alignment (both chains share frame 0)."""
    errors = position_errors(traj, gt)
    return float(np.sqrt(np.mean(errors**2)))


@dataclass(frozen=True)
class TrajectoryResult:
    estimated: np.ndarray
    ground_truth: np.ndarray
    ate: float
    fallbacks: int


def simulate_trajectory(
    steps: int,
    noise: NoiseSpec,
    seed: int = DEFAULT_SEED,
    motion: MotionMode = "random",
    correspondences: int = 20,
    mode: str = "full",
    rig_spec: RigSpec | None = None,
) -> TrajectoryResult:
    """
    Solve a chain of synthetic steps and compare the accumulated trajectories.

    Args:
        steps: Number of relative motions
        noise: Noise applied to every step
        seed: Seed of the whole chain
        motion: Translation template of each step
        correspondences: Correspondences per step
        mode: Solver mode
        rig_spec: Rig layout

    Returns:
        TrajectoryResult with both chains and their ATE in meters
    """
    if steps < 1:
        raise ValidationError(f"steps must be positive, got {steps}")
    rng = np.random.default_rng(seed)
    rig = default_rig(rig_spec)
    solver = RelativePoseSolver(mode=mode)

    estimated: list[RelativePose] = []
    truth: list[RelativePose] = []
    fallbacks = 0
    for _ in range(steps):
        inst = apply_noise(generate_instance(rig, motion, rng, n_planes=correspondences), noise, rng)
        report = solver.solve(list(inst.correspondences), inst.rig, inst.imu_i, inst.imu_j)
        fallbacks += int(report.fallback)
        estimated.append(report.relative)
        truth.append(inst.truth.relative)

    est_traj = accumulate_trajectory(estimated)
    gt_traj = accumulate_trajectory(truth)
    result = TrajectoryResult(estimated=est_traj, ground_truth=gt_traj, ate=ate(est_traj, gt_traj), fallbacks=fallbacks)
    logger.info(f"Simulated {steps}-step trajectory: ATE={result.ate:.6f} m")
    return result
