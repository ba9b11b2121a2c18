"""Solve and trajectory command handlers for CLI."""

import logging
from argparse import Namespace

import numpy as np

from src.bench.trajectory import accumulate_trajectory, ate, position_errors
from src.geometry.pose import matrix_to_relative
from src.solver.pipeline import RelativePoseSolver
from src.utils.exceptions import DegenerateTranslationError, RelPoseError
from src.utils.file_handlers import load_poses, load_problem, solution_to_dict, write_output
from src.utils.formatters import format_csv, format_float, format_json_output

logger = logging.getLogger(__name__)

SOLVER_MODE_ALIASES = {"full": "full", "linear": "linearized", "linearized": "linearized"}


def handle_solve(args: Namespace) -> str | None:
    """
    Handle solve command.

    A direction-only result is still written before the degenerate status is raised.
    """
    try:
        problem = load_problem(args.problem)
        solver = RelativePoseSolver(mode=SOLVER_MODE_ALIASES[args.mode])
        report = solver.solve(list(problem.correspondences), problem.rig, problem.imu_i, problem.imu_j)
    except RelPoseError as e:
        logger.error(f"Solve failed: {e}")
        raise

    content = format_json_output(solution_to_dict(report))
    if report.degenerate_translation:
        write_output(content, args.out)
        raise DegenerateTranslationError("translation scale is unobservable; solution holds a direction only")
    return content


def _chain(poses: np.ndarray, relative: bool) -> np.ndarray:
    if not relative:
        return poses
    return accumulate_trajectory([matrix_to_relative(T) for T in poses])


def handle_traj(args: Namespace) -> str:
    """Handle traj command: per-frame position errors followed by the ATE."""
    try:
        estimated = _chain(load_poses(args.poses), args.relative)
        ground_truth = _chain(load_poses(args.gt), args.relative)
        errors = position_errors(estimated, ground_truth)
        value = ate(estimated, ground_truth)
    except RelPoseError as e:
        logger.error(f"Trajectory evaluation failed: {e}")
        raise

    logger.info(f"ATE over {errors.shape[0]} frames: {value:.6f} m")
    rows = [[frame, float(err)] for frame, err in enumerate(errors)]
    return format_csv(["frame", "error_m"], rows) + f"# ate_m={format_float(value)}\n"
