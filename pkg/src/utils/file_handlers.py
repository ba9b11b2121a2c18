"""Problem, solution, ground-truth and pose file I/O."""

import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..geometry.rig import AffineCorrespondence, ImuAttitude, RigCamera, RigExtrinsics
from .config import SUPPORTED_POSE_FORMATS, SUPPORTED_PROBLEM_FORMATS
from .exceptions import FileFormatError, ValidationError
from .formatters import format_float, format_json_output, parse_json, validate_json_structure
from .validators import validate_input_file, validate_output_path, validate_rotation

logger = logging.getLogger(__name__)

POINT_UNITS = ("normalized", "pixels")


@dataclass(frozen=True)
class Intrinsics:
    fx: float
    fy: float
    cx: float
    cy: float


@dataclass(frozen=True)
class PixelMeasurement:
    """Point pair and affine map of one correspondence in pixels, as read."""

    x_i: np.ndarray
    x_j: np.ndarray
    A: np.ndarray


@dataclass(frozen=True)
class Problem:
    """
    Solver inputs as stored in a problem file; ``correspondences`` are always normalized.

    Attitudes are kept in the degrees written in the file, and pixel
    problems keep their pixel values, so that saving reproduces the file exactly.
    """

    rig: RigExtrinsics
    imu_i_deg: tuple[float, float]
    imu_j_deg: tuple[float, float]
    correspondences: tuple[AffineCorrespondence, ...]
    intrinsics: dict[int, Intrinsics] = field(default_factory=dict)
    points: str = "normalized"
    pixels: tuple[PixelMeasurement, ...] = ()

    @property
    def imu_i(self) -> ImuAttitude:
        return ImuAttitude.from_degrees(*self.imu_i_deg)

    @property
    def imu_j(self) -> ImuAttitude:
        return ImuAttitude.from_degrees(*self.imu_j_deg)

    @classmethod
    def from_attitudes(
        cls,
        rig: RigExtrinsics,
        imu_i: ImuAttitude,
        imu_j: ImuAttitude,
        correspondences: tuple[AffineCorrespondence, ...],
    ) -> "Problem":
        return cls(rig, (imu_i.roll_deg, imu_i.pitch_deg), (imu_j.roll_deg, imu_j.pitch_deg), tuple(correspondences))


def _numbers(value: Any, count: int, context: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != count:
        raise FileFormatError(f"{context}: expected a list of {count} numbers")
    if not all(isinstance(v, int | float) and not isinstance(v, bool) for v in value):
        raise FileFormatError(f"{context}: expected numbers")
    arr = np.array(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise FileFormatError(f"{context}: numbers must be finite")
    return arr


def _number(value: Any, context: str) -> float:
    if not isinstance(value, int | float) or isinstance(value, bool) or not math.isfinite(value):
        raise FileFormatError(f"{context}: expected a finite number")
    return float(value)


def _integer(value: Any, context: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise FileFormatError(f"{context}: expected an integer")
    return value


def _attitude(data: Any, context: str) -> tuple[float, float]:
    validate_json_structure(data, ["roll_deg", "pitch_deg"], context)
    degrees = (
        _number(data["roll_deg"], f"{context}.roll_deg"),
        _number(data["pitch_deg"], f"{context}.pitch_deg"),
    )
    ImuAttitude.from_degrees(*degrees)
    return degrees


def _list(data: dict[str, Any], key: str) -> list[Any]:
    value = data[key]
    if not isinstance(value, list):
        raise FileFormatError(f"{key}: expected a list")
    return value


def problem_from_dict(data: Any) -> Problem:
    """
    Parse a problem JSON object.

    Pixel points (``"points": "pixels"``) are converted with the per-camera
    intrinsics; the affine map is rescaled to match.

    Raises:
        FileFormatError: If a field is missing or malformed (the message names it)
        ValidationError: If a rotation is not orthonormal or a camera id is unknown
    """
    validate_json_structure(data, ["rig", "imu_i", "imu_j", "correspondences"], "problem")

    cameras = []
    for k, cam in enumerate(_list(data, "rig")):
        context = f"rig[{k}]"
        validate_json_structure(cam, ["id", "R", "t"], context)
        R = validate_rotation(_numbers(cam["R"], 9, f"{context}.R").reshape(3, 3), f"{context}.R")
        cameras.append(RigCamera(id=_integer(cam["id"], f"{context}.id"), R=R, t=_numbers(cam["t"], 3, f"{context}.t")))
    rig = RigExtrinsics(tuple(cameras))

    intrinsics: dict[int, Intrinsics] = {}
    for k, entry in enumerate(data.get("intrinsics", [])):
        context = f"intrinsics[{k}]"
        validate_json_structure(entry, ["id", "fx", "fy", "cx", "cy"], context)
        cam_id = _integer(entry["id"], f"{context}.id")
        intrinsics[cam_id] = Intrinsics(*(_number(entry[key], f"{context}.{key}") for key in ("fx", "fy", "cx", "cy")))

    units = data.get("points", "normalized")
    if units not in POINT_UNITS:
        raise FileFormatError(f"points: expected one of {POINT_UNITS}, got {units!r}")

    corrs = []
    pixels = []
    for k, entry in enumerate(_list(data, "correspondences")):
        context = f"correspondences[{k}]"
        validate_json_structure(entry, ["cam_i", "cam_j", "x_i", "x_j", "A"], context)
        cam_i = _integer(entry["cam_i"], f"{context}.cam_i")
        cam_j = _integer(entry["cam_j"], f"{context}.cam_j")
        rig.camera(cam_i)
        rig.camera(cam_j)
        x_i = _numbers(entry["x_i"], 2, f"{context}.x_i")
        x_j = _numbers(entry["x_j"], 2, f"{context}.x_j")
        A = _numbers(entry["A"], 4, f"{context}.A").reshape(2, 2)
        if units == "pixels":
            pixels.append(PixelMeasurement(x_i=x_i, x_j=x_j, A=A))
            x_i, x_j, A = _normalize_pixels(x_i, x_j, A, intrinsics, cam_i, cam_j, context)
        corrs.append(AffineCorrespondence(cam_i=cam_i, cam_j=cam_j, x_i=x_i, x_j=x_j, A=A))

    return Problem(
        rig=rig,
        imu_i_deg=_attitude(data["imu_i"], "imu_i"),
        imu_j_deg=_attitude(data["imu_j"], "imu_j"),
        correspondences=tuple(corrs),
        intrinsics=intrinsics,
        points=units,
        pixels=tuple(pixels),
    )


def _normalize_pixels(
    x_i: np.ndarray,
    x_j: np.ndarray,
    A: np.ndarray,
    intrinsics: dict[int, Intrinsics],
    cam_i: int,
    cam_j: int,
    context: str,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    try:
        K_i = intrinsics[cam_i]
        K_j = intrinsics[cam_j]
    except KeyError as e:
        raise FileFormatError(f"{context}: pixel points need intrinsics for camera {e.args[0]}") from e
    x_i = np.array([(x_i[0] - K_i.cx) / K_i.fx, (x_i[1] - K_i.cy) / K_i.fy])
    x_j = np.array([(x_j[0] - K_j.cx) / K_j.fx, (x_j[1] - K_j.cy) / K_j.fy])
    # A is the transposed Jacobian, so the scalings apply on the opposite sides
    A = np.diag([K_i.fx, K_i.fy]) @ A @ np.diag([1.0 / K_j.fx, 1.0 / K_j.fy])
    return x_i, x_j, A


def problem_to_dict(problem: Problem) -> dict[str, Any]:
    if problem.points == "pixels":
        measured = [(p.x_i, p.x_j, p.A) for p in problem.pixels]
    else:
        measured = [(c.x_i[:2], c.x_j[:2], c.A) for c in problem.correspondences]
    data: dict[str, Any] = {
        "rig": [{"id": cam.id, "R": cam.R.reshape(-1), "t": cam.t} for cam in problem.rig.cameras],
        "imu_i": {"roll_deg": problem.imu_i_deg[0], "pitch_deg": problem.imu_i_deg[1]},
        "imu_j": {"roll_deg": problem.imu_j_deg[0], "pitch_deg": problem.imu_j_deg[1]},
        "points": problem.points,
        "correspondences": [
            {"cam_i": c.cam_i, "cam_j": c.cam_j, "x_i": x_i, "x_j": x_j, "A": A.reshape(-1)}
            for c, (x_i, x_j, A) in zip(problem.correspondences, measured, strict=True)
        ],
    }
    if problem.intrinsics:
        data["intrinsics"] = [
            {"id": cam_id, "fx": K.fx, "fy": K.fy, "cx": K.cx, "cy": K.cy}
            for cam_id, K in sorted(problem.intrinsics.items())
        ]
    return data


def read_json_file(file_path: Path, kind: str = "problem") -> Any:
    validate_input_file(file_path, SUPPORTED_PROBLEM_FORMATS, kind)
    return parse_json(file_path.read_text(encoding="utf-8"), source=str(file_path))


def write_json_file(data: dict[str, Any], file_path: Path) -> None:
    validate_output_path(file_path)
    file_path.write_text(format_json_output(data), encoding="utf-8")
    logger.debug(f"Wrote {file_path}")


def load_problem(file_path: Path) -> Problem:
    """
    Load a problem file.

    Raises:
        ValidationError: If the file is missing or a value is invalid
        FileFormatError: If the file is malformed
    """
    problem = problem_from_dict(read_json_file(file_path))
    logger.info(f"Loaded problem with {len(problem.correspondences)} correspondences from {file_path}")
    return problem


def save_problem(problem: Problem, file_path: Path) -> None:
    write_json_file(problem_to_dict(problem), file_path)


def solution_to_dict(report: Any) -> dict[str, Any]:
    """SolutionFile content for a SolveReport; candidates are sorted by lambda_min."""
    candidates = sorted(report.candidates, key=lambda c: (c.lambda_min, abs(c.s)))
    return {
        "s": report.aligned.s,
        "theta_y_deg": report.theta_y_deg,
        "R": report.relative.R.reshape(-1),
        "t": report.relative.t,
        "t_tilde": report.aligned.t_tilde,
        "lambda_min": report.lambda_min,
        "candidates": [{"s": c.s, "lambda_min": c.lambda_min, "source": c.source} for c in candidates],
        "mode": report.mode,
        "companion_size": report.companion_size,
        "fallback": report.fallback,
        "degenerate_translation": report.degenerate_translation,
        "wall_time_ms": report.wall_time_ms,
    }


def truth_path(problem_path: Path) -> Path:
    """Sidecar path ``<stem>.truth.json`` next to a problem file."""
    return problem_path.with_name(f"{problem_path.stem}.truth.json")


def truth_to_dict(truth: Any) -> dict[str, Any]:
    """Ground-truth sidecar content for a synthetic GroundTruth."""
    return {
        "s": truth.aligned.s,
        "theta_y_deg": math.degrees(truth.aligned.theta_y),
        "t_tilde": truth.aligned.t_tilde,
        "R": truth.relative.R.reshape(-1),
        "t": truth.relative.t,
        "imu_i": {"roll_deg": truth.imu_i.roll_deg, "pitch_deg": truth.imu_i.pitch_deg},
        "imu_j": {"roll_deg": truth.imu_j.roll_deg, "pitch_deg": truth.imu_j.pitch_deg},
    }


def load_truth(file_path: Path) -> dict[str, Any]:
    data = read_json_file(file_path, kind="truth")
    validate_json_structure(data, ["s", "theta_y_deg", "t_tilde", "R", "t"], "truth")
    return data


def load_poses(file_path: Path) -> np.ndarray:
    """
    Load a pose file with 12 numbers per line (row-major [R | t]).

    Returns:
        Array of shape (K, 4, 4)

    Raises:
        FileFormatError: If a line does not hold 12 numbers
        ValidationError: If a rotation is not orthonormal
    """
    validate_input_file(file_path, SUPPORTED_POSE_FORMATS, "pose")
    poses = []
    for line_no, line in enumerate(file_path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            values = np.array([float(v) for v in line.split()])
        except ValueError as e:
            raise FileFormatError(f"{file_path}:{line_no}: expected 12 numbers") from e
        if values.shape != (12,) or not np.all(np.isfinite(values)):
            raise FileFormatError(f"{file_path}:{line_no}: expected 12 finite numbers, got {values.shape[0]}")
        T = np.eye(4)
        T[:3, :] = values.reshape(3, 4)
        validate_rotation(T[:3, :3], f"{file_path}:{line_no}")
        poses.append(T)
    if not poses:
        raise ValidationError(f"{file_path}: no poses")
    return np.stack(poses)


def format_poses(poses: np.ndarray) -> str:
    return "".join(" ".join(format_float(v) for v in T[:3, :].reshape(-1)) + "\n" for T in poses)


def save_poses(poses: np.ndarray, file_path: Path) -> None:
    validate_output_path(file_path)
    file_path.write_text(format_poses(poses), encoding="utf-8")


def write_output(content: str, output_path: Path | None) -> None:
    """
    Write content to file or stdout.

    Args:
        content: Content to write
        output_path: Output file path (None for stdout)
    """
    if output_path:
        validate_output_path(output_path)
        output_path.write_text(content, encoding="utf-8")
        logger.info(f"Output written to: {output_path}")
    else:
        sys.stdout.write(content)
