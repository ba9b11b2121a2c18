"""Input validation utilities."""

from pathlib import Path

import numpy as np

from .config import ROTATION_LOAD_TOL
from .exceptions import FileFormatError, ValidationError


def validate_file_exists(file_path: Path) -> None:
    """
    Validate that a file exists.

    Args:
        file_path: Path to validate

    Raises:
        ValidationError: If file does not exist
    """
    if not file_path.exists():
        raise ValidationError(f"File does not exist: {file_path}")

    if not file_path.is_file():
        raise ValidationError(f"Path is not a file: {file_path}")


def validate_input_file(file_path: Path, supported_formats: set[str], kind: str) -> None:
    """
    Validate an input file (exists, supported extension).

    Raises:
        ValidationError: If the file does not exist
        FileFormatError: If the extension is not supported
    """
    validate_file_exists(file_path)
    if file_path.suffix.lower() not in supported_formats:
        raise FileFormatError(
            f"Unsupported {kind} format: {file_path.suffix}. Supported formats: {', '.join(sorted(supported_formats))}"
        )


def validate_output_path(output_path: Path, create_parents: bool = True) -> None:
    """
    Validate and prepare output path.

    Args:
        output_path: Path for output file
        create_parents: Whether to create parent directories

    Raises:
        ValidationError: If path is invalid
    """
    if output_path.exists() and output_path.is_dir():
        raise ValidationError(f"Output path is a directory: {output_path}")

    if create_parents:
        output_path.parent.mkdir(parents=True, exist_ok=True)


def validate_rotation(R: np.ndarray, context: str, tol: float = ROTATION_LOAD_TOL) -> np.ndarray:
    """
    Check that ``R`` is a 3x3 rotation within ``tol``.

    Returns:
        ``R`` as a float array

    Raises:
        ValidationError: If ``R`` is not orthonormal with determinant 1
    """
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3) or not np.all(np.isfinite(R)):
        raise ValidationError(f"{context}: rotation must be 3x3 and finite")
    if np.max(np.abs(R.T @ R - np.eye(3))) > tol or abs(np.linalg.det(R) - 1.0) > tol:
        raise ValidationError(f"{context}: rotation is not orthonormal within {tol:g}")
    return R
