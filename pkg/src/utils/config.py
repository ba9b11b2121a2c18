"""Configuration management with environment variable support."""

import math
import os

from .exceptions import ConfigurationError


def _env_int(name: str, default: str) -> int:
    raw = os.getenv(name, default)
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}") from e


def _env_float(name: str, default: str) -> float:
    raw = os.getenv(name, default)
    try:
        return float(raw)
    except ValueError as e:
        raise ConfigurationError(f"{name} must be a number, got {raw!r}") from e


# Bench Parallelism
BENCH_THREADS: int = max(1, _env_int("GENRELPOSE_THREADS", "1"))

# Synthetic Camera Model (pixels)
FOCAL_LENGTH_PX: float = _env_float("FOCAL_LENGTH_PX", "400")
IMAGE_WIDTH: int = 640
IMAGE_HEIGHT: int = 480
PRINCIPAL_POINT: tuple[float, float] = (320.0, 240.0)

# Synthetic Scene
DEFAULT_RIG_CAMERAS: int = 4
DEFAULT_RIG_RADIUS_M: float = 0.5
MAX_YAW_DEG: float = 10.0
MAX_TILT_DEG: float = 10.0
TRANSLATION_NORM_M: float = 2.0
DEPTH_RANGE_M: tuple[float, float] = (4.0, 8.0)
MAX_NORMAL_TILT_RAD: float = math.radians(45.0)
MAX_RESAMPLE_ATTEMPTS: int = _env_int("MAX_RESAMPLE_ATTEMPTS", "1000")

# Bench Defaults
DEFAULT_TRIALS: int = _env_int("DEFAULT_TRIALS", "1000")
DEFAULT_PLANES: int = 100
DEFAULT_SEED: int = 0

# Solver Thresholds
B0_CONDITION_LIMIT: float = 1e12
REALNESS_TOL: float = 1e-6
MIN_EIGENVALUE_MAGNITUDE: float = 1e-10
DEFLATION_TOL: float = 0.0
DEGREE_TRUNCATION_TOL: float = 1e-9
DEGENERATE_TRANSLATION_TOL: float = 1e-9
POLISH_INITIAL_STEP: float = 1e-6
POLISH_RADIUS: float = 0.05
POLISH_XTOL: float = 1e-15

# Grid Oracle
GRID_HALF_RANGE_DEG: float = 179.0
GRID_STEP_DEG: float = 0.01
GRID_REFINE_TOL: float = 1e-10

# File Loading
ROTATION_LOAD_TOL: float = 1e-6
FLOAT_SIGNIFICANT_DIGITS: int = 17
SUPPORTED_PROBLEM_FORMATS: set[str] = {".json"}
SUPPORTED_POSE_FORMATS: set[str] = {".txt"}

# Logging Configuration
LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
LOG_FORMAT: str = os.getenv(
    "LOG_FORMAT",
    "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
