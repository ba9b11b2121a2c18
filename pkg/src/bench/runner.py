"""Noise-sweep benchmark: many independent synthetic trials per noise level."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..constraints.rows import check_mode
from ..geometry.metrics import eps_direction, eps_rotation, eps_translation
from ..solver.pipeline import RelativePoseSolver
from ..utils.config import BENCH_THREADS, DEFAULT_SEED, DEFAULT_TRIALS
from ..utils.exceptions import RelPoseError, ValidationError
from ..utils.formatters import format_csv, format_float
from .noise import NOISE_KINDS, NoiseSpec, apply_noise
from .synthetic import MotionMode, RigSpec, check_motion, default_rig, generate_instance

logger = logging.getLogger(__name__)

CSV_HEADER = ["noise_kind", "noise_level", "trial", "eps_r_deg", "eps_t", "eps_tdir_deg", "solve_ms", "status"]
METRICS = ("eps_r_deg", "eps_t", "eps_tdir_deg")
IMU_KINDS = ("pitch", "roll")
IMU_SWEEP_PIXEL_SIGMA = 1.0


@dataclass(frozen=True)
class BenchConfig:
    """One noise sweep: ``noise_kind`` takes each value of ``noise_levels`` on top of ``base_noise``."""

    motion: MotionMode = "random"
    noise_kind: str = "pixel"
    noise_levels: tuple[float, ...] = (1.0,)
    trials: int = DEFAULT_TRIALS
    correspondences: int = 100
    solver_mode: str = "full"
    seed: int = DEFAULT_SEED
    base_noise: NoiseSpec | None = None
    timing: bool = False
    rig: RigSpec = field(default_factory=RigSpec)

    def __post_init__(self) -> None:
        check_motion(self.motion)
        if self.noise_kind not in NOISE_KINDS:
            raise ValidationError(f"Unknown noise kind: {self.noise_kind!r}. Expected one of {tuple(NOISE_KINDS)}")
        if not self.noise_levels:
            raise ValidationError("noise_levels must not be empty")
        if self.trials < 1:
            raise ValidationError(f"trials must be positive, got {self.trials}")
        if self.correspondences < 2:
            raise ValidationError(f"need at least 2 affine correspondences, got {self.correspondences}")
        check_mode(self.solver_mode)
        object.__setattr__(self, "noise_levels", tuple(float(v) for v in self.noise_levels))

    def noise_at(self, level: float) -> NoiseSpec:
        """NoiseSpec of one sweep level; IMU sweeps default to 1 px image noise."""
        base = self.base_noise
        if base is None:
            base = NoiseSpec(pixel_sigma=IMU_SWEEP_PIXEL_SIGMA) if self.noise_kind in IMU_KINDS else NoiseSpec()
        return base.with_level(self.noise_kind, level)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "BenchConfig":
        """Build a config from parsed JSON, validating field types."""
        known = {"motion", "noise_kind", "noise_levels", "trials", "correspondences", "solver_mode", "seed",
                 "base_noise", "timing", "rig_cameras", "rig_radius"}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValidationError(f"Unknown bench config field '{unknown[0]}'")
        kwargs = {k: v for k, v in data.items() if k in known - {"base_noise", "rig_cameras", "rig_radius"}}
        if "noise_levels" in kwargs:
            kwargs["noise_levels"] = tuple(kwargs["noise_levels"])
        try:
            if "base_noise" in data:
                kwargs["base_noise"] = NoiseSpec(**data["base_noise"])
            if "rig_cameras" in data or "rig_radius" in data:
                kwargs["rig"] = RigSpec(
                    count=data.get("rig_cameras", RigSpec.count),
                    radius=data.get("rig_radius", RigSpec.radius),
                )
            return cls(**kwargs)
        except TypeError as e:
            raise ValidationError(f"Invalid bench config: {e}") from e


@dataclass(frozen=True)
class TrialStats:
    noise_kind: str
    noise_level: float
    trial: int
    eps_r_deg: float
    eps_t: float
    eps_tdir_deg: float
    solve_ms: float | None
    status: str

    @property
    def ok(self) -> bool:
        return self.status != "failed"


def empirical_cdf(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Sorted finite values and their cumulative fractions.

    Returns:
        (sorted values, fraction of samples <= each value)
    """
    finite = np.sort(np.asarray(values, dtype=float)[np.isfinite(values)])
    fractions = np.arange(1, finite.shape[0] + 1) / max(finite.shape[0], 1)
    return finite, fractions


@dataclass
class BenchReport:
    config: BenchConfig
    trials: list[TrialStats]

    def at_level(self, level: float) -> list[TrialStats]:
        return [t for t in self.trials if t.noise_level == level]

    def values(self, metric: str, level: float) -> np.ndarray:
        if metric not in METRICS:
            raise ValidationError(f"Unknown metric: {metric!r}. Expected one of {METRICS}")
        return np.array([getattr(t, metric) for t in self.at_level(level)], dtype=float)

    def cdf(self, metric: str, level: float) -> tuple[np.ndarray, np.ndarray]:
        return empirical_cdf(self.values(metric, level))

    def summary(self, level: float) -> dict[str, float]:
        """Mean and median per metric over finite values, with the failure rate."""
        trials = self.at_level(level)
        out: dict[str, float] = {"trials": float(len(trials))}
        failures = sum(not t.ok for t in trials)
        out["failure_rate"] = failures / len(trials) if trials else 0.0
        for metric in METRICS:
            vals = self.values(metric, level)
            vals = vals[np.isfinite(vals)]
            out[f"mean_{metric}"] = float(np.mean(vals)) if vals.size else math.nan
            out[f"median_{metric}"] = float(np.median(vals)) if vals.size else math.nan
        if self.config.timing:
            times = [t.solve_ms for t in trials if t.solve_ms is not None]
            out["mean_solve_ms"] = float(np.mean(times)) if times else math.nan
        return out

    def to_csv(self) -> str:
        """Per-trial rows followed by one '#' summary line per level."""
        rows = [
            [t.noise_kind, t.noise_level, t.trial, t.eps_r_deg, t.eps_t, t.eps_tdir_deg, t.solve_ms, t.status]
            for t in self.trials
        ]
        lines = [format_csv(CSV_HEADER, rows)]
        for level in self.config.noise_levels:
            stats = self.summary(level)
            fields = " ".join(f"{k}={format_float(v)}" for k, v in stats.items())
            lines.append(f"# {self.config.noise_kind}={format_float(level)} {fields}\n")
        return "".join(lines)

    def cdf_csv(self) -> str:
        """CDF samples for every level and metric: noise_level,metric,value,fraction."""
        rows: list[list[Any]] = []
        for level in self.config.noise_levels:
            for metric in METRICS:
                xs, fs = self.cdf(metric, level)
                rows.extend([level, metric, float(x), float(f)] for x, f in zip(xs, fs, strict=True))
        return format_csv(["noise_level", "metric", "value", "fraction"], rows)


def _trial_rng(seed: int, level_index: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, level_index, trial]))


def run_trial(
    config: BenchConfig,
    solver: RelativePoseSolver,
    level_index: int,
    trial: int,
) -> TrialStats:
    """
    Generate, perturb and solve one instance.

    Generation and solver failures are recorded as a "failed" trial, not raised.
    """
    level = config.noise_levels[level_index]
    rng = _trial_rng(config.seed, level_index, trial)
    rig = default_rig(config.rig)

    try:
        inst = generate_instance(rig, config.motion, rng, n_planes=config.correspondences)
        inst = apply_noise(inst, config.noise_at(level), rng)
        report = solver.solve(list(inst.correspondences), inst.rig, inst.imu_i, inst.imu_j)
    except RelPoseError as e:
        logger.warning(f"Trial {trial} at {config.noise_kind}={level} failed: {e}")
        return TrialStats(config.noise_kind, level, trial, math.nan, math.nan, math.nan, None, "failed")

    truth = inst.truth.relative
    status = "degenerate" if report.degenerate_translation else "fallback" if report.fallback else "ok"
    eps_t = math.nan if report.degenerate_translation else eps_translation(truth.t, report.relative.t)
    try:
        eps_tdir = eps_direction(truth.t, report.relative.t)
    except ValidationError:
        eps_tdir = math.nan
    return TrialStats(
        noise_kind=config.noise_kind,
        noise_level=level,
        trial=trial,
        eps_r_deg=eps_rotation(truth.R, report.relative.R),
        eps_t=eps_t,
        eps_tdir_deg=eps_tdir,
        solve_ms=report.wall_time_ms if config.timing else None,
        status=status,
    )


def run_bench(config: BenchConfig, threads: int = BENCH_THREADS) -> BenchReport:
    """
    Run every trial of every noise level.

    Each trial draws from its own generator seeded by (seed, level index,
    trial), so results do not depend on thread scheduling.

    Args:
        config: Sweep definition
        threads: Worker thread cap

    Returns:
        BenchReport with trials ordered by level, then trial index
    """
    solver = RelativePoseSolver(mode=config.solver_mode)
    jobs = [(li, trial) for li in range(len(config.noise_levels)) for trial in range(config.trials)]
    logger.info(
        f"Running {len(jobs)} trials ({config.motion} motion, {config.noise_kind} levels "
        f"{list(config.noise_levels)}) on {threads} thread(s)"
    )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            trials = list(executor.map(lambda job: run_trial(config, solver, *job), jobs))
    else:
        trials = [run_trial(config, solver, li, trial) for li, trial in jobs]

    report = BenchReport(config=config, trials=trials)
    for level in config.noise_levels:
        stats = report.summary(level)
        logger.info(
            f"{config.noise_kind}={level}: mean eps_r={stats['mean_eps_r_deg']:.6f} deg, "
            f"mean eps_tdir={stats['mean_eps_tdir_deg']:.6f} deg, failures={stats['failure_rate']:.3f}"
        )
    return report
