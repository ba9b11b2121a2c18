"""Synthetic scenes, noise models, benchmark sweeps and trajectory evaluation."""

from .noise import NoiseSpec, apply_noise
from .runner import BenchConfig, BenchReport, TrialStats, empirical_cdf, run_bench
from .synthetic import (
    GroundTruth,
    MotionMode,
    RigSpec,
    SyntheticInstance,
    default_rig,
    generate_instance,
    sample_motion,
)
from .trajectory import accumulate_trajectory, ate, simulate_trajectory

__all__ = [
    "BenchConfig",
    "BenchReport",
    "GroundTruth",
    "MotionMode",
    "NoiseSpec",
    "RigSpec",
    "SyntheticInstance",
    "TrialStats",
    "accumulate_trajectory",
    "apply_noise",
    "ate",
    "default_rig",
    "empirical_cdf",
    "generate_instance",
    "run_bench",
    "sample_motion",
    "simulate_trajectory",
]
