"""Synthetic data and benchmark command handlers for CLI."""

import logging
from argparse import Namespace

import numpy as np

from src.bench.noise import NoiseSpec, apply_noise
from src.bench.runner import BenchConfig, run_bench
from src.bench.synthetic import default_rig, generate_instance
from src.utils.config import BENCH_THREADS
from src.utils.exceptions import RelPoseError, ValidationError
from src.utils.file_handlers import (
    Problem,
    read_json_file,
    save_problem,
    truth_path,
    truth_to_dict,
    write_json_file,
    write_output,
)

logger = logging.getLogger(__name__)


def handle_bench_command(args: Namespace) -> str | None:
    """
    Handle synthetic-data commands.

    Args:
        args: Parsed command arguments

    Returns:
        Command output, or None when everything was written to files
    """
    command = args.command

    match command:
        case "synth":
            return handle_synth(args)
        case "bench":
            return handle_bench(args)
        case _:
            raise ValidationError(f"Unknown command: {command}")


def handle_synth(args: Namespace) -> None:
    """Handle synth command: problem file plus ``<stem>.truth.json``."""
    try:
        noise = NoiseSpec(
            pixel_sigma=args.noise_pixel,
            pitch_sigma=args.noise_pitch,
            roll_sigma=args.noise_roll,
            extrinsic_rot_perturb=args.noise_extrinsic_rot,
            extrinsic_trans_perturb=args.noise_extrinsic_trans,
        )
        rng = np.random.default_rng(args.seed)
        inst = generate_instance(default_rig(), args.mode, rng, n_planes=args.planes, pairing=args.pairing)
        inst = apply_noise(inst, noise, rng)
    except RelPoseError as e:
        logger.error(f"Synthetic generation failed: {e}")
        raise

    problem = Problem.from_attitudes(inst.rig, inst.imu_i, inst.imu_j, inst.correspondences)
    save_problem(problem, args.out)
    sidecar = truth_path(args.out)
    write_json_file(truth_to_dict(inst.truth), sidecar)
    logger.info(f"Wrote {args.out} and {sidecar}")
    return None


def handle_bench(args: Namespace) -> str:
    """Handle bench command: per-trial CSV with '#' summary lines."""
    try:
        data = read_json_file(args.config, kind="bench config")
        if not isinstance(data, dict):
            raise ValidationError("bench config: expected an object")
        config = BenchConfig.from_dict(data)
        threads = args.threads if args.threads is not None else BENCH_THREADS
        if threads < 1:
            raise ValidationError(f"--threads must be positive, got {threads}")
        report = run_bench(config, threads=threads)
    except RelPoseError as e:
        logger.error(f"Benchmark failed: {e}")
        raise

    if args.cdf_out:
        write_output(report.cdf_csv(), args.cdf_out)
    return report.to_csv()
