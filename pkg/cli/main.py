"""Main CLI entry point."""

import argparse
import logging
import sys
from pathlib import Path

from src.utils.config import LOG_FORMAT, LOG_LEVEL
from src.utils.exceptions import DegenerateTranslationError, RelPoseError, SolverError, ValidationError
from src.utils.file_handlers import write_output

from . import bench_cli, pose_cli

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_DEGENERATE = 2
EXIT_SOLVER = 3


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports bad flags as validation errors (exit code 1)."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ValidationError(message)


def setup_parser() -> argparse.ArgumentParser:
    """Set up main argument parser."""
    parser = _Parser(
        prog="genrelpose",
        description="Globally optimal relative pose for multi-camera rigs with known vertical direction",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="Enable verbose logging",
    )

    subparsers = parser.add_subparsers(dest="command", help="Commands")
    subparsers.required = True

    # solve
    solve_parser = subparsers.add_parser("solve", help="Solve a problem file")
    solve_parser.add_argument("problem", type=Path, help="Path to problem JSON")
    solve_parser.add_argument(
        "--mode",
        choices=["full", "linear", "linearized"],
        default="full",
        help="Solver mode (linear = small-angle solver)",
    )
    solve_parser.add_argument("--out", type=Path, help="Output file path (default: stdout)")

    # synth
    synth_parser = subparsers.add_parser("synth", help="Generate a synthetic problem and its ground truth")
    synth_parser.add_argument(
        "--mode",
        choices=["random", "forward", "planar", "sideways"],
        default="random",
        help="Motion template",
    )
    synth_parser.add_argument("--noise-pixel", type=float, default=0.0, help="Pixel noise sigma (px)")
    synth_parser.add_argument("--noise-pitch", type=float, default=0.0, help="Pitch noise sigma (deg)")
    synth_parser.add_argument("--noise-roll", type=float, default=0.0, help="Roll noise sigma (deg)")
    synth_parser.add_argument("--noise-extrinsic-rot", type=float, default=0.0, help="Extrinsic rotation perturbation (rad)")
    synth_parser.add_argument("--noise-extrinsic-trans", type=float, default=0.0, help="Extrinsic translation perturbation (m)")
    synth_parser.add_argument("--planes", type=int, default=100, help="Number of planes (correspondences)")
    synth_parser.add_argument("--pairing", choices=["intra", "cross"], default="intra", help="Camera pairing")
    synth_parser.add_argument("--seed", type=int, default=0, help="Random seed")
    synth_parser.add_argument("--out", type=Path, required=True, help="Problem JSON output path")

    # bench
    bench_parser = subparsers.add_parser("bench", help="Run a noise-sweep benchmark")
    bench_parser.add_argument("--config", type=Path, required=True, help="Bench config JSON")
    bench_parser.add_argument("--out", type=Path, help="CSV output path (default: stdout)")
    bench_parser.add_argument("--cdf-out", type=Path, help="Write CDF samples as CSV")
    bench_parser.add_argument("--threads", type=int, help="Worker threads (default: GENRELPOSE_THREADS)")

    # traj
    traj_parser = subparsers.add_parser("traj", help="Absolute trajectory error of a pose file")
    traj_parser.add_argument("--poses", type=Path, required=True, help="Estimated poses (12 numbers per line)")
    traj_parser.add_argument("--gt", type=Path, required=True, help="Ground-truth poses (12 numbers per line)")
    traj_parser.add_argument(
        "--relative",
        action="store_true",
        help="Treat both files as relative motions and accumulate them first",
    )
    traj_parser.add_argument("--out", type=Path, help="Per-frame error CSV output path (default: stdout)")

    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT, stream=sys.stderr, force=True)
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


def _error(message: str, code: int) -> int:
    print(f"error: {' '.join(str(message).split())}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    """Main CLI entry point."""
    parser = setup_parser()
    try:
        args = parser.parse_args(argv)
    except ValidationError as e:
        return _error(str(e), EXIT_INVALID)

    _configure_logging(args.verbose)

    try:
        match args.command:
            case "solve":
                content = pose_cli.handle_solve(args)
            case "traj":
                content = pose_cli.handle_traj(args)
            case "synth" | "bench":
                content = bench_cli.handle_bench_command(args)
            case _:
                parser.print_help()
                return EXIT_INVALID

        if content:
            write_output(content, getattr(args, "out", None))
        return EXIT_OK

    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        return 130
    except DegenerateTranslationError as e:
        return _error(str(e), EXIT_DEGENERATE)
    except SolverError as e:
        return _error(str(e), EXIT_SOLVER)
    except RelPoseError as e:
        return _error(str(e), EXIT_INVALID)
    except Exception as e:
        if args.verbose:
            logger.exception("Unexpected failure")
        return _error(f"{type(e).__name__}: {e}", EXIT_INVALID)


if __name__ == "__main__":
    sys.exit(main())
