"""End-to-end solver: correspondences → cost → companion candidates → pose."""

import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from ..constraints.cost import CostPoly, stack_cost
from ..constraints.rows import SolverMode, build_rows, check_mode
from ..geometry.pose import AlignedPose, RelativePose, unaligned_pose
from ..geometry.rig import AffineCorrespondence, ImuAttitude, RigExtrinsics
from ..utils.exceptions import IllConditionedError, SolverError, StructuralError, ValidationError
from .char_system import char_polys
from .pencil import CandidateSet, build_pencil, companion_eigen
from .selection import ScoredCandidate, Selection, angle_from_parameter, grid_oracle, select_solution

logger = logging.getLogger(__name__)

MIN_CORRESPONDENCES = 2


@dataclass(frozen=True)
class SolveReport:
    """
    Result of one relative pose solve.

    Candidate values are reported as Cayley parameters in both modes.
    """

    aligned: AlignedPose
    relative: RelativePose
    lambda_min: float
    candidates: tuple[ScoredCandidate, ...]
    companion_size: int | None
    mode: SolverMode
    fallback: bool
    degenerate_translation: bool
    wall_time_ms: float

    @property
    def theta_y_deg(self) -> float:
        return math.degrees(self.aligned.theta_y)


class RelativePoseSolver:
    """Globally optimal yaw and translation solver for a rig with known vertical."""

    def __init__(self, mode: SolverMode = "full", polish: bool = True) -> None:
        """
        Initialize the solver.

        Args:
            mode: "full" for the exact Cayley cost, "linearized" for the small-angle cost
            polish: Refine every companion candidate on the stationarity condition
        """
        self.mode = check_mode(mode)
        self.polish = polish
        logger.info(f"Initialized relative pose solver ({self.mode})")

    def build_cost(
        self,
        corrs: list[AffineCorrespondence],
        rig: RigExtrinsics,
        imu_i: ImuAttitude,
        imu_j: ImuAttitude,
    ) -> CostPoly:
        """Rows for every correspondence stacked into the cost polynomial."""
        if len(corrs) < MIN_CORRESPONDENCES:
            raise ValidationError(
                f"need at least {MIN_CORRESPONDENCES} affine correspondences, got {len(corrs)}"
            )
        return stack_cost(build_rows(corrs, rig, imu_i, imu_j, self.mode))

    def candidates(self, cp: CostPoly) -> CandidateSet:
        """
        Companion-matrix candidates for ``cp``.

        The cost is rescaled to unit peak coefficient first; a constant factor
        changes neither the minimizers nor the eigenvectors.
        """
        cs = char_polys(cp.normalized())
        return companion_eigen(build_pencil(cs))

    def solve(
        self,
        corrs: list[AffineCorrespondence],
        rig: RigExtrinsics,
        imu_i: ImuAttitude,
        imu_j: ImuAttitude,
    ) -> SolveReport:
        """
        Estimate the relative pose between two rig views.

        Args:
            corrs: Affine correspondences (at least two)
            rig: Rig extrinsics
            imu_i: Attitude at time i
            imu_j: Attitude at time j

        Returns:
            SolveReport with the aligned and body-frame poses

        Raises:
            ValidationError: If inputs are invalid
            SolverError: If no pose can be computed
        """
        start = time.perf_counter()
        cp = self.build_cost(corrs, rig, imu_i, imu_j)
        logger.debug(f"Cost built from {cp.n_rows} rows")

        fallback = False
        try:
            candidates = self.candidates(cp)
            selection = select_solution(candidates, cp, polish=self.polish)
        except (IllConditionedError, StructuralError) as e:
            logger.warning(f"Companion solver unavailable ({e}); using grid search")
            fallback = True
            selection = self._grid_selection(cp)
        except np.linalg.LinAlgError as e:
            logger.error(f"Eigen decomposition failed: {e}")
            raise SolverError(f"Eigen decomposition failed: {e}") from e

        companion_size = None if fallback else candidates.companion_size
        report = self._report(selection, imu_i, imu_j, companion_size, fallback, start)
        logger.info(
            f"Solved ({self.mode}): theta_y={report.theta_y_deg:.6f} deg, "
            f"lambda_min={report.lambda_min:.3e}, candidates={len(report.candidates)}"
        )
        return report

    def _grid_selection(self, cp: CostPoly) -> Selection:
        try:
            result = grid_oracle(cp)
        except np.linalg.LinAlgError as e:
            logger.error(f"Grid search failed: {e}")
            raise SolverError(f"Grid search failed: {e}") from e
        fallback_set = CandidateSet()
        fallback_set.add(result.s, "grid")
        return select_solution(fallback_set, cp, polish=False)

    def _to_cayley(self, param: float) -> float:
        if self.mode == "full":
            return param
        return math.tan(angle_from_parameter(param, self.mode) / 2.0)

    def _report(
        self,
        selection: Selection,
        imu_i: ImuAttitude,
        imu_j: ImuAttitude,
        companion_size: int | None,
        fallback: bool,
        start: float,
    ) -> SolveReport:
        aligned = AlignedPose(s=self._to_cayley(selection.s), t_tilde=selection.t_tilde)
        candidates = tuple(
            ScoredCandidate(self._to_cayley(c.s), c.lambda_min, c.source, c.polished) for c in selection.scored
        )
        return SolveReport(
            aligned=aligned,
            relative=unaligned_pose(aligned, imu_i, imu_j),
            lambda_min=selection.lambda_min,
            candidates=candidates,
            companion_size=companion_size,
            mode=self.mode,
            fallback=fallback,
            degenerate_translation=selection.degenerate,
            wall_time_ms=(time.perf_counter() - start) * 1000.0,
        )


def solve(
    corrs: list[AffineCorrespondence],
    rig: RigExtrinsics,
    imu_i: ImuAttitude,
    imu_j: ImuAttitude,
    mode: SolverMode = "full",
) -> SolveReport:
    """Convenience wrapper around ``RelativePoseSolver(mode).solve``."""
    return RelativePoseSolver(mode=mode).solve(corrs, rig, imu_i, imu_j)
