"""Candidate scoring, local polishing and the brute-force grid oracle."""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ..constraints.cost import CostPoly, eval_cost, eval_cost_derivative, min_eigen, min_eigenvalues
from ..utils.config import (
    DEGENERATE_TRANSLATION_TOL,
    GRID_HALF_RANGE_DEG,
    GRID_REFINE_TOL,
    GRID_STEP_DEG,
    POLISH_INITIAL_STEP,
    POLISH_RADIUS,
    POLISH_XTOL,
)
from ..utils.exceptions import ValidationError
from .pencil import CandidateSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScoredCandidate:
    s: float
    lambda_min: float
    source: str
    polished: bool = False


@dataclass(frozen=True)
class Selection:
    """
    Selected parameter with its cost and translation.

    ``t_tilde`` is metric unless ``degenerate`` is set, in which case it is a
    unit direction only.
    """

    s: float
    lambda_min: float
    t_hat: np.ndarray
    t_tilde: np.ndarray
    degenerate: bool
    polished: bool
    scored: tuple[ScoredCandidate, ...]


def parameter_from_angle(theta: float | np.ndarray, mode: str) -> float | np.ndarray:
    """Cost parameter for a yaw angle: Cayley s in full mode, the angle itself when linearized."""
    if mode == "full":
        return np.tan(np.asarray(theta) / 2.0)
    return theta


def angle_from_parameter(s: float, mode: str) -> float:
    if mode == "full":
        return 2.0 * math.atan(s)
    return s


def stationarity(cp: CostPoly, s: float) -> float:
    """d lambda_min / ds = v^T (dC/ds) v for the eigenvector v of lambda_min."""
    _, v = min_eigen(cp, s)
    return float(v @ eval_cost_derivative(cp, s) @ v)


def polish_candidate(cp: CostPoly, s0: float) -> float | None:
    """
    Stationary point of lambda_min next to ``s0``, or None if none is bracketed.

    Steps out from ``s0`` (downhill side first) until the slope changes sign,
    then solves for the root with Brent's method.
    """
    f0 = stationarity(cp, s0)
    if f0 == 0.0:
        return s0
    downhill = -1.0 if f0 > 0.0 else 1.0
    scale = 1.0 + abs(s0)
    h = POLISH_INITIAL_STEP * scale
    while h <= POLISH_RADIUS * scale:
        for side in (downhill, -downhill):
            s1 = s0 + side * h
            f1 = stationarity(cp, s1)
            if f1 == 0.0:
                return s1
            if (f1 > 0.0) != (f0 > 0.0):
                lo, hi = sorted((s0, s1))
                return float(optimize.brentq(lambda s: stationarity(cp, s), lo, hi, xtol=POLISH_XTOL))
        h *= 4.0
    logger.debug(f"No stationary point bracketed near s={s0:.6g}")
    return None


def select_solution(candidates: CandidateSet, cp: CostPoly, polish: bool = True) -> Selection:
    """
    Pick the candidate with the globally smallest lambda_min(C(s)).

    With ``polish`` set, every candidate is first moved to the stationary
    point next to it and scored there. Ties are broken by the smallest |s|.
    The translation comes from the eigenvector of lambda_min scaled so that
    its fourth entry is 1.

    Args:
        candidates: Real candidate parameters
        cp: Cost polynomial the candidates were derived from
        polish: Refine each candidate on the stationarity condition before scoring

    Returns:
        Selection with the winning parameter, cost and translation

    Raises:
        ValidationError: If there are no candidates
    """
    if len(candidates) == 0:
        raise ValidationError("No candidates to select from")

    scored = []
    for s, source in zip(candidates.values, candidates.sources, strict=True):
        root = polish_candidate(cp, s) if polish else None
        if root is not None:
            scored.append(ScoredCandidate(root, min_eigen(cp, root)[0], source, polished=True))
        else:
            scored.append(ScoredCandidate(s, min_eigen(cp, s)[0], source))
    best = min(scored, key=lambda c: (c.lambda_min, abs(c.s)))

    s = best.s
    lam, v = min_eigen(cp, s)
    degenerate = bool(abs(v[3]) < DEGENERATE_TRANSLATION_TOL)
    if degenerate:
        logger.warning(f"Translation scale is unobservable at s={s:.6g}; returning a direction only")
        t_tilde = v[:3] / np.linalg.norm(v[:3])
        t_hat = np.append(t_tilde, 0.0)
    else:
        t_hat = v / v[3]
        t_tilde = t_hat[:3]

    return Selection(
        s=s,
        lambda_min=lam,
        t_hat=t_hat,
        t_tilde=t_tilde,
        degenerate=degenerate,
        polished=best.polished,
        scored=tuple(scored),
    )


@dataclass(frozen=True)
class GridResult:
    s: float
    lambda_min: float


def grid_oracle(
    cp: CostPoly,
    half_range_deg: float = GRID_HALF_RANGE_DEG,
    coarse_deg: float = GRID_STEP_DEG,
    refine_tol: float = GRID_REFINE_TOL,
) -> GridResult:
    """
    Global minimizer of lambda_min over yaw by exhaustive search.

    Evaluates lambda_min on a uniform yaw grid, then refines inside the cells
    around the best sample with bounded Brent minimization.

    Returns:
        GridResult with the cost parameter (Cayley s, or the angle when
        linearized) and its lambda_min
    """
    thetas = np.radians(np.arange(-half_range_deg, half_range_deg + 0.5 * coarse_deg, coarse_deg))
    values = min_eigenvalues(cp, parameter_from_angle(thetas, cp.mode))
    best = int(np.argmin(values))

    lo = thetas[max(best - 1, 0)]
    hi = thetas[min(best + 1, thetas.shape[0] - 1)]
    result = optimize.minimize_scalar(
        lambda th: min_eigen(cp, float(parameter_from_angle(th, cp.mode)))[0],
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": refine_tol},
    )
    theta = float(result.x) if result.fun <= values[best] else float(thetas[best])
    s = float(parameter_from_angle(theta, cp.mode))
    lam = min_eigen(cp, s)[0]

    # Near a zero minimum lambda is flat to roundoff; its derivative still changes sign cleanly
    def slope(th: float) -> float:
        return stationarity(cp, float(parameter_from_angle(th, cp.mode)))

    if lo < hi and slope(lo) < 0.0 < slope(hi):
        root = optimize.brentq(slope, lo, hi, xtol=1e-15)
        s_root = float(parameter_from_angle(root, cp.mode))
        lam_root = min_eigen(cp, s_root)[0]
        if lam_root <= lam + 1e-13 * float(np.trace(eval_cost(cp, s))):
            theta, s, lam = root, s_root, lam_root
    logger.debug(f"Grid oracle minimum at theta={math.degrees(theta):.8f} deg, lambda={lam:.3e}")
    return GridResult(s=s, lambda_min=lam)
