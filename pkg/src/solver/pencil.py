"""Polynomial pencil B(s) and its companion-matrix eigenvalues."""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg
from scipy.linalg import lapack

from ..utils.config import B0_CONDITION_LIMIT, DEFLATION_TOL, MIN_EIGENVALUE_MAGNITUDE, REALNESS_TOL
from ..utils.exceptions import IllConditionedError, StructuralError
from .char_system import CharSystem

logger = logging.getLogger(__name__)

PENCIL_SIZE = 7
EXPECTED_COMPANION_SIZE = {"full": 88, "linearized": 40}


@dataclass(frozen=True)
class PencilB:
    """Coefficient matrices B_0..B_D of the 7x7 pencil, shape (D + 1, 7, 7)."""

    coeffs: np.ndarray
    mode: str

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def evaluate(self, s: float) -> np.ndarray:
        powers = s ** np.arange(self.degree + 1)
        return np.tensordot(powers, self.coeffs, axes=1)


@dataclass
class CandidateSet:
    """Real candidate parameters with their provenance ("companion", "injected" or "grid")."""

    values: list[float] = field(default_factory=list)
    sources: list[str] = field(default_factory=list)
    companion_size: int | None = None

    def add(self, value: float, source: str) -> None:
        if np.isfinite(value):
            self.values.append(float(value))
            self.sources.append(source)

    def __len__(self) -> int:
        return len(self.values)


def build_pencil(cs: CharSystem) -> PencilB:
    """
    Arrange g_i and w_i into the 7x7 polynomial matrix acting on [beta^6, ..., beta^0].

    Rows 0-2 are shifted copies of [1, g_1, g_2, g_3, g_4] (the characteristic
    polynomial times beta^2, beta, 1); rows 3-6 are shifted copies of
    [w_1, w_2, w_3, w_4] (the stationarity condition times beta^3 .. 1).
    """
    D = cs.degree
    poly = np.zeros((PENCIL_SIZE, PENCIL_SIZE, D + 1))
    for r in range(3):
        poly[r, 2 - r, 0] = 1.0
        for i, gi in enumerate(cs.g):
            poly[r, 3 - r + i, : gi.shape[0]] = gi
    for q in range(4):
        for i, wi in enumerate(cs.w):
            poly[3 + q, 3 - q + i, : wi.shape[0]] = wi
    return PencilB(coeffs=np.moveaxis(poly, -1, 0), mode=cs.mode)


def equilibrate(pb: PencilB) -> PencilB:
    """
    Scale every B_k as D_r B_k D_c with the power-of-two factors that equilibrate B_0.

    The columns of B_0 mix 1, g_i and w_i terms many orders of magnitude
    apart; constant diagonal scaling only multiplies det B(s) by a constant,
    so the roots in s are unchanged.

    Raises:
        IllConditionedError: If B_0 has an all-zero row or column
    """
    r, c, _, _, _, info = lapack.dgeequb(pb.coeffs[0])
    if info != 0:
        raise IllConditionedError(f"B0 cannot be equilibrated (LAPACK info {info})")
    return PencilB(coeffs=pb.coeffs * r[:, None] * c[None, :], mode=pb.mode)


def companion_matrix(pb: PencilB) -> np.ndarray:
    """
    Block companion matrix in z = 1/s, built from the equilibrated pencil.

    z^D B(1/z) = sum_k z^(D-k) B_k, so with B_0 as the leading coefficient the
    last block row is [-B_0^-1 B_D, ..., -B_0^-1 B_1].

    Raises:
        IllConditionedError: If B_0 is singular or its equilibrated condition number exceeds the limit
    """
    pb = equilibrate(pb)
    B0 = pb.coeffs[0]
    cond = np.linalg.cond(B0)
    if not np.isfinite(cond) or cond > B0_CONDITION_LIMIT:
        raise IllConditionedError(f"B0 condition number {cond:.3e} exceeds {B0_CONDITION_LIMIT:.0e}")

    n = PENCIL_SIZE
    D = pb.degree
    lu = linalg.lu_factor(B0)
    G = np.zeros((n * D, n * D))
    G[: n * (D - 1), n:] = np.eye(n * (D - 1))
    for j in range(D):
        G[n * (D - 1) :, n * j : n * (j + 1)] = -linalg.lu_solve(lu, pb.coeffs[D - j])
    return G


def deflate(G: np.ndarray, tol: float = DEFLATION_TOL) -> np.ndarray:
    """
    Remove all-zero columns and their rows until none remain.

    Structural zeros of the pencil stay exactly zero through the solve with
    B_0, so the default tolerance is 0.

    Each removal can expose a new zero column, since the identity entry above
    it disappears with the removed row.
    """
    keep = np.arange(G.shape[0])
    while True:
        sub = G[np.ix_(keep, keep)]
        zero = np.max(np.abs(sub), axis=0) <= tol
        if not np.any(zero):
            return sub
        keep = keep[~zero]


def schur_eigenvalues(G: np.ndarray) -> np.ndarray:
    """Eigenvalues read from the 1x1 and 2x2 diagonal blocks of the real Schur form of the balanced matrix."""
    balanced, _ = linalg.matrix_balance(G)
    T = linalg.schur(balanced, output="real")[0]
    n = T.shape[0]
    eigs: list[complex] = []
    j = 0
    while j < n:
        if j + 1 < n and T[j + 1, j] != 0.0:
            eigs.extend(np.linalg.eigvals(T[j : j + 2, j : j + 2]))
            j += 2
        else:
            eigs.append(complex(T[j, j]))
            j += 1
    return np.array(eigs, dtype=complex)


def companion_eigen(pb: PencilB) -> CandidateSet:
    """
    Real candidate parameters from the deflated companion matrix.

    Keeps eigenvalues z with |Im z| <= 1e-6 (1 + |Re z|) and |Re z| >= 1e-10,
    maps them to s = 1/Re z, and always adds s = 0.

    Raises:
        IllConditionedError: If B_0 is singular or ill-conditioned
        StructuralError: If deflation does not reach the expected size
    """
    G = deflate(companion_matrix(pb))
    expected = EXPECTED_COMPANION_SIZE[pb.mode]
    if G.shape[0] != expected:
        raise StructuralError(f"Deflated companion matrix is {G.shape[0]}x{G.shape[0]}, expected {expected}")

    candidates = CandidateSet(companion_size=G.shape[0])
    seen_pairs: set[complex] = set()
    for z in schur_eigenvalues(G):
        if abs(z.imag) > REALNESS_TOL * (1.0 + abs(z.real)) or abs(z.real) < MIN_EIGENVALUE_MAGNITUDE:
            continue
        if z.imag != 0.0:
            # one candidate per conjugate pair
            key = complex(z.real, abs(z.imag))
            if key in seen_pairs:
                continue
            seen_pairs.add(key)
        candidates.add(1.0 / z.real, "companion")
    candidates.add(0.0, "injected")

    logger.debug(f"Companion {G.shape[0]}x{G.shape[0]} gave {len(candidates) - 1} real candidates")
    return candidates
