"""
Dense polynomial matrices.

A polynomial matrix is an array of shape (rows, cols, degree + 1) holding
coefficients in ascending powers; a scalar polynomial is a 1-D array.
"""

import numpy as np
from numpy.polynomial import polynomial as P


def polymat_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product with coefficient convolution; degrees add."""
    deg_a = A.shape[2] - 1
    deg_b = B.shape[2] - 1
    out = np.zeros((A.shape[0], B.shape[1], deg_a + deg_b + 1))
    for p in range(deg_a + 1):
        for q in range(deg_b + 1):
            out[:, :, p + q] += A[:, :, p] @ B[:, :, q]
    return out


def polymat_trace(A: np.ndarray) -> np.ndarray:
    return np.trace(A, axis1=0, axis2=1)


def polymat_det(A: np.ndarray) -> np.ndarray:
    """
    Determinant of a square polynomial matrix by cofactor expansion along the first row.

    Returns:
        Coefficients of length n * degree + 1
    """
    n = A.shape[0]
    length = n * (A.shape[2] - 1) + 1
    return pad(_cofactor_det(A), length)


def _cofactor_det(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    if n == 1:
        return A[0, 0].copy()
    if n == 2:
        return P.polysub(P.polymul(A[0, 0], A[1, 1]), P.polymul(A[0, 1], A[1, 0]))

    total = np.zeros(1)
    for col in range(n):
        if not np.any(A[0, col]):
            continue
        minor = np.delete(np.delete(A, 0, axis=0), col, axis=1)
        term = P.polymul(A[0, col], _cofactor_det(minor))
        total = P.polyadd(total, term) if col % 2 == 0 else P.polysub(total, term)
    return total


def pad(c: np.ndarray, length: int) -> np.ndarray:
    """Zero-pad or cut ``c`` to exactly ``length`` coefficients (cutting assumes zeros)."""
    out = np.zeros(length)
    c = np.asarray(c, dtype=float)
    n = min(length, c.shape[0])
    out[:n] = c[:n]
    return out


def truncate(c: np.ndarray, degree: int, rel_tol: float) -> np.ndarray | None:
    """
    Drop coefficients above ``degree`` if they are negligible.

    Returns:
        The truncated coefficients, or None when a dropped coefficient exceeds
        ``rel_tol`` times the largest coefficient magnitude
    """
    c = np.asarray(c, dtype=float)
    if c.shape[0] <= degree + 1:
        return pad(c, degree + 1)
    peak = float(np.max(np.abs(c)))
    tail = float(np.max(np.abs(c[degree + 1 :])))
    if peak > 0.0 and tail > rel_tol * peak:
        return None
    return c[: degree + 1].copy()
