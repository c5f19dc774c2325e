"""Small dense linear algebra and descriptive statistics.

Matrices are plain 2-D ``float64`` numpy arrays. Everything here is a pure
function of its arguments; inputs are never modified.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DecompositionError, IndexForgeWarning, NumericError, UsageError

SYMMETRY_TOL = 1e-12
PIVOT_TOL = 1e-12
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def as_matrix(values) -> np.ndarray:
    """Coerce to a finite 2-D float array (copy)."""
    m = np.array(values, dtype=float)
    if m.ndim != 2:
        raise UsageError(f"expected a 2-D matrix, got {m.ndim} dimension(s)")
    if not np.all(np.isfinite(m)):
        raise UsageError("matrix contains non-finite entries")
    return m


def _require_symmetric(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {m.shape}")
    if m.size and np.max(np.abs(m - m.T)) > SYMMETRY_TOL:
        raise UsageError("matrix is not symmetric")


def column_stats(m, col: int) -> tuple[float, float, float]:
    """Mean, sample variance and standard deviation of one column.

    A single-row matrix has variance 0 so callers can decide for themselves
    whether that is degenerate.
    """
    m = as_matrix(m)
    if not 0 <= col < m.shape[1]:
        raise UsageError(f"column index {col} out of range for {m.shape[1]} columns")
    if m.shape[0] < 1:
        raise UsageError("column_stats needs at least one row")
    x = m[:, col]
    mean = float(np.mean(x))
    variance = float(np.var(x, ddof=1)) if x.size >= 2 else 0.0
    return mean, variance, math.sqrt(variance)


def constant_columns(m: np.ndarray) -> list[int]:
    return [j for j in range(m.shape[1]) if np.all(m[:, j] == m[0, j])]


def correlation_and_constants(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Silent core of :func:`pearson_correlation_matrix`.

    Columns whose centred norm underflows to zero count as constant.
    """
    cols = m.shape[1]
    centered = m - m.mean(axis=0)
    norms = np.sqrt(np.sum(centered * centered, axis=0))
    constant = sorted(set(constant_columns(m)) | set(np.flatnonzero(norms == 0.0).tolist()))
    skip = set(constant)
    r = np.zeros((cols, cols))
    for i in range(cols):
        if i in skip:
            continue
        r[i, i] = 1.0
        for j in range(i + 1, cols):
            if j in skip:
                continue
            denom = norms[i] * norms[j]
            value = float(centered[:, i] @ centered[:, j]) / denom if denom > 0.0 else 0.0
            r[i, j] = r[j, i] = min(1.0, max(-1.0, value))
    return r, constant


def pearson_correlation_matrix(m) -> np.ndarray:
    """Pearson correlations between columns.

    Any pair involving a constant column (the diagonal entry included) is 0,
    with an :class:`IndexForgeWarning`.
    """
    m = as_matrix(m)
    if m.shape[0] < 2:
        raise UsageError("correlation needs at least 2 rows")
    r, constant = correlation_and_constants(m)
    if constant:
        warnings.warn(
            f"zero-variance column(s) {constant} get correlation 0",
            IndexForgeWarning,
            stacklevel=2,
        )
    return r


def covariance_matrix(m) -> np.ndarray:
    """Sample covariance of the columns, exactly symmetric."""
    m = as_matrix(m)
    if m.shape[0] < 2:
        raise UsageError("covariance needs at least 2 rows")
    centered = m - m.mean(axis=0)
    cov = centered.T @ centered / (m.shape[0] - 1)
    return np.triu(cov) + np.triu(cov, 1).T


def cholesky(m) -> np.ndarray:
    """Lower-triangular ``L`` with ``L @ L.T == m`` (Cholesky-Banachiewicz)."""
    m = as_matrix(m)
    _require_symmetric(m)
    n = m.shape[0]
    L = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            s = m[i, j] - float(L[i, :j] @ L[j, :j])
            if i == j:
                if s <= PIVOT_TOL:
                    raise DecompositionError(
                        f"matrix is not positive definite (pivot {s:.3g} at {i})", residual=s
                    )
                L[i, i] = math.sqrt(s)
            else:
                L[i, j] = s / L[j, j]
    return L


@dataclass(frozen=True)
class EigenResult:
    """Eigenpairs sorted by non-increasing eigenvalue.

    ``eigenvectors[:, j]`` is the unit eigenvector for ``eigenvalues[j]``,
    signed so that its largest-magnitude entry is non-negative.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _fix_sign(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def symmetric_eigendecomposition(m) -> EigenResult:
    """Eigen-decompose a symmetric matrix with cyclic Jacobi rotations.

    Sweeps stop once every off-diagonal entry is below ``JACOBI_TOL`` (scaled
    by the largest entry when that exceeds 1).
    """
    a = as_matrix(m)
    _require_symmetric(a)
    n = a.shape[0]
    a = (a + a.T) / 2.0
    v = np.eye(n)
    tol = JACOBI_TOL * max(1.0, float(np.max(np.abs(a))) if n else 1.0)

    def off_diagonal() -> float:
        if n < 2:
            return 0.0
        return float(np.max(np.abs(a[~np.eye(n, dtype=bool)])))

    sweeps = 0
    while off_diagonal() >= tol:
        if sweeps == JACOBI_MAX_SWEEPS:
            residual = off_diagonal()
            raise NumericError(
                f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (off-diagonal {residual:.3g})",
                residual=residual,
            )
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    vectors = np.column_stack([_fix_sign(v[:, j]) for j in order]) if n else v
    return EigenResult(eigenvalues=values[order], eigenvectors=vectors)


def quantiles(sample, probs) -> np.ndarray:
    """Quantiles by linear interpolation at position ``p * (n - 1)``."""
    x = np.asarray(sample, dtype=float).ravel()
    p = np.atleast_1d(np.asarray(probs, dtype=float))
    if x.size == 0:
        raise UsageError("quantiles of an empty sample")
    if np.any((p < 0) | (p > 1)):
        raise UsageError("probabilities must lie in [0, 1]")
    return np.quantile(x, p, method="linear")
