"""Principal-component weights and the first-component index."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import IndicatorMatrix
from ..errors import DegenerateInputError, UsageError
from ..numerics import covariance_matrix, symmetric_eigendecomposition
from .core import DEGENERATE_TOL, Method, WeightVector, require_scaled

LOADING_CONVENTION = "absolute"


@dataclass(frozen=True)
class PcaDecomposition:
    """Eigen-structure of the sample covariance of scaled indicators.

    ``loadings[j, i]`` is the coefficient of indicator ``i`` in component ``j``.
    """

    eigenvalues: np.ndarray
    loadings: np.ndarray
    column_means: np.ndarray
    indicator_names: tuple[str, ...]

    @property
    def n_components(self) -> int:
        return self.eigenvalues.size

    def explained_variance_ratio(self) -> np.ndarray:
        total = self.eigenvalues.sum()
        return self.eigenvalues / total if total > 0 else np.zeros_like(self.eigenvalues)


def pca_decompose(m: IndicatorMatrix) -> PcaDecomposition:
    require_scaled(m, "PCA")
    if m.n_systems < 2:
        raise UsageError("PCA needs at least 2 systems")
    eig = symmetric_eigendecomposition(covariance_matrix(m.values))
    return PcaDecomposition(
        eigenvalues=eig.eigenvalues,
        loadings=eig.eigenvectors.T.copy(),
        column_means=m.values.mean(axis=0),
        indicator_names=m.indicator_names,
    )


def pca_weights(d: PcaDecomposition, components: int) -> WeightVector:
    """Eigenvalue-weighted absolute loadings over the leading ``components``.

    w_i = sum_j |a_ji| l_j / sum_j sum_l |a_jl| l_j. Absolute loadings keep
    every weight non-negative; signed loadings can cancel.
    """
    if not 1 <= components <= d.n_components:
        raise UsageError(f"components must be between 1 and {d.n_components}, got {components}")
    lam = d.eigenvalues[:components]
    if np.all(lam <= DEGENERATE_TOL):
        raise DegenerateInputError("PCA: retained components explain no variance")
    # tiny negative eigenvalues are rounding noise on a PSD matrix
    scores = np.abs(d.loadings[:components]).T @ np.maximum(lam, 0.0)
    return WeightVector.normalized(scores, Method.PCA, d.indicator_names)


def first_pc_index(d: PcaDecomposition, m: IndicatorMatrix) -> np.ndarray:
    """Scores on the first component, min-max scaled to [0, 1]."""
    require_scaled(m, "first_pc_index")
    if m.n_indicators != d.loadings.shape[1]:
        raise UsageError("matrix and decomposition disagree on the number of indicators")
    if d.eigenvalues[0] <= DEGENERATE_TOL:
        raise DegenerateInputError("PCA: first eigenvalue is zero")
    scores = (m.values - d.column_means) @ d.loadings[0]
    lo, hi = scores.min(), scores.max()
    if hi - lo <= 0.0:
        raise DegenerateInputError("PCA: first-component scores are constant")
    return (scores - lo) / (hi - lo)
