"""Inverse-variance, entropy and CRITIC weights."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..dataset import IndicatorMatrix
from ..errors import DegenerateInputError, IndexForgeWarning, UsageError
from ..numerics import column_stats, correlation_and_constants
from .core import DEGENERATE_TOL, Method, WeightVector, require_scaled

ENTROPY_EPSILON = 1e-12
# epsilon inside the log keeps a perfectly uniform column a few 1e-12 below H = 1
UNIFORM_TOL = 1e-9


def inverse_variance_weights(m: IndicatorMatrix) -> WeightVector:
    """w_i proportional to 1 / var_i, using sample variances."""
    require_scaled(m, "VAR")
    variances = np.array([column_stats(m.values, j)[1] for j in range(m.n_indicators)])
    for name, v in zip(m.indicator_names, variances):
        if v <= DEGENERATE_TOL:
            raise DegenerateInputError(f"VAR: indicator {name} has zero variance")
    return WeightVector.normalized(1.0 / variances, Method.VAR, m.indicator_names)


@dataclass(frozen=True)
class EntropyStats:
    proportions: np.ndarray
    entropies: np.ndarray
    epsilon: float


def entropy_weights(m: IndicatorMatrix, epsilon: float = ENTROPY_EPSILON):
    """Entropy weights: w_i proportional to 1 - H_i.

    ``H_i = -(1/ln m) * sum_k p_ik ln(p_ik + epsilon)`` with ``p_ik`` the share
    of system k in column i. An all-zero column carries no information and is
    given ``H = 1``.
    """
    require_scaled(m, "ENT")
    if epsilon <= 0:
        raise UsageError("entropy epsilon must be positive")
    rows = m.n_systems
    if rows < 2:
        raise UsageError("ENT needs at least 2 systems")
    x = m.values
    totals = x.sum(axis=0)
    zero = totals <= 0.0
    if np.any(zero):
        names = [m.indicator_names[j] for j in np.flatnonzero(zero)]
        warnings.warn(f"ENT: all-zero indicator(s) {names} get entropy 1", IndexForgeWarning, stacklevel=2)
    p = np.where(zero, 0.0, x / np.where(zero, 1.0, totals))
    h = -(p * np.log(p + epsilon)).sum(axis=0) / math.log(rows)
    h = np.where(zero, 1.0, h)
    divergence = np.maximum(1.0 - h, 0.0)
    if divergence.sum() <= UNIFORM_TOL * divergence.size:
        raise DegenerateInputError("ENT: every indicator is maximally uniform (all entropies are 1)")
    weights = WeightVector.normalized(divergence, Method.ENT, m.indicator_names)
    return weights, EntropyStats(proportions=p, entropies=h, epsilon=epsilon)


@dataclass(frozen=True)
class CriticStats:
    stddevs: np.ndarray
    correlation: np.ndarray
    conflict: np.ndarray
    information: np.ndarray


def critic_weights(m: IndicatorMatrix):
    """CRITIC: contrast (std dev) times conflict, ``sum_j (1 - |r_ij|)``."""
    require_scaled(m, "CRITIC")
    if m.n_systems < 2:
        raise UsageError("CRITIC needs at least 2 systems")
    sigma = np.array([column_stats(m.values, j)[2] for j in range(m.n_indicators)])
    # constant columns contribute sigma = 0 anyway, so no warning here
    r, _ = correlation_and_constants(m.values)
    conflict = (1.0 - np.abs(r)).sum(axis=1)
    # a constant column's zeroed diagonal would otherwise count as conflict
    for j in np.flatnonzero(sigma == 0.0):
        conflict[j] -= 1.0
    information = sigma * conflict
    if information.sum() <= DEGENERATE_TOL:
        raise DegenerateInputError(
            "CRITIC: information sums to zero (constant or perfectly correlated indicators)"
        )
    weights = WeightVector.normalized(information, Method.CRITIC, m.indicator_names)
    return weights, CriticStats(sigma, r, conflict, information)
