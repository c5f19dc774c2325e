"""DEA efficiency scores and DEA-derived indicator weights.

Each system is a decision-making unit with a dummy input of one and the
indicators as outputs, so the multiplier LP for unit k is

    max  sum_i w_i x_ik   s.t.  sum_i w_i x_ij <= 1  for all j,  w_i >= eps.

The optimal weights of all units are averaged and renormalised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import IndicatorMatrix
from ..errors import ConfigurationError, DegenerateInputError, DomainError, NumericError, UsageError
from ..lp import LpProblem, LpStatus, solve
from ..numerics import as_matrix
from .core import Method, WeightVector, require_scaled

DEA_EPSILON = 1e-6
FRONTIER_TOL = 1e-6
PIVOT_RULE = "dantzig"


@dataclass(frozen=True)
class DeaResult:
    per_dmu_weights: np.ndarray
    efficiencies: np.ndarray
    averaged_weights: WeightVector
    epsilon: float


def _solve_or_raise(problem: LpProblem, epsilon: float, dmu: int, tie_key=None):
    sol = solve(problem, rule=PIVOT_RULE, tie_key=tie_key)
    if sol.status is LpStatus.INFEASIBLE:
        raise ConfigurationError(
            f"DEA: LP for DMU {dmu} is infeasible; epsilon too large ({epsilon:g}), try a smaller value"
        )
    if sol.status is LpStatus.UNBOUNDED:
        raise NumericError(f"DEA: LP for DMU {dmu} is unbounded")
    return sol


def dea_weights(m: IndicatorMatrix, epsilon: float = DEA_EPSILON) -> DeaResult:
    require_scaled(m, "DEA")
    if epsilon <= 0:
        raise UsageError("DEA epsilon must be positive")
    x = m.values
    if not np.any(x > 0):
        raise DegenerateInputError("DEA: every indicator value is zero")
    rows, cols = x.shape
    ones = np.ones(rows)
    lb = np.full(cols, epsilon)
    weights = np.empty((rows, cols))
    theta = np.empty(rows)
    # equal improvement rates are broken by column totals, not column order
    totals = x.sum(axis=0)
    for k in range(rows):
        sol = _solve_or_raise(LpProblem(x[k], x, ones, lb), epsilon, k, totals)
        weights[k] = sol.variables
        theta[k] = sol.objective_value
    averaged = WeightVector.normalized(weights.mean(axis=0), Method.DEA, m.indicator_names)
    return DeaResult(per_dmu_weights=weights, efficiencies=theta, averaged_weights=averaged, epsilon=epsilon)


def dea_efficiency(inputs, outputs, epsilon: float = DEA_EPSILON) -> np.ndarray:
    """CCR efficiency of every DMU (Charnes-Cooper linearisation).

    ``inputs`` is m x q and ``outputs`` m x s. For DMU k the multipliers
    (u, v) maximise u.y_k subject to v.z_k = 1 and u.y_j - v.z_j <= 0.
    """
    z = as_matrix(inputs)
    y = as_matrix(outputs)
    if z.shape[0] != y.shape[0]:
        raise UsageError(f"inputs have {z.shape[0]} DMUs but outputs have {y.shape[0]}")
    if epsilon <= 0:
        raise UsageError("DEA epsilon must be positive")
    if np.any(z < 0) or np.any(y < 0):
        raise DomainError("DEA inputs and outputs must be non-negative")
    empty = np.flatnonzero(~np.any(z > 0, axis=1))
    if empty.size:
        raise DomainError(f"DEA: DMU {int(empty[0])} has no positive input")
    rows, q = z.shape
    s = y.shape[1]
    lb = np.full(s + q, epsilon)
    frontier = np.hstack([y, -z])
    totals = np.concatenate([y.sum(axis=0), z.sum(axis=0)])
    theta = np.empty(rows)
    for k in range(rows):
        c = np.concatenate([y[k], np.zeros(q)])
        normalise = np.concatenate([np.zeros(s), z[k]])
        a = np.vstack([frontier, normalise, -normalise])
        b = np.concatenate([np.zeros(rows), [1.0, -1.0]])
        theta[k] = _solve_or_raise(LpProblem(c, a, b, lb), epsilon, k, totals).objective_value
    return theta
