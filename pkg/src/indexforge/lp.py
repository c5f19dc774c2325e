"""Dense two-phase simplex for small linear programs.

Solves ``max c.w  s.t.  A w <= b,  w >= lb``. Lower bounds are removed by
the shift ``w = lb + x``; rows whose shifted right-hand side is negative are
negated and given an artificial variable for phase one. Pivoting follows
Bland's rule throughout, so the vertex returned for a problem with several
optima depends only on the input.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError, UsageError

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-9
PIVOT_RULES = ("bland", "dantzig")


class LpStatus(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class LpProblem:
    objective: np.ndarray
    constraint_matrix: np.ndarray
    rhs: np.ndarray
    lower_bounds: np.ndarray = field(default=None)

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).ravel()
        a = np.asarray(self.constraint_matrix, dtype=float)
        if a.size == 0:
            a = a.reshape(0, c.size)
        b = np.asarray(self.rhs, dtype=float).ravel()
        lb = np.zeros(c.size) if self.lower_bounds is None else np.asarray(self.lower_bounds, dtype=float).ravel()
        if a.ndim != 2 or a.shape[1] != c.size or a.shape[0] != b.size or lb.size != c.size:
            raise UsageError(
                f"inconsistent LP dimensions: c={c.size}, A={a.shape}, b={b.size}, lb={lb.size}"
            )
        for name, arr in (("objective", c), ("constraint_matrix", a), ("rhs", b), ("lower_bounds", lb)):
            if not np.all(np.isfinite(arr)):
                raise UsageError(f"LP {name} has non-finite entries")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "constraint_matrix", a)
        object.__setattr__(self, "rhs", b)
        object.__setattr__(self, "lower_bounds", lb)


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    variables: np.ndarray | None
    objective_value: float | None
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


def _pivot(t: np.ndarray, row: int, col: int) -> None:
    t[row] /= t[row, col]
    column = t[:, col].copy()
    column[row] = 0.0
    t -= np.outer(column, t[row])
    t[:, col] = 0.0
    t[row, col] = 1.0


def _run_simplex(t, basis, allowed, budget, rule, tie_key):
    """Maximise the objective held in the last tableau row.

    The last row stores ``z_j - c_j``; a column may enter while that value is
    below ``-FEAS_TOL``. Under ``"dantzig"`` the most negative column enters
    (ties go to the largest ``tie_key``, then the lowest index) and ratio
    ties go to the largest pivot element; after ``stall_limit``
    consecutive degenerate pivots the rule drops to Bland's for the rest of
    the phase, which rules out cycling. Returns (unbounded, pivots).
    """
    rows = t.shape[0] - 1
    stall_limit = rows + allowed
    bland = rule == "bland"
    stalled = pivots = 0
    while True:
        cost = t[-1, :allowed]
        candidates = np.flatnonzero(cost < -FEAS_TOL)
        if candidates.size == 0:
            return False, pivots
        if bland:
            col = int(candidates[0])
        else:
            lowest = cost[candidates].min()
            tied_cols = candidates[cost[candidates] <= lowest + PIVOT_TOL * (1.0 + abs(lowest))]
            col = int(min(tied_cols, key=lambda j: (-tie_key[j], j)))
        column = t[:rows, col]
        eligible = np.flatnonzero(column > PIVOT_TOL)
        if eligible.size == 0:
            return True, pivots
        ratios = t[eligible, -1] / column[eligible]
        best = ratios.min()
        tied = eligible[ratios <= best + PIVOT_TOL * (1.0 + abs(best))]
        if bland:
            row = int(min(tied, key=lambda r: basis[r]))
        else:
            row = int(min(tied, key=lambda r: (-column[r], basis[r])))
        _pivot(t, row, col)
        basis[row] = col
        pivots += 1
        if pivots > budget:
            raise NumericError(f"simplex exceeded {budget} pivots; cycling suspected")
        if not bland:
            stalled = stalled + 1 if best <= FEAS_TOL else 0
            bland = stalled > stall_limit


def solve(problem: LpProblem, rule: str = "bland", tie_key=None) -> LpSolution:
    """Solve ``problem`` and report Optimal, Infeasible or Unbounded.

    ``rule`` picks the entering column: ``"bland"`` (lowest index) or
    ``"dantzig"`` (largest improvement rate, Bland's rule on stalls).
    ``tie_key`` ranks the decision variables when Dantzig's rule sees equal
    improvement rates, so the choice can follow the data rather than the
    column order; slack and artificial columns rank below every variable.
    """
    if rule not in PIVOT_RULES:
        raise UsageError(f"unknown pivot rule {rule!r}")
    c, a, lb = problem.objective, problem.constraint_matrix, problem.lower_bounds
    m, n = a.shape
    b = problem.rhs - a @ lb
    budget = 10 * (n + m) ** 2 + 10
    keys = np.full(n + m + int(np.sum(b < 0)), -np.inf)
    keys[:n] = 0.0 if tie_key is None else np.asarray(tie_key, dtype=float)

    negative = np.flatnonzero(b < 0)
    n_art = negative.size
    width = n + m + n_art
    t = np.zeros((m + 1, width + 1))
    t[:m, :n] = a
    t[:m, n:n + m] = np.eye(m)
    t[:m, -1] = b
    basis = list(range(n, n + m))
    for k, i in enumerate(negative):
        t[i, :-1] *= -1.0
        t[i, -1] *= -1.0
        t[i, n + m + k] = 1.0
        basis[i] = n + m + k

    total_pivots = 0
    if n_art:
        # phase one: maximise -sum(artificials)
        t[-1, n + m:width] = 1.0
        for i in negative:
            t[-1] -= t[i]
        _, used = _run_simplex(t, basis, width, budget, rule, keys)
        total_pivots += used
        if t[-1, -1] < -FEAS_TOL * (1.0 + float(np.max(np.abs(b)))):
            return LpSolution(LpStatus.INFEASIBLE, None, None, total_pivots)
        # drive zero-level artificials out of the basis; drop redundant rows
        keep = []
        for i in range(m):
            if basis[i] >= n + m:
                entries = np.abs(t[i, :n + m])
                col = int(np.argmax(entries))
                if entries[col] <= PIVOT_TOL:
                    continue
                # the artificial sits at zero; pivot on the largest entry for stability
                t[i, -1] = 0.0
                _pivot(t, i, col)
                basis[i] = col
                total_pivots += 1
            keep.append(i)
        t = np.vstack([t[keep], t[-1:]])
        t = np.delete(t, np.s_[n + m:width], axis=1)
        basis = [basis[i] for i in keep]

    rows = t.shape[0] - 1
    t[-1] = 0.0
    t[-1, :n] = -c
    for i in range(rows):
        if basis[i] < n:
            t[-1] += c[basis[i]] * t[i]
    unbounded, used = _run_simplex(t, basis, n + m, budget, rule, keys)
    total_pivots += used
    if unbounded:
        return LpSolution(LpStatus.UNBOUNDED, None, None, total_pivots)

    x = np.zeros(n + m)
    for i in range(rows):
        x[basis[i]] = t[i, -1]
    w = lb + np.maximum(x[:n], 0.0)
    return LpSolution(LpStatus.OPTIMAL, w, float(c @ w), total_pivots)
