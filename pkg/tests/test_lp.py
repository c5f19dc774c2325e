import numpy as np
import pytest
from scipy.optimize import linprog

from indexforge.errors import UsageError
from indexforge.lp import LpProblem, LpStatus, solve
from oracles import vertex_enumeration

RULES = ["bland", "dantzig"]


@pytest.mark.parametrize("rule", RULES)
def test_box(rule):
    sol = solve(LpProblem([1, 1], [[1, 0], [0, 1]], [1, 1]), rule=rule)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.objective_value == pytest.approx(2.0)
    assert np.allclose(sol.variables, [1, 1])


@pytest.mark.parametrize("rule", RULES)
def test_triangle(rule):
    sol = solve(LpProblem([2, 1], [[1, 1]], [1]), rule=rule)
    assert sol.objective_value == pytest.approx(2.0)
    assert np.allclose(sol.variables, [1, 0])
    # the triangle's vertices are (0,0), (1,0), (0,1)
    assert vertex_enumeration([2, 1], [[1, 1]], [1], [0, 0])[0] == pytest.approx(2.0)


def test_infeasible_and_unbounded():
    assert solve(LpProblem([1], [[1]], [-1])).status is LpStatus.INFEASIBLE
    sol = solve(LpProblem([1], np.zeros((0, 1)), []))
    assert sol.status is LpStatus.UNBOUNDED
    assert sol.variables is None


def test_lower_bounds_are_respected():
    # max -x - y with x >= 0.3, y >= 0.2 -> pinned at the bounds
    sol = solve(LpProblem([-1, -1], [[1, 1]], [5], lower_bounds=[0.3, 0.2]))
    assert np.allclose(sol.variables, [0.3, 0.2])
    # lower bounds making x + y <= 1 infeasible
    assert solve(LpProblem([1, 1], [[1, 1]], [1], lower_bounds=[0.6, 0.6])).status is LpStatus.INFEASIBLE


def test_negative_rhs_needs_phase_one():
    # x + y >= 1.5 written as -x - y <= -1.5, inside the unit box
    sol = solve(LpProblem([1, -1], [[1, 0], [0, 1], [-1, -1]], [1, 1, -1.5]))
    assert sol.status is LpStatus.OPTIMAL
    assert np.allclose(sol.variables, [1, 0.5])


def test_equality_via_two_inequalities():
    sol = solve(LpProblem([1, 2], [[1, 1], [-1, -1], [0, 1]], [1, -1, 0.25]))
    assert sol.objective_value == pytest.approx(1.25)


def test_dimension_mismatch():
    with pytest.raises(UsageError):
        LpProblem([1, 2], [[1, 0, 0]], [1])
    with pytest.raises(UsageError):
        LpProblem([1, 2], [[1, 0]], [1, 2])
    with pytest.raises(UsageError):
        solve(LpProblem([1], [[1]], [1]), rule="steepest")


def _random_lp(rng):
    n = int(rng.integers(1, 4))
    k = int(rng.integers(0, 6))
    a = rng.normal(size=(k, n))
    b = rng.normal(size=k) + 0.5
    # a box keeps the region bounded so enumeration sees every candidate
    a = np.vstack([a, np.eye(n)])
    b = np.concatenate([b, rng.uniform(0.5, 3.0, n)])
    lb = rng.uniform(-1.0, 0.5, n)
    c = rng.normal(size=n)
    return c, a, b, lb


@pytest.mark.parametrize("rule", RULES)
def test_matches_vertex_enumeration(rule):
    rng = np.random.default_rng(2024)
    seen = {LpStatus.OPTIMAL: 0, LpStatus.INFEASIBLE: 0}
    for _ in range(300):
        c, a, b, lb = _random_lp(rng)
        sol = solve(LpProblem(c, a, b, lb), rule=rule)
        best, _ = vertex_enumeration(c, a, b, lb)
        seen[sol.status] += 1
        if best is None:
            assert sol.status is LpStatus.INFEASIBLE
            continue
        assert sol.status is LpStatus.OPTIMAL
        assert sol.objective_value == pytest.approx(best, abs=1e-8)
        assert np.all(a @ sol.variables <= b + 1e-9)
        assert np.all(sol.variables >= lb - 1e-12)
    assert seen[LpStatus.OPTIMAL] > 100 and seen[LpStatus.INFEASIBLE] > 10


def test_matches_scipy_on_larger_problems():
    rng = np.random.default_rng(5)
    for _ in range(40):
        n, k = 6, 25
        a = rng.uniform(0, 1, size=(k, n))
        b = np.ones(k)
        c = rng.uniform(0, 1, size=n)
        lb = np.full(n, 1e-6)
        ours = solve(LpProblem(c, a, b, lb))
        ref = linprog(-c, A_ub=a, b_ub=b, bounds=[(1e-6, None)] * n, method="highs")
        assert ours.objective_value == pytest.approx(-ref.fun, abs=1e-8)


def test_deterministic():
    rng = np.random.default_rng(3)
    c, a, b, lb = _random_lp(rng)
    first = solve(LpProblem(c, a, b, lb))
    for _ in range(3):
        again = solve(LpProblem(c.copy(), a.copy(), b.copy(), lb.copy()))
        assert again.status is first.status
        if first.variables is not None:
            assert again.variables.tobytes() == first.variables.tobytes()


def test_degenerate_problem_terminates():
    # Beale's classic cycling example (for Dantzig's rule without safeguards), as a max problem
    c = [0.75, -150, 0.02, -6]
    a = [[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]]
    b = [0, 0, 1]
    for rule in RULES:
        sol = solve(LpProblem(c, a, b), rule=rule)
        assert sol.objective_value == pytest.approx(0.05)
