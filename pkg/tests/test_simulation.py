import numpy as np
import pytest

from indexforge import simulation
from indexforge.errors import AllIterationsFailedError, DegenerateInputError, UsageError
from indexforge.scenarios import ScenarioKind, ScenarioSpec
from indexforge.simulation import (
    STAT_NAMES,
    SimulationConfig,
    compare_methods,
    run_simulation,
    summarize,
)
from indexforge.weighting import Method


def config(kind=ScenarioKind.NORMAL, **kw):
    return SimulationConfig(scenario=ScenarioSpec(kind), **kw)


def test_single_iteration_is_degenerate_boxplot():
    _, summary = run_simulation(config(iterations=1, base_seed=3))
    for method in summary.stats:
        table = summary.stats[method]
        for row in table:
            assert np.all(row[:5] == row[0])
            assert row[5] == row[0]


def test_same_seed_is_bit_identical():
    a = run_simulation(config(iterations=8, base_seed=7))[1]
    b = run_simulation(config(iterations=8, base_seed=7))[1]
    for method in a.stats:
        assert a.stats[method].tobytes() == b.stats[method].tobytes()


def test_thread_count_independence():
    cfg = config(ScenarioKind.SYSTEMIC_CORRELATED, iterations=12, base_seed=5)
    s1, a = run_simulation(cfg, workers=1)
    s4, b = run_simulation(cfg, workers=4)
    for method in a.stats:
        assert a.stats[method].tobytes() == b.stats[method].tobytes()
        assert s1.weights[method].tobytes() == s4.weights[method].tobytes()


def test_summary_recomputes_from_samples():
    samples, summary = run_simulation(config(iterations=10, base_seed=2))
    again = summarize(samples)
    for method in summary.stats:
        assert np.array_equal(again.stats[method], summary.stats[method])
        assert again.counts[method] == summary.counts[method] == 10
    cell = summary.cell("ent", "X1")
    assert list(cell) == list(STAT_NAMES)
    assert cell["min"] <= cell["q1"] <= cell["median"] <= cell["q3"] <= cell["max"]


def test_normal_means_near_uniform():
    _, summary = run_simulation(config(iterations=40, base_seed=1))
    for method in summary.stats:
        assert np.all(np.abs(summary.means(method) - 0.2) < 0.08)


def _failing(fail_method, every):
    real = simulation.compute_weights
    calls = {"n": 0}

    def fake(m, method, **kw):
        if Method.parse(method) is fail_method:
            calls["n"] += 1
            if calls["n"] % every == 0:
                raise DegenerateInputError("synthetic failure")
        return real(m, method, **kw)

    return fake


def test_failures_are_logged_per_method(monkeypatch):
    monkeypatch.setattr(simulation, "compute_weights", _failing(Method.ENT, 3))
    cfg = config(iterations=9, methods=("ent", "var"))
    samples, summary = run_simulation(cfg)
    failed = samples.failures_for(Method.ENT)
    assert [f.iteration for f in failed] == [2, 5, 8]
    assert failed[0].error_type == "DegenerateInputError"
    assert summary.counts[Method.ENT] == 6
    assert summary.counts[Method.VAR] == 9
    for method in cfg.methods:
        assert summary.counts[method] + len(samples.failures_for(method)) == cfg.iterations
    assert samples.iteration_ids[Method.ENT] == [0, 1, 3, 4, 6, 7]


def test_all_failures_raise(monkeypatch):
    monkeypatch.setattr(simulation, "compute_weights", _failing(Method.CRITIC, 1))
    with pytest.raises(AllIterationsFailedError) as info:
        run_simulation(config(iterations=3, methods=("critic",)))
    assert info.value.exit_code == 2


def test_compare_methods_contrasts():
    samples, _ = run_simulation(config(iterations=20, base_seed=4))
    report = compare_methods(samples)
    assert all(d.block_contrast == 0.0 for d in report.values())
    assert set(report[Method.VAR].iqr) == {"X1", "X2", "X3", "X4", "X5"}

    samples, _ = run_simulation(config(ScenarioKind.NORMAL_CORRELATED, iterations=20, base_seed=4))
    report = compare_methods(samples)
    assert report[Method.CRITIC].block_contrast < 0
    assert report[Method.PCA].block_contrast > 0
    assert report[Method.PCA].spread > 0


def test_compare_needs_two_methods():
    samples, _ = run_simulation(config(iterations=2, methods=("var",)))
    with pytest.raises(UsageError):
        compare_methods(samples)


def test_config_defaults_and_records():
    assert config().components == 3
    assert config(ScenarioKind.NORMAL_CORRELATED).components == 1
    cfg = config(ScenarioKind.NORMAL_MIXED, iterations=5, methods=("dea", "pca", "dea"), base_seed=11)
    assert cfg.methods == (Method.DEA, Method.PCA)
    again = SimulationConfig.from_record(cfg.to_record())
    assert again.to_record() == cfg.to_record()
    with pytest.raises(UsageError):
        config(iterations=0)
    with pytest.raises(UsageError):
        config(methods=())
    with pytest.raises(UsageError):
        config(pca_components=6)
