"""Monte Carlo study of how each weighting method distributes weight.

Every iteration draws a fresh dataset from the scenario, min-max scales it
and runs each requested method. Iteration ``i`` uses its own random stream
derived from ``(base_seed, i)``, so results do not depend on how many
worker threads share the work.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dataset import min_max_scale
from .errors import AllIterationsFailedError, IndexForgeError, UsageError
from .numerics import quantiles
from .scenarios import RngState, ScenarioKind, ScenarioSpec, generate
from .weighting import DEA_EPSILON, ENTROPY_EPSILON, Method, compute_weights

STAT_NAMES = ("min", "q1", "median", "q3", "max", "mean")
ALL_METHODS = (Method.VAR, Method.ENT, Method.PCA, Method.CRITIC, Method.DEA)


@dataclass(frozen=True)
class SimulationConfig:
    scenario: ScenarioSpec = field(default_factory=ScenarioSpec)
    iterations: int = 100
    methods: tuple[Method, ...] = ALL_METHODS
    pca_components: int | None = None
    entropy_epsilon: float = ENTROPY_EPSILON
    dea_epsilon: float = DEA_EPSILON
    base_seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise UsageError("iterations must be at least 1")
        methods = tuple(dict.fromkeys(Method.parse(m) for m in self.methods))
        if not methods:
            raise UsageError("at least one method is required")
        object.__setattr__(self, "methods", methods)
        if self.pca_components is not None and not 1 <= self.pca_components <= self.scenario.indicators:
            raise UsageError(f"pca_components must be between 1 and {self.scenario.indicators}")

    @property
    def components(self) -> int:
        """Retained PCA components: 1 for correlated scenarios, 3 otherwise."""
        if self.pca_components is not None:
            return self.pca_components
        return min(1 if self.scenario.kind.correlated else 3, self.scenario.indicators)

    def to_record(self) -> dict:
        record = self.scenario.to_record()
        record.update(
            iterations=self.iterations,
            methods=[m.value for m in self.methods],
            pca_components=self.components,
            entropy_epsilon=self.entropy_epsilon,
            dea_epsilon=self.dea_epsilon,
            seed=self.base_seed,
        )
        return record

    @classmethod
    def from_record(cls, record: dict) -> "SimulationConfig":
        record = dict(record)
        own = {}
        for key in ("iterations", "methods", "pca_components", "entropy_epsilon", "dea_epsilon"):
            if key in record:
                own[key] = record.pop(key)
        if "seed" in record:
            own["base_seed"] = int(record.pop("seed"))
        if "methods" in own and isinstance(own["methods"], str):
            own["methods"] = [t for t in own["methods"].split(",") if t.strip()]
        return cls(scenario=ScenarioSpec.from_record(record), **own)


@dataclass(frozen=True)
class FailureRecord:
    iteration: int
    method: Method
    error_type: str
    message: str


@dataclass
class WeightSamples:
    """Per-method weight draws, one row per successful iteration."""

    indicator_names: tuple[str, ...]
    iterations: int
    weights: dict[Method, np.ndarray]
    iteration_ids: dict[Method, list[int]]
    failures: list[FailureRecord]
    correlated_block: int = 0

    @property
    def methods(self) -> list[Method]:
        return list(self.weights)

    def failures_for(self, method: Method) -> list[FailureRecord]:
        return [f for f in self.failures if f.method is method]


@dataclass
class BoxplotSummary:
    """``stats[method]`` is an ``n x 6`` array ordered as ``STAT_NAMES``."""

    indicator_names: tuple[str, ...]
    stats: dict[Method, np.ndarray]
    counts: dict[Method, int]

    def cell(self, method, indicator) -> dict[str, float]:
        method = Method.parse(method)
        row = self.stats[method][self.indicator_names.index(indicator)]
        return dict(zip(STAT_NAMES, row.tolist()))

    def means(self, method) -> np.ndarray:
        return self.stats[Method.parse(method)][:, STAT_NAMES.index("mean")]

    def rows(self):
        for method, table in self.stats.items():
            for name, row in zip(self.indicator_names, table):
                yield method, name, self.counts[method], row


def _iteration(cfg: SimulationConfig, i: int):
    rng = RngState(cfg.base_seed).spawn(i)
    data = min_max_scale(generate(cfg.scenario, rng))
    out = {}
    for method in cfg.methods:
        try:
            w, _ = compute_weights(
                data,
                method,
                pca_components=cfg.components,
                entropy_epsilon=cfg.entropy_epsilon,
                dea_epsilon=cfg.dea_epsilon,
            )
            out[method] = w.weights
        except UsageError:
            raise
        except IndexForgeError as exc:
            out[method] = FailureRecord(i, method, type(exc).__name__, str(exc))
    return data.indicator_names, out


def summarize(samples: WeightSamples) -> BoxplotSummary:
    probs = [0.0, 0.25, 0.5, 0.75, 1.0]
    stats, counts = {}, {}
    for method, table in samples.weights.items():
        rows = []
        for j in range(table.shape[1]):
            column = table[:, j]
            rows.append(np.append(quantiles(column, probs), column.mean()))
        stats[method] = np.array(rows)
        counts[method] = table.shape[0]
    return BoxplotSummary(samples.indicator_names, stats, counts)


def run_simulation(cfg: SimulationConfig, workers: int = 1):
    """Run the study; returns ``(WeightSamples, BoxplotSummary)``.

    Failed (method, iteration) pairs are logged in ``WeightSamples.failures``
    and left out of that method's summary. If a method fails on every
    iteration, :class:`AllIterationsFailedError` is raised.
    """
    indices = range(cfg.iterations)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda i: _iteration(cfg, i), indices))
    else:
        results = [_iteration(cfg, i) for i in indices]

    names = results[0][0]
    weights, ids, failures = {}, {}, []
    for method in cfg.methods:
        rows, used = [], []
        for i, (_, out) in enumerate(results):
            value = out[method]
            if isinstance(value, FailureRecord):
                failures.append(value)
            else:
                rows.append(value)
                used.append(i)
        if not rows:
            raise AllIterationsFailedError(method.value, [f for f in failures if f.method is method])
        weights[method] = np.array(rows)
        ids[method] = used
    failures.sort(key=lambda f: (f.iteration, cfg.methods.index(f.method)))
    samples = WeightSamples(
        indicator_names=names,
        iterations=cfg.iterations,
        weights=weights,
        iteration_ids=ids,
        failures=failures,
        correlated_block=cfg.scenario.contrast_block,
    )
    return samples, summarize(samples)


@dataclass
class MethodDivergence:
    spread: float
    iqr: dict[str, float]
    block_contrast: float


def compare_methods(s: WeightSamples) -> dict[Method, MethodDivergence]:
    """Describe how differently the methods spread their weight.

    ``block_contrast`` is the average mean weight inside the correlated block
    minus the average outside it; 0 when the scenario has no such block.
    """
    if len(s.weights) < 2:
        raise UsageError("compare_methods needs at least two methods")
    summary = summarize(s)
    k = s.correlated_block
    n = len(s.indicator_names)
    report = {}
    for method, table in summary.stats.items():
        means = table[:, STAT_NAMES.index("mean")]
        iqr = table[:, STAT_NAMES.index("q3")] - table[:, STAT_NAMES.index("q1")]
        contrast = float(means[:k].mean() - means[k:].mean()) if 0 < k < n else 0.0
        report[method] = MethodDivergence(
            spread=float(means.max() - means.min()),
            iqr=dict(zip(s.indicator_names, iqr.tolist())),
            block_contrast=contrast,
        )
    return report


__all__ = [
    "ALL_METHODS",
    "BoxplotSummary",
    "FailureRecord",
    "MethodDivergence",
    "STAT_NAMES",
    "ScenarioKind",
    "SimulationConfig",
    "WeightSamples",
    "compare_methods",
    "run_simulation",
    "summarize",
]
