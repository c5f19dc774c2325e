"""CSV/JSON serialisation of weight reports, samples and summaries."""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .errors import ParseError
from .scenarios import NORMAL_TRANSFORM, RNG_ALGORITHM
from .simulation import STAT_NAMES, BoxplotSummary, MethodDivergence, WeightSamples
from .weighting import DEA_EPSILON, ENTROPY_EPSILON, LOADING_CONVENTION, Method
from .weighting.dea import PIVOT_RULE

SUMMARY_HEADER = ("method", "indicator", "count") + STAT_NAMES


def _num(x) -> str:
    # shortest round-trip repr keeps files byte-stable
    return repr(float(x))


def now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def method_metadata(entropy_epsilon=ENTROPY_EPSILON, dea_epsilon=DEA_EPSILON) -> dict:
    return {
        "entropy_epsilon": entropy_epsilon,
        "dea_epsilon": dea_epsilon,
        "dea_pivot_rule": PIVOT_RULE,
        "pca_loading_convention": LOADING_CONVENTION,
        "pca_matrix": "sample covariance of min-max scaled indicators",
        "prng": RNG_ALGORITHM,
        "normal_transform": NORMAL_TRANSFORM,
        "systemic_marginals": "triangular on [tri_lower, tri_upper], sorted modes drawn from the symmetric triangular",
        "variance_denominator": "n - 1",
    }


def manifest(command, config: dict, seed, *, started_at, metadata=None, outputs=None) -> dict:
    return {
        "command": command,
        "config": config,
        "seed": seed,
        "tool": "indexforge",
        "tool_version": __version__,
        "metadata": metadata or method_metadata(),
        "started_at": started_at,
        "finished_at": now(),
        "outputs": list(outputs or []),
    }


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def samples_csv(samples: WeightSamples) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("iteration", "method", "indicator", "weight"))
    for method, table in samples.weights.items():
        for it, row in zip(samples.iteration_ids[method], table):
            for name, w in zip(samples.indicator_names, row):
                writer.writerow((it, method.value, name, _num(w)))
    return buf.getvalue()


def failures_csv(samples: WeightSamples) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("iteration", "method", "error", "message"))
    for f in samples.failures:
        writer.writerow((f.iteration, f.method.value, f.error_type, f.message))
    return buf.getvalue()


def summary_csv(summary: BoxplotSummary) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_HEADER)
    for method, name, count, row in summary.rows():
        writer.writerow((method.value, name, count, *(_num(v) for v in row)))
    return buf.getvalue()


def read_summary_csv(text: str) -> BoxplotSummary:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != SUMMARY_HEADER:
        raise ParseError(f"summary CSV must start with header {','.join(SUMMARY_HEADER)}", row=1)
    names: list[str] = []
    tables: dict[Method, list] = {}
    counts: dict[Method, int] = {}
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(SUMMARY_HEADER):
            raise ParseError("ragged row", row=line)
        method = Method.parse(row[0])
        if row[1] not in names:
            names.append(row[1])
        try:
            counts[method] = int(row[2])
            tables.setdefault(method, []).append([float(v) for v in row[3:]])
        except ValueError:
            raise ParseError("non-numeric summary value", row=line) from None
    stats = {m: np.array(t) for m, t in tables.items()}
    for m, t in stats.items():
        if t.shape[0] != len(names):
            raise ParseError(f"method {m.value} does not cover every indicator")
    return BoxplotSummary(tuple(names), stats, counts)


def summary_dict(summary: BoxplotSummary, samples: WeightSamples | None = None,
                 comparison: dict[Method, MethodDivergence] | None = None) -> dict:
    out: dict = {"indicators": list(summary.indicator_names), "methods": {}}
    for method, table in summary.stats.items():
        out["methods"][method.value] = {
            "count": summary.counts[method],
            "indicators": {
                name: dict(zip(STAT_NAMES, (float(v) for v in row)))
                for name, row in zip(summary.indicator_names, table)
            },
        }
    if samples is not None:
        out["iterations"] = samples.iterations
        out["failures"] = [
            {"iteration": f.iteration, "method": f.method.value, "error": f.error_type, "message": f.message}
            for f in samples.failures
        ]
    if comparison is not None:
        out["comparison"] = {
            m.value: {"spread": d.spread, "iqr": d.iqr, "block_contrast": d.block_contrast}
            for m, d in comparison.items()
        }
    return out
