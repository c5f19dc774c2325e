"""Command-line front end.

Exit codes: 0 success, 1 usage/parse/configuration error, 2 degenerate data,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import reports
from .dataset import IndicatorMatrix, load_csv, min_max_scale, negate_columns, validate
from .errors import IndexForgeError, UsageError
from .simulation import SimulationConfig, compare_methods, run_simulation
from .svg import render_boxplot
from .weighting import (
    DEA_EPSILON,
    ENTROPY_EPSILON,
    Method,
    WeightVector,
    composite_index,
    compute_weights,
    rank_systems,
)

SEED_ENV = "INDEXFORGE_SEED"
SCENARIO_FLAGS = {
    "scenario": "kind",
    "systems": "systems",
    "indicators": "indicators",
    "sigma_high": "sigma_high",
    "correlated_block": "correlated_block",
    "covariance": "covariance",
    "tri_lower": "tri_lower",
    "tri_upper": "tri_upper",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _csv_list(text):
    return [t.strip() for t in text.split(",") if t.strip()] if text else []


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(path: str, negate, prescaled: bool) -> IndicatorMatrix:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    data = load_csv(raw)
    if negate:
        data = negate_columns(data, negate)
    if prescaled:
        return IndicatorMatrix(data.system_ids, data.indicator_names, data.values, scaled=True)
    return min_max_scale(data)


def cmd_weigh(args) -> int:
    started = reports.now()
    data = _load(args.csv, _csv_list(args.negate), args.prescaled)
    weights, diagnostics = compute_weights(
        data,
        args.method,
        pca_components=args.components,
        entropy_epsilon=args.entropy_epsilon,
        dea_epsilon=args.dea_epsilon,
    )
    config = {
        "csv": args.csv,
        "method": weights.method.value,
        "negate": _csv_list(args.negate),
        "prescaled": args.prescaled,
        "components": args.components,
        "entropy_epsilon": args.entropy_epsilon,
        "dea_epsilon": args.dea_epsilon,
    }
    run = reports.manifest(
        "weigh", config, args.seed, started_at=started,
        metadata=reports.method_metadata(args.entropy_epsilon, args.dea_epsilon),
    )
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("method", "indicator", "weight"))
        for name, w in weights.as_dict().items():
            writer.writerow((weights.method.value, name, repr(w)))
        _emit(buf.getvalue(), args.output)
        if args.output:
            Path(args.output + ".manifest.json").write_text(reports.dump_json(run), encoding="utf-8")
        return 0
    report = {
        "method": weights.method.value,
        "indicator_names": list(weights.indicator_names),
        "weights": weights.as_dict(),
        "diagnostics": diagnostics,
        "validation": validate(data).to_dict(),
        "manifest": run,
    }
    _emit(reports.dump_json(report), args.output)
    return 0


def _weights_from_source(source: str, names) -> WeightVector:
    path = Path(source)
    if path.suffix.lower() == ".json" or path.is_file():
        try:
            report = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read weight report {source}: {exc}") from None
        given = report.get("weights")
        if not isinstance(given, dict):
            raise UsageError(f"{source} has no 'weights' mapping")
        if set(given) != set(names):
            raise UsageError(
                f"weight report indicators {sorted(given)} do not match data indicators {sorted(names)}"
            )
        return WeightVector([given[n] for n in names], report.get("method", "VAR"), names)
    try:
        values = [float(t) for t in _csv_list(source)]
    except ValueError:
        raise UsageError(f"--weights must be a report path or comma-separated numbers, got {source!r}") from None
    if len(values) != len(names):
        raise UsageError(f"{len(values)} weights given for {len(names)} indicators")
    total = sum(values)
    if any(v < 0 for v in values) or abs(total - 1.0) > 1e-6:
        raise UsageError("inline weights must be non-negative and sum to 1")
    return WeightVector([v / total for v in values], "VAR", names)


def cmd_index(args) -> int:
    started = reports.now()
    data = _load(args.csv, _csv_list(args.negate), args.prescaled)
    weights = _weights_from_source(args.weights, data.indicator_names)
    index = composite_index(data, weights)
    ranking = rank_systems(index, data.system_ids)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("rank", "system_id", "index", "tied"))
        for r in ranking:
            writer.writerow((r.rank, r.system_id, repr(r.value), str(r.tied).lower()))
        _emit(buf.getvalue(), args.output)
        return 0
    config = {"csv": args.csv, "weights": args.weights, "negate": _csv_list(args.negate), "prescaled": args.prescaled}
    report = {
        "weights": weights.as_dict(),
        "index": dict(zip(data.system_ids, index.tolist())),
        "ranking": [
            {"rank": r.rank, "system_id": r.system_id, "index": r.value, "tied": r.tied} for r in ranking
        ],
        "ties": any(r.tied for r in ranking),
        "manifest": reports.manifest("index", config, args.seed, started_at=started),
    }
    _emit(reports.dump_json(report), args.output)
    return 0


def _simulation_config(args) -> SimulationConfig:
    record: dict = {}
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        # a manifest from an earlier run is accepted as-is
        record.update(loaded.get("config", loaded) if isinstance(loaded, dict) else {})
    for flag, key in SCENARIO_FLAGS.items():
        value = getattr(args, flag)
        if value is not None:
            record[key] = value
    for flag in ("iterations", "pca_components", "entropy_epsilon", "dea_epsilon"):
        value = getattr(args, flag)
        if value is not None:
            record[flag] = value
    if args.methods is not None:
        record["methods"] = _csv_list(args.methods)
    if args.seed_given or "seed" not in record:
        record["seed"] = args.seed
    return SimulationConfig.from_record(record)


def cmd_simulate(args) -> int:
    started = reports.now()
    cfg = _simulation_config(args)
    samples, summary = run_simulation(cfg, workers=args.workers)
    comparison = compare_methods(samples) if len(samples.weights) >= 2 else None
    out = Path(args.output or "simulation-output")
    out.mkdir(parents=True, exist_ok=True)

    files = {
        "samples.csv": reports.samples_csv(samples),
        "summary.csv": reports.summary_csv(summary),
        "summary.json": reports.dump_json(reports.summary_dict(summary, samples, comparison)),
        "failures.csv": reports.failures_csv(samples),
    }
    if args.svg:
        for method in summary.stats:
            title = f"{cfg.scenario.kind.value}: {method.value} weights over {summary.counts[method]} iterations"
            files[f"boxplot_{method.value.lower()}.svg"] = render_boxplot(summary, method, title)
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8")
    run = reports.manifest(
        "simulate", cfg.to_record(), cfg.base_seed, started_at=started,
        metadata=reports.method_metadata(cfg.entropy_epsilon, cfg.dea_epsilon),
        outputs=sorted(files),
    )
    (out / "manifest.json").write_text(reports.dump_json(run), encoding="utf-8")

    if args.format == "json":
        sys.stdout.write(files["summary.json"])
    else:
        sys.stdout.write(files["summary.csv"])
    for f in samples.failures:
        print(f"warning: iteration {f.iteration} {f.method.value}: {f.message}", file=sys.stderr)
    return 0


def cmd_report(args) -> int:
    try:
        text = Path(args.summary).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.summary}: {exc.strerror}") from None
    summary = reports.read_summary_csv(text)
    out = Path(args.output or Path(args.summary).parent)
    out.mkdir(parents=True, exist_ok=True)
    for method in summary.stats:
        path = out / f"boxplot_{method.value.lower()}.svg"
        path.write_text(render_boxplot(summary, method), encoding="utf-8")
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"base seed (default ${SEED_ENV} or 0)")
    common.add_argument("--output", "-o", help="output file (weigh/index) or directory (simulate/report)")
    common.add_argument("--format", choices=("csv", "json"), default="json")

    data_flags = argparse.ArgumentParser(add_help=False)
    data_flags.add_argument("csv", help="indicator CSV: id column then one column per indicator")
    data_flags.add_argument("--negate", help="comma-separated cost-type indicators to negate before scaling")
    data_flags.add_argument("--prescaled", action="store_true", help="data is already in [0, 1]; skip scaling")

    parser = _Parser(prog="indexforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    weigh = sub.add_parser("weigh", parents=[common, data_flags], help="compute indicator weights")
    weigh.add_argument("--method", required=True, type=Method.parse, help="var, ent, pca, critic or dea")
    weigh.add_argument("--components", type=int, default=None, help="PCA components to retain (default all)")
    weigh.add_argument("--entropy-epsilon", type=float, default=ENTROPY_EPSILON)
    weigh.add_argument("--dea-epsilon", type=float, default=DEA_EPSILON)
    weigh.set_defaults(func=cmd_weigh)

    index = sub.add_parser("index", parents=[common, data_flags], help="composite index and ranking")
    index.add_argument("--weights", required=True, help="weigh JSON report or comma-separated weights")
    index.set_defaults(func=cmd_index)

    sim = sub.add_parser("simulate", parents=[common], help="Monte Carlo weight study")
    sim.add_argument("--config", help="JSON scenario record or a previous manifest.json")
    sim.add_argument("--scenario", choices=("normal", "normal-mixed", "normal-correlated", "systemic-correlated"))
    sim.add_argument("--systems", type=int)
    sim.add_argument("--indicators", type=int)
    sim.add_argument("--iterations", type=int)
    sim.add_argument("--methods", help="comma-separated subset of var,ent,pca,critic,dea")
    sim.add_argument("--pca-components", type=int)
    sim.add_argument("--entropy-epsilon", type=float)
    sim.add_argument("--dea-epsilon", type=float)
    sim.add_argument("--sigma-high", type=float)
    sim.add_argument("--correlated-block", type=int)
    sim.add_argument("--covariance", type=float)
    sim.add_argument("--tri-lower", type=float)
    sim.add_argument("--tri-upper", type=float)
    sim.add_argument("--workers", type=int, default=1, help="worker threads (results do not depend on this)")
    sim.add_argument("--svg", action="store_true", help="also write one boxplot SVG per method")
    sim.set_defaults(func=cmd_simulate)

    rep = sub.add_parser("report", parents=[common], help="re-render SVG boxplots from summary.csv")
    rep.add_argument("summary")
    rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.seed_given = args.seed is not None
        if args.seed is None:
            args.seed = _default_seed()
        return args.func(args)
    except IndexForgeError as exc:
        print(f"indexforge: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
