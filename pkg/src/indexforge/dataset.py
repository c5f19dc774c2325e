"""Indicator matrices: CSV ingestion, validation and min-max scaling."""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import IndexForgeWarning, ParseError, UsageError
from .numerics import constant_columns


@dataclass(frozen=True)
class IndicatorMatrix:
    """``m`` systems (rows) by ``n`` benefit-type indicators (columns).

    ``values`` is stored read-only. When ``scaled`` is true every entry lies in
    ``[0, 1]``.
    """

    system_ids: tuple[str, ...]
    indicator_names: tuple[str, ...]
    values: np.ndarray
    scaled: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2:
            raise UsageError("indicator values must be a 2-D matrix")
        ids = tuple(str(s) for s in self.system_ids)
        names = tuple(str(s) for s in self.indicator_names)
        m, n = values.shape
        if m < 1 or n < 1:
            raise UsageError("an indicator matrix needs at least one system and one indicator")
        if len(ids) != m or len(names) != n:
            raise UsageError(
                f"label counts ({len(ids)} ids, {len(names)} names) do not match values shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise UsageError("indicator values contain missing or non-finite entries")
        if self.scaled and (values.min() < 0.0 or values.max() > 1.0):
            raise UsageError("a scaled matrix must have every entry in [0, 1]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "system_ids", ids)
        object.__setattr__(self, "indicator_names", names)

    @classmethod
    def from_array(cls, values, *, scaled=False, system_ids=None, indicator_names=None):
        values = np.asarray(values, dtype=float)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        m, n = values.shape
        return cls(
            system_ids=system_ids or tuple(f"s{k + 1}" for k in range(m)),
            indicator_names=indicator_names or tuple(f"X{i + 1}" for i in range(n)),
            values=values,
            scaled=scaled,
        )

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def n_systems(self) -> int:
        return self.values.shape[0]

    @property
    def n_indicators(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> np.ndarray:
        try:
            return self.values[:, self.indicator_names.index(name)]
        except ValueError:
            raise UsageError(f"unknown indicator {name!r}") from None


def load_csv(source) -> IndicatorMatrix:
    """Read an indicator matrix from CSV bytes, text, or a binary/text stream.

    The first header cell names the id column; the remaining header cells are
    indicator names. Row numbers in errors are 1-based file lines.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    rows = [r for r in csv.reader(io.StringIO(source)) if any(cell.strip() for cell in r)]
    if not rows:
        raise ParseError("empty CSV input")
    header = [cell.strip() for cell in rows[0]]
    if len(header) < 2:
        raise ParseError("header needs an id column and at least one indicator", row=1)
    names = header[1:]
    if len(set(names)) != len(names):
        raise ParseError("duplicate indicator names in header", row=1)
    if len(rows) < 2:
        raise ParseError("CSV has a header but no data rows")

    ids, values, seen = [], [], set()
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"ragged row: expected {len(header)} cells, found {len(row)}", row=line)
        system_id = row[0].strip()
        if not system_id:
            raise ParseError("empty system id", row=line, column=header[0])
        if system_id in seen:
            raise ParseError(f"duplicate system id {system_id!r}", row=line, column=header[0])
        seen.add(system_id)
        parsed = []
        for name, cell in zip(names, row[1:]):
            try:
                x = float(cell)
            except ValueError:
                raise ParseError(f"non-numeric value {cell.strip()!r}", row=line, column=name) from None
            if not math.isfinite(x):
                raise ParseError(f"non-finite value {cell.strip()!r}", row=line, column=name)
            parsed.append(x)
        ids.append(system_id)
        values.append(parsed)
    return IndicatorMatrix(tuple(ids), tuple(names), np.array(values), scaled=False)


def negate_columns(m: IndicatorMatrix, names) -> IndicatorMatrix:
    """Flip cost-type indicators so that higher is better."""
    if m.scaled:
        raise UsageError("negate cost-type columns before scaling")
    values = m.values.copy()
    for name in names:
        if name not in m.indicator_names:
            raise UsageError(f"cannot negate unknown indicator {name!r}")
        values[:, m.indicator_names.index(name)] *= -1.0
    return IndicatorMatrix(m.system_ids, m.indicator_names, values, scaled=False)


def min_max_scale(m: IndicatorMatrix) -> IndicatorMatrix:
    """Map each column onto [0, 1] with its own min and max.

    Constant columns become all zeros and trigger an :class:`IndexForgeWarning`.
    """
    if m.scaled:
        raise UsageError("matrix is already scaled")
    x = m.values
    lo, hi = x.min(axis=0), x.max(axis=0)
    span = hi - lo
    flat = span == 0
    if np.any(flat):
        names = [m.indicator_names[j] for j in np.flatnonzero(flat)]
        warnings.warn(f"constant indicator(s) {names} scaled to 0", IndexForgeWarning, stacklevel=2)
    scaled = np.where(flat, 0.0, (x - lo) / np.where(flat, 1.0, span))
    # rounding can land a hair outside [0, 1]
    scaled = np.clip(scaled, 0.0, 1.0)
    return IndicatorMatrix(m.system_ids, m.indicator_names, scaled, scaled=True)


@dataclass
class ValidationReport:
    constant_columns: list[str] = field(default_factory=list)
    duplicate_columns: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not (self.constant_columns or self.duplicate_columns or self.warnings)

    def to_dict(self) -> dict:
        return {
            "constant_columns": list(self.constant_columns),
            "duplicate_columns": [list(p) for p in self.duplicate_columns],
            "warnings": list(self.warnings),
        }


def validate(m: IndicatorMatrix) -> ValidationReport:
    report = ValidationReport()
    names = m.indicator_names
    x = m.values
    constant = set(constant_columns(x))
    report.constant_columns = [names[j] for j in sorted(constant)]
    if m.n_systems >= 2:
        varying = [j for j in range(m.n_indicators) if j not in constant]
        centered = x - x.mean(axis=0)
        norms = np.sqrt(np.sum(centered**2, axis=0))
        for a, i in enumerate(varying):
            for j in varying[a + 1:]:
                r = float(centered[:, i] @ centered[:, j]) / (norms[i] * norms[j])
                if r >= 1.0 - 1e-12:
                    report.duplicate_columns.append((names[i], names[j]))
    if m.n_systems < m.n_indicators:
        report.warnings.append(
            f"fewer systems than indicators ({m.n_systems} < {m.n_indicators})"
        )
    for name in report.constant_columns:
        report.warnings.append(f"indicator {name} is constant")
    for a, b in report.duplicate_columns:
        report.warnings.append(f"indicators {a} and {b} are perfectly correlated")
    return report
