"""Weight vectors, composite-index aggregation and ranking."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..dataset import IndicatorMatrix
from ..errors import DegenerateInputError, UsageError

SIMPLEX_TOL = 1e-9
DEGENERATE_TOL = 1e-12


class Method(str, enum.Enum):
    VAR = "VAR"
    ENT = "ENT"
    PCA = "PCA"
    CRITIC = "CRITIC"
    DEA = "DEA"

    @classmethod
    def parse(cls, tag) -> "Method":
        if isinstance(tag, cls):
            return tag
        try:
            return cls(str(tag).strip().upper())
        except ValueError:
            choices = ", ".join(m.value.lower() for m in cls)
            raise UsageError(f"unknown method {tag!r}; choose from {choices}") from None


@dataclass(frozen=True)
class WeightVector:
    weights: np.ndarray
    method: Method
    indicator_names: tuple[str, ...]

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).ravel()
        names = tuple(self.indicator_names)
        if len(names) != w.size:
            raise UsageError(f"{w.size} weights but {len(names)} indicator names")
        if np.any(w < 0) or abs(w.sum() - 1.0) > SIMPLEX_TOL:
            raise UsageError(f"weights must be non-negative and sum to 1, got {w.tolist()}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "indicator_names", names)
        object.__setattr__(self, "method", Method.parse(self.method))

    @classmethod
    def normalized(cls, raw, method, indicator_names, *, what="weights") -> "WeightVector":
        """Normalise non-negative scores to sum to one."""
        raw = np.maximum(np.asarray(raw, dtype=float), 0.0)
        total = raw.sum()
        if total <= DEGENERATE_TOL:
            raise DegenerateInputError(f"{Method.parse(method).value}: {what} sum to zero")
        return cls(raw / total, method, indicator_names)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.indicator_names, self.weights.tolist()))


def require_scaled(m: IndicatorMatrix, method: str) -> None:
    if not m.scaled:
        raise UsageError(f"{method} requires a min-max scaled indicator matrix")


def composite_index(m: IndicatorMatrix, w: WeightVector) -> np.ndarray:
    """Weighted sum of indicators per system."""
    require_scaled(m, "composite_index")
    if w.weights.size != m.n_indicators:
        raise UsageError(f"{w.weights.size} weights for {m.n_indicators} indicators")
    return m.values @ w.weights


@dataclass(frozen=True)
class RankEntry:
    rank: int
    system_id: str
    value: float
    tied: bool


def rank_systems(index, ids) -> list[RankEntry]:
    """Order systems by descending index; ties fall back to ascending id.

    Tied systems share a rank and carry ``tied=True``.
    """
    values = [float(v) for v in index]
    ids = [str(i) for i in ids]
    if len(values) != len(ids):
        raise UsageError(f"{len(values)} index values for {len(ids)} system ids")
    order = sorted(range(len(ids)), key=lambda k: (-values[k], ids[k]))
    counts: dict[float, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    ranking, rank = [], 0
    for pos, k in enumerate(order):
        if pos == 0 or values[k] != values[order[pos - 1]]:
            rank = pos + 1
        ranking.append(RankEntry(rank, ids[k], values[k], counts[values[k]] > 1))
    return ranking
