"""Seeded synthetic indicator data for the four Monte Carlo scenarios.

Randomness comes from numpy's PCG64 bit generator seeded through
``SeedSequence``. Normal variates use the Box-Muller transform on uniform
draws so the stream does not depend on numpy's own normal sampler.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, fields

import numpy as np
from scipy.special import ndtr

from .dataset import IndicatorMatrix
from .errors import UsageError
from .numerics import cholesky

RNG_ALGORITHM = "PCG64 seeded via numpy SeedSequence; stream i = SeedSequence([base_seed, i])"
NORMAL_TRANSFORM = "box-muller"
SEED_MASK = (1 << 64) - 1


def derive_seed(base_seed: int, index: int) -> int:
    """Independent 64-bit seed for sub-stream ``index`` of ``base_seed``."""
    state = np.random.SeedSequence([int(base_seed) & SEED_MASK, int(index)]).generate_state(1, np.uint64)
    return int(state[0])


class RngState:
    """A seeded random stream. Not shared between threads; spawn instead."""

    algorithm = RNG_ALGORITHM

    def __init__(self, seed: int = 0):
        self.seed = int(seed) & SEED_MASK
        self._gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed)))

    def __repr__(self):
        return f"RngState(seed={self.seed})"

    def spawn(self, index: int) -> "RngState":
        return RngState(derive_seed(self.seed, index))

    def uniform(self, size=None):
        """Uniform draws on (0, 1]."""
        return 1.0 - self._gen.random(size)


def standard_normals(rng: RngState, size) -> np.ndarray:
    """Box-Muller standard normals, filled in C order."""
    shape = (size,) if isinstance(size, int) else tuple(size)
    count = int(np.prod(shape))
    pairs = (count + 1) // 2
    u = rng.uniform(2 * pairs)
    radius = np.sqrt(-2.0 * np.log(u[0::2]))
    angle = 2.0 * math.pi * u[1::2]
    z = np.empty(2 * pairs)
    z[0::2] = radius * np.cos(angle)
    z[1::2] = radius * np.sin(angle)
    return z[:count].reshape(shape)


def sample_standard_normal(rng: RngState) -> float:
    return float(standard_normals(rng, 1)[0])


def sample_mvn(mean, covariance, rng: RngState, size=None) -> np.ndarray:
    """``mean + L z`` with ``L`` the Cholesky factor of ``covariance``.

    With ``size`` given, returns a ``size x d`` array of independent rows.
    """
    mean = np.asarray(mean, dtype=float).ravel()
    L = cholesky(covariance)
    if L.shape[0] != mean.size:
        raise UsageError(f"mean has {mean.size} entries but covariance is {L.shape[0]}x{L.shape[0]}")
    if size is None:
        return mean + L @ standard_normals(rng, mean.size)
    return mean + standard_normals(rng, (size, mean.size)) @ L.T


def triangular_inverse_cdf(u, a, c, b):
    """Quantile function of the triangular distribution (lower a, mode c, upper b).

    Vectorised over ``u`` and ``c``.
    """
    u = np.asarray(u, dtype=float)
    c = np.asarray(c, dtype=float)
    if np.any((u < 0) | (u > 1)) or not np.all(np.isfinite(u)):
        raise UsageError("triangular_inverse_cdf: u must lie in [0, 1]")
    if not a < b or np.any((c < a) | (c > b)):
        raise UsageError(f"triangular_inverse_cdf: need a <= c <= b and a < b, got ({a}, {c}, {b})")
    span = b - a
    split = (c - a) / span
    left = a + np.sqrt(u * span * (c - a))
    right = b - np.sqrt((1.0 - u) * span * (b - c))
    x = np.where(u <= split, left, right)
    return float(x) if x.ndim == 0 else x


class ScenarioKind(str, enum.Enum):
    NORMAL = "normal"
    NORMAL_MIXED = "normal-mixed"
    NORMAL_CORRELATED = "normal-correlated"
    SYSTEMIC_CORRELATED = "systemic-correlated"

    @classmethod
    def parse(cls, value) -> "ScenarioKind":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower().replace("_", "-")
        aliases = {k.value.replace("-", ""): k for k in cls}
        kind = aliases.get(text.replace("-", ""))
        if kind is None:
            raise UsageError(f"unknown scenario {value!r}; choose from {', '.join(k.value for k in cls)}")
        return kind

    @property
    def correlated(self) -> bool:
        return self in (ScenarioKind.NORMAL_CORRELATED, ScenarioKind.SYSTEMIC_CORRELATED)


@dataclass(frozen=True)
class ScenarioSpec:
    """Flat description of one data-generating process.

    ``high_variance_block`` and ``correlated_block`` default to the first
    ``min(3, indicators)`` columns. Systemic marginals are triangular on
    ``[tri_lower, tri_upper]`` with modes drawn from the symmetric triangular
    distribution on the same support.
    """

    kind: ScenarioKind = ScenarioKind.NORMAL
    systems: int = 20
    indicators: int = 5
    mean: float = 1.0
    sigma: float = 1.0
    sigma_high: float = 2.0
    high_variance_block: int | None = None
    correlated_block: int | None = None
    covariance: float = 0.99
    tri_lower: float = 0.0
    tri_upper: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ScenarioKind.parse(self.kind))
        if self.systems < 2:
            raise UsageError("a scenario needs at least 2 systems")
        if self.indicators < 1:
            raise UsageError("a scenario needs at least 1 indicator")
        for name in ("high_variance_block", "correlated_block"):
            size = getattr(self, name)
            if size is not None and not 0 <= size <= self.indicators:
                raise UsageError(f"{name} must be between 0 and {self.indicators}")
        if not -1.0 < self.covariance < 1.0:
            raise UsageError("covariance must lie in (-1, 1) for unit-variance indicators")
        if self.sigma <= 0 or self.sigma_high <= 0:
            raise UsageError("standard deviations must be positive")
        if not self.tri_lower < self.tri_upper:
            raise UsageError("triangular bounds need tri_lower < tri_upper")

    @property
    def high_block(self) -> int:
        return min(3, self.indicators) if self.high_variance_block is None else self.high_variance_block

    @property
    def block(self) -> int:
        return min(3, self.indicators) if self.correlated_block is None else self.correlated_block

    @property
    def contrast_block(self) -> int:
        """Size of the correlated block, or 0 when the scenario has none."""
        return self.block if self.kind.correlated else 0

    def correlation_matrix(self) -> np.ndarray:
        r = np.eye(self.indicators)
        k = self.block
        r[:k, :k] = self.covariance
        np.fill_diagonal(r, 1.0)
        return r

    def to_record(self) -> dict:
        record = asdict(self)
        record["kind"] = self.kind.value
        return record

    @classmethod
    def from_record(cls, record: dict) -> "ScenarioSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(record) - known
        if unknown:
            raise UsageError(f"unknown scenario field(s): {', '.join(sorted(unknown))}")
        return cls(**record)


def draw_modes(spec: ScenarioSpec, rng: RngState) -> np.ndarray:
    """Sorted triangular modes for a systemic scenario (its first draws)."""
    lo, hi = spec.tri_lower, spec.tri_upper
    return np.sort(triangular_inverse_cdf(rng.uniform(spec.indicators), lo, (lo + hi) / 2.0, hi))


def generate(spec: ScenarioSpec, rng: RngState) -> IndicatorMatrix:
    """Draw one unscaled ``systems x indicators`` dataset."""
    m, n = spec.systems, spec.indicators
    kind = spec.kind
    if kind is ScenarioKind.NORMAL:
        values = spec.mean + spec.sigma * standard_normals(rng, (m, n))
    elif kind is ScenarioKind.NORMAL_MIXED:
        sigmas = np.full(n, spec.sigma)
        sigmas[: spec.high_block] = spec.sigma_high
        values = spec.mean + standard_normals(rng, (m, n)) * sigmas
    elif kind is ScenarioKind.NORMAL_CORRELATED:
        values = sample_mvn(np.full(n, spec.mean), spec.correlation_matrix(), rng, size=m)
    else:
        lo, hi = spec.tri_lower, spec.tri_upper
        modes = draw_modes(spec, rng)
        z = sample_mvn(np.zeros(n), spec.correlation_matrix(), rng, size=m)
        values = triangular_inverse_cdf(ndtr(z), lo, modes, hi)
    return IndicatorMatrix.from_array(values, scaled=False)
