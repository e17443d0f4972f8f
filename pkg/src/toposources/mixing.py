"""Array observation model: each channel sums every source with its own gain and phase.

Channel ``i`` receives ``sum_j R[i, j] * A_j * cos(alpha_j + phi[i, j])``. Using the
angle-sum identity this is a real linear map of the stacked analytic pairs
``(x_j, x~_j)``; the map's 2x2 blocks are rotations-with-scale, i.e. complex
numbers ``U[i, j] = R[i, j] * exp(1j * phi[i, j])``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import DimensionMismatch, InvalidParam, InvalidRange
from .signals import AnalyticPair, SampledSignal

RANK_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class MixingSystem:
    magnitudes: NDArray[np.float64]
    phases: NDArray[np.float64]

    def __post_init__(self):
        r = np.array(self.magnitudes, dtype=np.float64, ndmin=2)
        p = np.array(self.phases, dtype=np.float64, ndmin=2)
        if r.ndim != 2 or r.shape != p.shape:
            raise DimensionMismatch(f"magnitudes {r.shape} and phases {p.shape} must be equal m x n")
        if not np.all(r > 0):
            raise InvalidParam("all magnitudes must be positive")
        if not np.all(np.abs(p) <= math.pi):
            raise InvalidParam("all phases must lie in [-pi, pi]")
        r.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "magnitudes", r)
        object.__setattr__(self, "phases", p)

    @property
    def m_observations(self) -> int:
        return self.magnitudes.shape[0]

    @property
    def n_sources(self) -> int:
        return self.magnitudes.shape[1]

    def dual(self) -> NDArray[np.complex128]:
        """Complex dual ``U`` with ``U[i, j] = R[i, j] * exp(1j * phi[i, j])``."""
        return self.magnitudes * np.exp(1j * self.phases)

    @classmethod
    def from_dual(cls, u: NDArray[np.complex128]) -> "MixingSystem":
        u = np.asarray(u, dtype=np.complex128)
        return cls(np.abs(u), np.angle(u))

    def to_dict(self) -> dict:
        return {"magnitudes": self.magnitudes.tolist(), "phases": self.phases.tolist()}


@dataclass(frozen=True)
class ObservationSet:
    channels: tuple[SampledSignal, ...]

    def __post_init__(self):
        chans = tuple(self.channels)
        if not chans:
            raise DimensionMismatch("an observation set needs at least one channel")
        n, fs = len(chans[0]), chans[0].sample_rate_hz
        for c in chans[1:]:
            if len(c) != n or c.sample_rate_hz != fs:
                raise DimensionMismatch("all channels must share length and sample rate")
        object.__setattr__(self, "channels", chans)

    def __len__(self) -> int:
        return len(self.channels)

    @property
    def n_samples(self) -> int:
        return len(self.channels[0])

    @property
    def sample_rate_hz(self) -> float:
        return self.channels[0].sample_rate_hz

    def as_array(self) -> NDArray[np.float64]:
        """Channels stacked as an ``m x N`` array."""
        return np.stack([c.samples for c in self.channels])


def random_mixing(n_sources: int, m_observations: int, r_range: Sequence[float],
                  rng_seed: int) -> MixingSystem:
    """Draw gains uniformly from ``r_range`` and phases uniformly from ``[-pi, pi]``."""
    lo, hi = (float(v) for v in r_range)
    if not 0 < lo <= hi:
        raise InvalidRange(f"need 0 < lo <= hi, got [{lo}, {hi}]")
    if n_sources < 1 or m_observations < 1:
        raise InvalidParam("n_sources and m_observations must be positive")
    rng = np.random.default_rng(rng_seed)
    shape = (m_observations, n_sources)
    r = np.full(shape, lo) if lo == hi else rng.uniform(lo, hi, size=shape)
    phi = rng.uniform(-math.pi, math.pi, size=shape)
    return MixingSystem(r, phi)


def mix(system: MixingSystem, sources: Sequence[AnalyticPair]) -> ObservationSet:
    """Observations via the angle-sum expansion ``R cos(phi) x - R sin(phi) x~``."""
    if len(sources) != system.n_sources:
        raise DimensionMismatch(f"expected {system.n_sources} sources, got {len(sources)}")
    n, fs = len(sources[0]), sources[0].sample_rate_hz
    if any(len(s) != n or s.sample_rate_hz != fs for s in sources):
        raise DimensionMismatch("sources must share length and sample rate")
    x = np.stack([s.in_phase.samples for s in sources])
    xq = np.stack([s.quadrature.samples for s in sources])
    r, phi = system.magnitudes, system.phases
    y = (r * np.cos(phi)) @ x - (r * np.sin(phi)) @ xq
    return ObservationSet(tuple(SampledSignal(row, fs) for row in y))


def realization_matrix(system: MixingSystem) -> NDArray[np.float64]:
    """Real ``2m x 2n`` map from ``(x_1, x~_1, ...)`` to ``(y_1, y~_1, ...)``."""
    r, phi = system.magnitudes, system.phases
    c, s = r * np.cos(phi), r * np.sin(phi)
    m, n = r.shape
    t = np.empty((2 * m, 2 * n))
    t[0::2, 0::2] = c
    t[0::2, 1::2] = -s
    t[1::2, 0::2] = s
    t[1::2, 1::2] = c
    return t


def rank_tolerance(a: NDArray, rtol: float = RANK_RTOL) -> float:
    sv = np.linalg.svd(np.atleast_2d(a), compute_uv=False)
    return max(a.shape) * (sv[0] if sv.size else 0.0) * rtol


def numerical_rank(a: NDArray, tol: float | None = None) -> int:
    """Count singular values above ``tol`` (default ``max(shape) * sigma_max * 1e-10``)."""
    sv = np.linalg.svd(np.atleast_2d(a), compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    if tol is None:
        tol = max(a.shape) * sv[0] * RANK_RTOL
    return int(np.sum(sv > tol))


def independence_report(system: MixingSystem) -> dict:
    """Rank diagnostics of the complex dual and its real realization."""
    u = system.dual()
    t = realization_matrix(system)
    sv = np.linalg.svd(u, compute_uv=False)
    # T's singular values are U's, each repeated twice; one threshold keeps the ranks comparable.
    tol = rank_tolerance(u)
    dual_rank = numerical_rank(u, tol)
    smallest = sv[system.n_sources - 1] if sv.size >= system.n_sources else 0.0
    cond = float(sv[0] / smallest) if smallest > 0 else math.inf
    return {
        "dual_rank": dual_rank,
        "t_rank": numerical_rank(t, tol),
        "condition_number": cond,
        "full_column_rank": dual_rank == system.n_sources,
    }
