"""Betti numbers from barcodes and the binomial (torus) source-count match.

The phase portrait of ``n`` incoherent monocomponent sources fills an
``n``-torus, whose Betti numbers are the binomial coefficients ``C(n, d)``.
A barcode whose persistent features follow that row of Pascal's triangle
therefore reports ``n`` sources.
"""

from __future__ import annotations

import enum
import json
import math
import time
from dataclasses import dataclass, field

from .embedding import PointCloud
from .persistence import (
    Barcode,
    lazy_witness_complex,
    maxmin_landmarks,
    reduce_and_extract,
)


@dataclass(frozen=True)
class BettiSequence:
    betti: tuple[int, ...]
    max_filtration: float = 0.0

    def __post_init__(self):
        b = tuple(int(v) for v in self.betti)
        if any(v < 0 for v in b):
            raise ValueError("Betti numbers are non-negative")
        object.__setattr__(self, "betti", b)

    def stripped(self) -> tuple[int, ...]:
        b = list(self.betti)
        while b and b[-1] == 0:
            b.pop()
        return tuple(b)


class Status(str, enum.Enum):
    MATCH = "match"
    NO_MATCH = "no_match"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class SourceCountEstimate:
    status: Status
    n: int | None
    betti_observed: BettiSequence
    betti_expected: tuple[int, ...] | None = None

    @property
    def matched(self) -> bool:
        return self.status is Status.MATCH


def binomial_row(n: int) -> tuple[int, ...]:
    """Coefficients of ``(1 + q)**n``."""
    return tuple(math.comb(n, k) for k in range(n + 1))


def extract_betti(barcode: Barcode, persistence_fraction: float = 0.5,
                  dimensions: range | None = None) -> BettiSequence:
    """Count intervals lasting at least ``persistence_fraction`` of the filtration range.

    Open-ended intervals count with death at the ceiling. By default only the
    dimensions below the complex's top simplex dimension are reported, since
    top-dimensional classes can never die.
    """
    if not 0 < persistence_fraction <= 1:
        raise ValueError("persistence_fraction must lie in (0, 1]")
    dims = barcode.reliable_dimensions() if dimensions is None else dimensions
    # relative slack so a grid-aligned interval exactly at the threshold counts
    threshold = persistence_fraction * barcode.max_filtration * (1 - 1e-9)
    betti = [sum(1 for iv in barcode.dimension(d) if iv.length >= threshold) for d in dims]
    return BettiSequence(tuple(betti), barcode.max_filtration)


def match_binomial(seq: BettiSequence) -> SourceCountEstimate:
    """Guess ``n`` from the first Betti number and verify the whole binomial row."""
    b = seq.stripped()
    if not b or b[0] != 1:
        return SourceCountEstimate(Status.DEGENERATE, None, seq)
    n = b[1] if len(b) > 1 else 0
    expected = binomial_row(n)
    if b == expected:
        return SourceCountEstimate(Status.MATCH, n, seq, expected)
    return SourceCountEstimate(Status.NO_MATCH, None, seq, expected)


@dataclass(frozen=True)
class TdaConfig:
    """Knobs of the topological estimator."""

    landmarks: int = 150
    nu: int = 1
    max_filtration: float = 0.24
    filtration_divisions: int | None = 100
    max_dimension: int = 4
    persistence_fraction: float = 0.5
    first_landmark: int = 0


@dataclass
class EstimateDiagnostics:
    barcode: Barcode
    landmark_indices: tuple[int, ...]
    cover_radius: float
    n_simplices: dict[int, int]
    timings: dict[str, float] = field(default_factory=dict)


def estimate_sources(cloud: PointCloud, config: TdaConfig = TdaConfig()
                     ) -> tuple[SourceCountEstimate, EstimateDiagnostics]:
    """Landmarks, lazy witness complex, persistence, Betti extraction and matching.

    ``NO_MATCH`` and ``DEGENERATE`` outcomes are returned, not raised.
    """
    timings = {}
    t0 = time.perf_counter()
    lm = maxmin_landmarks(cloud, config.landmarks, config.first_landmark)
    t1 = time.perf_counter()
    cx = lazy_witness_complex(cloud, lm, config.nu, config.max_filtration,
                              config.max_dimension, config.filtration_divisions)
    t2 = time.perf_counter()
    barcode = reduce_and_extract(cx)
    t3 = time.perf_counter()
    est = match_binomial(extract_betti(barcode, config.persistence_fraction))
    timings.update(landmarks=t1 - t0, complex=t2 - t1, reduction=t3 - t2,
                   matching=time.perf_counter() - t3)
    diag = EstimateDiagnostics(barcode, lm.indices, lm.cover_radius, cx.dimension_counts(), timings)
    return est, diag


def estimate_to_dict(est: SourceCountEstimate, config: TdaConfig, seed: int | None = None) -> dict:
    return {
        "status": est.status.value,
        "n": est.n,
        "betti_observed": list(est.betti_observed.betti),
        "betti_expected": None if est.betti_expected is None else list(est.betti_expected),
        "persistence_fraction": config.persistence_fraction,
        "landmarks": config.landmarks,
        "max_filtration": config.max_filtration,
        "seed": seed,
    }


def estimate_to_json(est: SourceCountEstimate, config: TdaConfig, seed: int | None = None) -> str:
    return json.dumps(estimate_to_dict(est, config, seed), sort_keys=True)
