"""Persistence over the two-element field by boundary-matrix column reduction."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import NonmonotoneFiltration
from .complex import FilteredComplex


@dataclass(frozen=True, order=True)
class Interval:
    """Half-open ``[birth, death)``; open-ended intervals carry ``death = ceiling``."""

    birth: float
    death: float
    infinite: bool = False

    @property
    def length(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True)
class Barcode:
    """Persistence intervals keyed by homology dimension.

    ``max_dimension`` is the top simplex dimension of the source complex;
    homology in that dimension has no cofaces to kill it, so only dimensions
    below it are reliable (see :meth:`reliable_dimensions`).
    """

    intervals: dict[int, tuple[Interval, ...]]
    max_filtration: float
    max_dimension: int = 0
    # paired simplex indices, kept for diagnostics only
    pairs: tuple[tuple[int, int], ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        clean = {int(d): tuple(sorted(iv)) for d, iv in self.intervals.items()}
        for d, ivs in clean.items():
            for iv in ivs:
                if iv.birth > iv.death:
                    raise ValueError(f"interval {iv} in dimension {d} has birth after death")
        object.__setattr__(self, "intervals", clean)

    def dimension(self, d: int) -> tuple[Interval, ...]:
        return self.intervals.get(d, ())

    @property
    def dimensions(self) -> list[int]:
        return sorted(self.intervals)

    def reliable_dimensions(self) -> range:
        return range(max(self.max_dimension, 1))

    def betti_at(self, d: int, t: float) -> int:
        """Number of dimension-``d`` classes alive at filtration value ``t``."""
        return sum(1 for iv in self.dimension(d) if iv.birth <= t and (iv.infinite or t < iv.death))


def boundary_columns(cx: FilteredComplex) -> list[list[int]]:
    """Face indices of each simplex, validating the filtration order."""
    index = {s: i for i, s in enumerate(cx.simplices)}
    cols: list[list[int]] = []
    values = cx.values
    for j, s in enumerate(cx.simplices):
        if len(s) == 1:
            cols.append([])
            continue
        faces = []
        for k in range(len(s)):
            face = s[:k] + s[k + 1 :]
            i = index.get(face)
            if i is None:
                raise NonmonotoneFiltration(f"face {face} of {s} is missing")
            if i > j or values[i] > values[j]:
                raise NonmonotoneFiltration(f"face {face} enters after {s}")
            faces.append(i)
        cols.append(sorted(faces))
    return cols


def reduce_boundary(cols: list[list[int]], dims: list[int]) -> tuple[dict[int, int], set[int]]:
    """Standard column reduction with clearing.

    Dimensions are processed top-down; once a column of dimension ``d`` has
    lowest one ``i``, column ``i`` (dimension ``d - 1``) must reduce to zero and
    is skipped. Returns ``low -> column`` pivots and the set of zero columns.
    """
    by_dim: dict[int, list[int]] = {}
    for j, d in enumerate(dims):
        by_dim.setdefault(d, []).append(j)
    pivot_of: dict[int, int] = {}
    reduced: dict[int, set[int]] = {}
    zero: set[int] = set()
    cleared: set[int] = set()
    for d in sorted(by_dim, reverse=True):
        for j in by_dim[d]:
            if j in cleared or not cols[j]:
                zero.add(j)
                continue
            col = set(cols[j])
            low = max(col)
            while low in pivot_of:
                col ^= reduced[pivot_of[low]]
                if not col:
                    break
                low = max(col)
            if col:
                pivot_of[low] = j
                reduced[j] = col
                cleared.add(low)
            else:
                zero.add(j)
    return pivot_of, zero


def reduce_and_extract(cx: FilteredComplex) -> Barcode:
    """Barcode of a filtered complex; raises :class:`NonmonotoneFiltration` on bad input."""
    cols = boundary_columns(cx)
    dims = [len(s) - 1 for s in cx.simplices]
    pivot_of, zero = reduce_boundary(cols, dims)
    values = cx.values
    intervals: dict[int, list[Interval]] = {d: [] for d in range(cx.max_dimension + 1)}
    paired = set(pivot_of)
    for low, j in pivot_of.items():
        intervals.setdefault(dims[low], []).append(Interval(values[low], values[j]))
    for j in zero:
        if j not in paired:
            intervals.setdefault(dims[j], []).append(Interval(values[j], cx.max_filtration, infinite=True))
    pairs = tuple(sorted(pivot_of.items()))
    return Barcode({d: tuple(v) for d, v in intervals.items()}, cx.max_filtration, cx.max_dimension, pairs)


def betti_curve(barcode: Barcode, d: int, thresholds) -> list[int]:
    return [barcode.betti_at(d, t) for t in thresholds]
