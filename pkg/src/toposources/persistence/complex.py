"""Filtered simplicial complexes and the lazy witness construction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from ..embedding import PointCloud
from ..errors import InvalidParam
from .landmarks import LandmarkSet

Simplex = tuple[int, ...]


def _sort_key(item: tuple[Simplex, float]):
    simplex, value = item
    return value, len(simplex), simplex


@dataclass(frozen=True)
class FilteredComplex:
    """Simplices with entry values, ordered by (value, dimension, vertices).

    Build with :meth:`from_simplices`, which sorts. Validity of the filtration
    (every face present and entering no later) is checked by the reduction.
    """

    simplices: tuple[Simplex, ...]
    values: tuple[float, ...]
    max_dimension: int
    max_filtration: float

    @classmethod
    def from_simplices(cls, items: Iterable[tuple[Sequence[int], float]], max_dimension: int | None = None,
                       max_filtration: float | None = None) -> "FilteredComplex":
        pairs = sorted(((tuple(sorted(s)), float(v)) for s, v in items), key=_sort_key)
        simplices = tuple(p[0] for p in pairs)
        values = tuple(p[1] for p in pairs)
        if max_dimension is None:
            max_dimension = max((len(s) - 1 for s in simplices), default=0)
        if max_filtration is None:
            max_filtration = max(values, default=0.0)
        if any(v < 0 or v > max_filtration for v in values):
            raise InvalidParam("filtration values must lie in [0, max_filtration]")
        return cls(simplices, values, int(max_dimension), float(max_filtration))

    def __len__(self) -> int:
        return len(self.simplices)

    def dimension_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for s in self.simplices:
            counts[len(s) - 1] = counts.get(len(s) - 1, 0) + 1
        return counts


def witness_distances(cloud: PointCloud | NDArray, landmarks: LandmarkSet) -> NDArray[np.float64]:
    """``N x L`` Euclidean distances from every witness to every landmark."""
    pts = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=np.float64)
    lm = pts[list(landmarks.indices)]
    sq = (pts**2).sum(1)[:, None] + (lm**2).sum(1)[None, :] - 2.0 * pts @ lm.T
    return np.sqrt(np.maximum(sq, 0.0))


def lazy_witness_edges(dist: NDArray[np.float64], nu: int) -> NDArray[np.float64]:
    """Symmetric ``L x L`` matrix of edge entry times.

    Edge ``{a, b}`` enters at the smallest ``t >= 0`` such that some witness ``x``
    has ``max(d(x, a), d(x, b)) <= t + m_nu(x)``, where ``m_nu(x)`` is the distance
    from ``x`` to its ``nu``-th nearest landmark and ``m_0 = 0``.
    """
    n_wit, n_lm = dist.shape
    if nu < 0:
        raise InvalidParam("nu must be non-negative")
    if nu == 0:
        slack = np.zeros(n_wit)
    else:
        k = min(nu, n_lm) - 1
        slack = np.partition(dist, k, axis=1)[:, k]
    shifted = dist - slack[:, None]
    edges = np.zeros((n_lm, n_lm))
    for a in range(n_lm - 1):
        cand = np.maximum(shifted[:, a : a + 1], shifted[:, a + 1 :]).min(axis=0)
        edges[a, a + 1 :] = cand
        edges[a + 1 :, a] = cand
    np.maximum(edges, 0.0, out=edges)
    return edges


def snap_to_grid(values: NDArray[np.float64], max_filtration: float, divisions: int | None) -> NDArray[np.float64]:
    """Round entry times up to the next multiple of ``max_filtration / divisions``."""
    if divisions is None:
        return values
    if divisions < 1:
        raise InvalidParam("filtration divisions must be positive")
    # tolerance absorbs round-off so exact grid values are not bumped a step up
    idx = np.maximum(np.ceil(values * divisions / max_filtration - 1e-9), 0.0)
    return idx * max_filtration / divisions


def flag_complex(edge_values: NDArray[np.float64], max_filtration: float, max_dimension: int) -> FilteredComplex:
    """Clique expansion: a simplex enters when its last edge does.

    Vertices enter at 0. Only edges with value ``<= max_filtration`` are used.
    """
    if max_dimension < 0:
        raise InvalidParam("max_dimension must be non-negative")
    n = edge_values.shape[0]
    items: list[tuple[Simplex, float]] = []
    ev = edge_values.tolist()
    upper = [[int(w) for w in np.flatnonzero(edge_values[v, v + 1 :] <= max_filtration) + v + 1]
             for v in range(n)]
    upper_sets = [set(u) for u in upper]

    def extend(simplex: Simplex, value: float, cands: list[int]):
        items.append((simplex, value))
        if len(simplex) > max_dimension:
            return
        for i, w in enumerate(cands):
            row = ev[w]
            val = max(value, max(row[u] for u in simplex))
            nw = upper_sets[w]
            extend(simplex + (w,), val, [c for c in cands[i + 1 :] if c in nw])

    for v in range(n):
        extend((v,), 0.0, upper[v])
    return FilteredComplex.from_simplices(items, max_dimension, max_filtration)


def lazy_witness_complex(cloud: PointCloud | NDArray, landmarks: LandmarkSet, nu: int = 1,
                         max_filtration: float = 0.24, max_dimension: int = 2,
                         divisions: int | None = 100) -> FilteredComplex:
    """Lazy witness filtration on ``landmarks`` with every point of ``cloud`` as a witness.

    Entry times are snapped up to a grid of ``divisions`` steps on
    ``[0, max_filtration]``; ``divisions=None`` keeps exact values.
    """
    if not max_filtration > 0:
        raise InvalidParam("max_filtration must be positive")
    edges = snap_to_grid(lazy_witness_edges(witness_distances(cloud, landmarks), nu),
                         max_filtration, divisions)
    return flag_complex(edges, max_filtration, max_dimension)
