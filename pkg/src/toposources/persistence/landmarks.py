"""Greedy max-min (farthest point) landmark selection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..embedding import PointCloud
from ..errors import InvalidParam, TooManyLandmarks


@dataclass(frozen=True)
class LandmarkSet:
    """Selected point indices in pick order and the resulting cover radius."""

    indices: tuple[int, ...]
    cover_radius: float

    def __post_init__(self):
        if not self.indices:
            raise InvalidParam("a landmark set needs at least one index")
        if len(set(self.indices)) != len(self.indices):
            raise InvalidParam("landmark indices must be distinct")
        if self.cover_radius < 0:
            raise InvalidParam("cover radius must be non-negative")

    def __len__(self) -> int:
        return len(self.indices)


def maxmin_landmarks(cloud: PointCloud | NDArray, n_landmarks: int, first_index: int = 0) -> LandmarkSet:
    """Pick ``n_landmarks`` points, each maximizing its distance to those already chosen.

    Ties go to the lowest index (``argmax`` returns the first maximum). Euclidean metric.
    """
    pts = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=np.float64)
    n = pts.shape[0]
    if n_landmarks < 1:
        raise InvalidParam("need at least one landmark")
    if n_landmarks > n:
        raise TooManyLandmarks(f"requested {n_landmarks} landmarks from {n} points")
    if not 0 <= first_index < n:
        raise InvalidParam(f"first_index {first_index} out of range for {n} points")

    chosen = [first_index]
    nearest = np.linalg.norm(pts - pts[first_index], axis=1)
    # duplicate points can tie a chosen point at distance 0; -inf keeps picks distinct
    candidate = nearest.copy()
    candidate[first_index] = -np.inf
    for _ in range(1, n_landmarks):
        nxt = int(np.argmax(candidate))
        chosen.append(nxt)
        d = np.linalg.norm(pts - pts[nxt], axis=1)
        np.minimum(nearest, d, out=nearest)
        np.minimum(candidate, d, out=candidate)
        candidate[nxt] = -np.inf
    return LandmarkSet(tuple(chosen), float(nearest.max()))
