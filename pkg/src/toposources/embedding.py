"""Phase-portrait point clouds built from observations and their Hilbert transforms."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import InvalidParam, InvalidStride, ParseError, ResultEmpty
from .mixing import ObservationSet
from .signals import SampledSignal, analytic_pair, trim_count, trim_fraction


@dataclass(frozen=True, eq=False)
class PointCloud:
    """``N x D`` array of points, ``D`` even, with a free-form provenance record.

    Coordinates are interleaved per channel: ``(y_1, y~_1, ..., y_m, y~_m)``.
    """

    points: NDArray[np.float64]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        p = np.array(self.points, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 2 or p.shape[1] % 2:
            raise InvalidParam(f"point cloud must be N x D with N >= 1 and even D >= 2, got {p.shape}")
        if not np.all(np.isfinite(p)):
            raise InvalidParam("point coordinates must be finite")
        p.setflags(write=False)
        object.__setattr__(self, "points", p)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]


def embed(observations: ObservationSet, trim: float = 0.1, normalize: bool = False) -> PointCloud:
    """Interleave each channel with its Hilbert transform after trimming both ends.

    With ``normalize`` each ``(y_i, y~_i)`` coordinate pair is rescaled to unit RMS
    radius, so filtration scales refer to the normalized cloud.
    """
    n = observations.n_samples
    cut = trim_count(n, trim)
    if n - 2 * cut < 2:
        raise ResultEmpty(f"trimming {cut} samples from each end of {n} leaves fewer than 2")
    m = len(observations)
    pts = np.empty((n - 2 * cut, 2 * m))
    for i, ch in enumerate(observations.channels):
        pair = trim_fraction(analytic_pair(ch), trim)
        pts[:, 2 * i] = pair.in_phase.samples
        pts[:, 2 * i + 1] = pair.quadrature.samples
    if normalize:
        radius = np.sqrt(np.mean(pts[:, 0::2] ** 2 + pts[:, 1::2] ** 2, axis=0))
        radius[radius == 0] = 1.0
        pts /= np.repeat(radius, 2)
    prov = {"channels": m, "trim_fraction": trim, "normalized": normalize, "stride": 1}
    return PointCloud(pts, prov)


def embed_arrays(y: NDArray[np.float64], trim: float = 0.1) -> PointCloud:
    """Shortcut for raw ``m x N`` channel arrays; sample rate is irrelevant to geometry."""
    y = np.atleast_2d(y)
    return embed(ObservationSet(tuple(SampledSignal(r, 1.0) for r in y)), trim)


def decimate(cloud: PointCloud, stride: int) -> PointCloud:
    """Keep every ``stride``-th point, starting with the first."""
    if int(stride) != stride or stride < 1:
        raise InvalidStride(f"stride must be a positive integer, got {stride}")
    stride = int(stride)
    prov = dict(cloud.provenance)
    prov["stride"] = prov.get("stride", 1) * stride
    return PointCloud(cloud.points[::stride], prov)


def cloud_to_csv(cloud: PointCloud) -> str:
    """One point per row, full ``repr`` precision, header ``y1,hy1,y2,hy2,...``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    m = cloud.dimension // 2
    w.writerow([c for i in range(1, m + 1) for c in (f"y{i}", f"hy{i}")])
    for row in cloud.points:
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def cloud_from_csv(text: str) -> PointCloud:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty point cloud CSV", 1)
    width = len(rows[0])
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise ParseError(f"expected {width} columns, got {len(row)}", lineno)
        try:
            data.append([float(v) for v in row])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    if not data:
        raise ResultEmpty("point cloud CSV has no points")
    return PointCloud(np.array(data))


def unit_circle_cloud(n_points: int, radius: float = 1.0) -> PointCloud:
    theta = 2 * math.pi * np.arange(n_points) / n_points
    return PointCloud(radius * np.column_stack([np.cos(theta), np.sin(theta)]))
