"""Landmark selection, lazy witness complexes and persistence over the two-element field."""

from .complex import (
    FilteredComplex,
    flag_complex,
    lazy_witness_complex,
    lazy_witness_edges,
)
from .landmarks import LandmarkSet, maxmin_landmarks
from .reduction import Barcode, Interval, reduce_and_extract

__all__ = [
    "Barcode",
    "FilteredComplex",
    "Interval",
    "LandmarkSet",
    "flag_complex",
    "lazy_witness_complex",
    "lazy_witness_edges",
    "maxmin_landmarks",
    "reduce_and_extract",
]
