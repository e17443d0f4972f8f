import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toposources.embedding import PointCloud, embed
from toposources.estimation import (
    BettiSequence,
    Status,
    TdaConfig,
    binomial_row,
    estimate_sources,
    estimate_to_json,
    extract_betti,
    match_binomial,
)
from toposources.mixing import ObservationSet
from toposources.persistence import Barcode, Interval
from toposources.signals import constant_tone, synthesize


def test_half_interval_rule_example():
    b = Barcode({0: (Interval(0, 0.24, True),),
                 1: (Interval(0, 0.12), Interval(0, 0.11), Interval(0.2, 0.21))}, 0.24, 2)
    assert extract_betti(b).betti == (1, 1)


def test_empty_barcode_gives_zeros():
    assert extract_betti(Barcode({}, 0.24, 3)).betti == (0, 0, 0)


def test_infinite_intervals_count_to_ceiling():
    b = Barcode({1: (Interval(0.11, 0.24, True), Interval(0.13, 0.24, True))}, 0.24, 2)
    assert extract_betti(b).betti == (0, 1)


def test_top_dimension_is_excluded_by_default():
    b = Barcode({0: (Interval(0, 0.24, True),), 2: (Interval(0, 0.24, True),)}, 0.24, 2)
    assert extract_betti(b).betti == (1, 0)
    assert extract_betti(b, dimensions=range(3)).betti == (1, 0, 1)


@pytest.mark.parametrize("seq,status,n,expected", [
    ((1, 3, 3, 1), Status.MATCH, 3, (1, 3, 3, 1)),
    ((1, 3, 3, 1, 0, 0, 0, 0, 0), Status.MATCH, 3, (1, 3, 3, 1)),
    ((1, 1), Status.MATCH, 1, (1, 1)),
    ((1,), Status.MATCH, 0, (1,)),
    ((1, 3, 2, 1), Status.NO_MATCH, None, (1, 3, 3, 1)),
    ((1, 0, 1), Status.NO_MATCH, None, (1,)),
    ((), Status.DEGENERATE, None, None),
    ((0, 0), Status.DEGENERATE, None, None),
    ((2, 1), Status.DEGENERATE, None, None),
])
def test_match_examples(seq, status, n, expected):
    est = match_binomial(BettiSequence(seq))
    assert (est.status, est.n, est.betti_expected) == (status, n, expected)


@pytest.mark.parametrize("n", range(11))
def test_match_soundness(n):
    row = tuple(math.comb(n, k) for k in range(n + 1))
    est = match_binomial(BettiSequence(row + (0, 0)))
    assert est.status is Status.MATCH and est.n == n


def _is_pascal_row(seq):
    s = list(seq)
    while s and s[-1] == 0:
        s.pop()
    return any(s == [math.comb(n, k) for k in range(n + 1)] for n in range(len(s) + 1)) if s else False


@settings(max_examples=300)
@given(st.lists(st.integers(0, 12), max_size=8))
def test_match_completeness_and_uniqueness(seq):
    est = match_binomial(BettiSequence(tuple(seq)))
    assert est.matched == _is_pascal_row(seq)
    if est.matched:
        hits = [n for n in range(len(seq) + 1) if BettiSequence(tuple(seq)).stripped() == binomial_row(n)]
        assert hits == [est.n]


def test_exhaustive_small_sequences():
    for length in range(1, 5):
        for seq in itertools.product(range(5), repeat=length):
            assert match_binomial(BettiSequence(seq)).matched == _is_pascal_row(seq)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.floats(0, 1), st.floats(0, 1)), max_size=20),
       st.floats(0.01, 1), st.floats(0.01, 1))
def test_extract_monotone_in_fraction(raw, f1, f2):
    ivs: dict[int, list[Interval]] = {}
    for d, a, b in raw:
        ivs.setdefault(d, []).append(Interval(min(a, b), max(a, b)))
    bc = Barcode({d: tuple(v) for d, v in ivs.items()}, 1.0, 4)
    lo, hi = sorted((f1, f2))
    assert all(x >= y for x, y in zip(extract_betti(bc, lo).betti, extract_betti(bc, hi).betti))


def test_single_tone_is_one_source():
    x = synthesize(constant_tone(12345.0), 1.0, 1e6, 20000)
    cloud = embed(ObservationSet((x,)), 0.1)
    est, diag = estimate_sources(cloud, TdaConfig(landmarks=40, max_dimension=2))
    assert est.status is Status.MATCH and est.n == 1
    assert len(diag.landmark_indices) == 40
    assert diag.cover_radius > 0
    assert set(diag.timings) == {"landmarks", "complex", "reduction", "matching"}


def test_estimate_json_schema():
    est = match_binomial(BettiSequence((1, 3, 3, 1, 0)))
    doc = json.loads(estimate_to_json(est, TdaConfig(), seed=4))
    assert doc == {"status": "match", "n": 3, "betti_observed": [1, 3, 3, 1, 0],
                   "betti_expected": [1, 3, 3, 1], "persistence_fraction": 0.5,
                   "landmarks": 150, "max_filtration": 0.24, "seed": 4}


def test_contractible_blob_is_zero_sources():
    pts = np.random.default_rng(0).normal(scale=0.02, size=(500, 2))
    est, _ = estimate_sources(PointCloud(pts), TdaConfig(landmarks=30, max_dimension=2))
    assert est.status is Status.MATCH and est.n == 0
