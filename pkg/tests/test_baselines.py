import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toposources.baselines import (
    EigenSpectrum,
    aic_criterion,
    aic_estimate,
    mdl_criterion,
    mdl_estimate,
    sample_autocorrelation,
)
from toposources.errors import DegenerateSpectrum, TooFewSnapshots
from toposources.mixing import ObservationSet
from toposources.signals import SampledSignal, constant_tone, synthesize


def _snapshots(seed, n, snr_db, m=8, k=3):
    g = np.random.default_rng(seed)
    noise = (g.normal(size=(m, n)) + 1j * g.normal(size=(m, n))) / np.sqrt(2) * 10 ** (-snr_db / 20)
    if k == 0:
        return noise
    a = (g.normal(size=(m, k)) + 1j * g.normal(size=(m, k))) / np.sqrt(2)
    s = (g.normal(size=(k, n)) + 1j * g.normal(size=(k, n))) / np.sqrt(2)
    return a @ s + noise


def _rates(n_sources, n, snr_db, seeds=100):
    mdl = aic = 0
    for seed in range(seeds):
        _, spec = sample_autocorrelation(_snapshots(seed, n, snr_db, k=n_sources))
        mdl += mdl_estimate(spec) == n_sources
        aic += aic_estimate(spec) == n_sources
    return mdl / seeds, aic / seeds


def test_white_noise_eigenvalues_near_one():
    g = np.random.default_rng(0)
    y = (g.normal(size=(4, 100000)) + 1j * g.normal(size=(4, 100000))) / np.sqrt(2)
    r, spec = sample_autocorrelation(y)
    np.testing.assert_allclose(spec.eigenvalues, 1.0, rtol=0.05)
    np.testing.assert_allclose(r, r.conj().T)


def test_white_real_noise_analytic_snapshots():
    # analytic snapshots of unit-variance real noise carry twice the power
    g = np.random.default_rng(1)
    obs = ObservationSet(tuple(SampledSignal(g.normal(size=100000), 1.0) for _ in range(3)))
    _, spec = sample_autocorrelation(obs)
    np.testing.assert_allclose(spec.eigenvalues, 2.0, rtol=0.05)
    _, real = sample_autocorrelation(obs, use_analytic=False)
    np.testing.assert_allclose(real.eigenvalues, 1.0, rtol=0.05)


def test_identical_tone_channels_are_rank_one():
    x = synthesize(constant_tone(1e4), 1.0, 1e6, 20000)
    _, spec = sample_autocorrelation(ObservationSet((x, x)))
    assert spec.eigenvalues[1] / spec.eigenvalues[0] < 1e-6


def test_zero_input():
    r, spec = sample_autocorrelation(np.zeros((3, 50)))
    assert np.all(r == 0) and spec.eigenvalues == (0.0, 0.0, 0.0)
    with pytest.raises(DegenerateSpectrum):
        mdl_estimate(spec)


def test_too_few_snapshots():
    with pytest.raises(TooFewSnapshots):
        sample_autocorrelation(np.ones((4, 3)))


def test_spectrum_invariants():
    with pytest.raises(ValueError):
        EigenSpectrum((1.0, 2.0), 10)
    with pytest.raises(ValueError):
        EigenSpectrum((1.0, -1.0), 10)


def test_criteria_by_hand():
    spec = EigenSpectrum((4.0, 1.0), 10)
    g, a = 2.0, 2.5
    l0 = -10 * 2 * np.log(g / a)
    np.testing.assert_allclose(mdl_criterion(spec), [l0, 0.5 * 3 * np.log(10)])
    np.testing.assert_allclose(aic_criterion(spec), [2 * l0, 6.0])


def test_clamping_keeps_rank_deficient_spectra_finite():
    spec = EigenSpectrum((3.0, 2.0, 0.0, 0.0), 1000)
    assert np.all(np.isfinite(mdl_criterion(spec)))
    assert mdl_estimate(spec) == 2


def test_mdl_detects_three_sources():
    mdl, _ = _rates(3, 10000, 20.0)
    assert mdl >= 0.95


@pytest.mark.xfail(strict=True, reason="classical AIC overestimates in about 10% of seeds at any N")
def test_aic_detects_three_sources():
    _, aic = _rates(3, 10000, 20.0)
    assert aic >= 0.95


def test_mdl_noise_only_returns_zero():
    mdl, _ = _rates(0, 10000, 20.0)
    assert mdl >= 0.95


@pytest.mark.xfail(strict=True, reason="classical AIC overestimates in about 10% of seeds at any N")
def test_aic_noise_only_returns_zero():
    _, aic = _rates(0, 10000, 20.0)
    assert aic >= 0.95


def test_aic_detection_rate_is_well_above_chance():
    _, aic3 = _rates(3, 10000, 20.0)
    _, aic0 = _rates(0, 10000, 20.0)
    assert aic3 >= 0.8 and aic0 >= 0.8


def test_mdl_consistency_in_snapshots():
    # weak sources so small N misses them
    rates = [_rates(3, n, -15.0, seeds=40)[0] for n in (1000, 10000, 100000)]
    assert rates[0] <= rates[1] <= rates[2]
    assert rates[2] > rates[0]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(1e-3, 1e3), min_size=2, max_size=10), st.integers(10, 10**6),
       st.floats(1e-6, 1e6))
def test_scale_invariance_and_range(ev, n, factor):
    spec = EigenSpectrum(tuple(sorted(ev, reverse=True)), n)
    m = len(ev)
    for est in (mdl_estimate, aic_estimate):
        k = est(spec)
        assert 0 <= k <= m - 1
        assert est(spec.scaled(factor)) == k
