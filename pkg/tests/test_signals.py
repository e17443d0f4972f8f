import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toposources.errors import (
    InvalidFraction,
    InvalidParam,
    NyquistViolation,
    ResultEmpty,
    SignalTooShort,
    ZeroPowerSignal,
)
from toposources.signals import (
    AnalyticPair,
    PhaseProfile,
    SampledSignal,
    add_awgn,
    analytic_pair,
    constant_tone,
    linear_chirp,
    sinusoidal_sweep,
    synthesize,
    trim_fraction,
)

from .oracles import stft_peak_track

FS = 1e6


def test_constant_tone_samples():
    x = synthesize(constant_tone(100.0), 1.0, 1000.0, 4)
    expected = [1.0, math.cos(0.2 * math.pi), math.cos(0.4 * math.pi), math.cos(0.6 * math.pi)]
    np.testing.assert_allclose(x.samples, expected, rtol=0, atol=1e-12)
    assert x.sample_rate_hz == 1000.0


def test_flat_chirp_is_a_tone():
    tone = synthesize(constant_tone(1234.5, 0.4), 2.0, 1e4, 500)
    chirp = synthesize(linear_chirp(1234.5, 1234.5, 0.4), 2.0, 1e4, 500)
    np.testing.assert_allclose(chirp.samples, tone.samples, atol=1e-12)


def test_chirp_spectral_peak_moves_up():
    duration = 0.03
    prof = linear_chirp(50e3, 450e3, 0.0, duration)
    x = synthesize(prof, 1.0, FS, 30000)
    track = stft_peak_track(x.samples, FS)
    bin_hz = FS / 1024
    # non-decreasing up to one-bin jitter
    assert np.all(np.diff(track) >= -bin_hz)
    centers = (np.arange(track.size) * 512 + 512) / FS
    np.testing.assert_allclose(track, prof.instantaneous_frequency(centers), atol=2 * bin_hz)
    assert abs(track[0] - 50e3) < 10e3
    # last frame centre sits half a window before the end of the sweep
    assert abs(track[-1] - 450e3) < 15e3


@pytest.mark.parametrize("prof", [constant_tone(500e3), constant_tone(0.0),
                                  linear_chirp(10e3, 600e3, 0.0, 0.03),
                                  sinusoidal_sweep(250e3, 260e3, 100.0, 0.0, 0.03)])
def test_nyquist_violation(prof):
    with pytest.raises(NyquistViolation):
        synthesize(prof, 1.0, FS, 30000)


@pytest.mark.parametrize("amp,fs,n", [(0.0, FS, 10), (1.0, -1.0, 10), (1.0, FS, 0), (-2.0, FS, 10)])
def test_invalid_synthesis_params(amp, fs, n):
    with pytest.raises(InvalidParam):
        synthesize(constant_tone(1e3), amp, fs, n)


def test_phase_profile_rejects_out_of_range_phase():
    with pytest.raises(InvalidParam):
        constant_tone(1e3, initial_phase_rad=4.0)


def test_sampled_signal_invariants():
    with pytest.raises(InvalidParam):
        SampledSignal([], 1.0)
    with pytest.raises(InvalidParam):
        SampledSignal([1.0, float("nan")], 1.0)
    with pytest.raises(InvalidParam):
        SampledSignal([1.0], 0.0)


def test_hilbert_of_cosine_is_sine():
    # off-bin frequency so the window is not an integer number of periods
    n, f = 100000, 12345.0
    k = np.arange(n)
    x = SampledSignal(np.cos(2 * np.pi * f * k / FS), FS)
    p = trim_fraction(analytic_pair(x), 0.1)
    kk = k[10000:90000]
    err = np.abs(p.quadrature.samples - np.sin(2 * np.pi * f * kk / FS))
    assert err.max() < 1e-3
    np.testing.assert_array_equal(p.in_phase.samples, x.samples[10000:90000])


def test_hilbert_of_zeros():
    p = analytic_pair(SampledSignal(np.zeros(64), 10.0))
    assert np.all(p.quadrature.samples == 0)


def test_hilbert_too_short():
    with pytest.raises(SignalTooShort):
        analytic_pair(SampledSignal(np.ones(7), 10.0))


def test_chirp_envelope_is_circle():
    amp = 1.7
    x = synthesize(linear_chirp(60e3, 420e3, 0.2, 0.03), amp, FS, 30000)
    env = trim_fraction(analytic_pair(x), 0.1).envelope_squared
    assert np.max(np.abs(env - amp**2)) / amp**2 < 0.01


def test_trim_lengths():
    x = synthesize(constant_tone(1e3), 1.0, FS, 30000)
    assert len(trim_fraction(analytic_pair(x), 0.10)) == 24000
    p = analytic_pair(SampledSignal(np.arange(10.0), 1.0))
    assert trim_fraction(p, 0.0) == p
    t = trim_fraction(p, 0.25)
    np.testing.assert_array_equal(t.in_phase.samples, np.arange(2.0, 8.0))
    assert len(t.quadrature) == 6


@pytest.mark.parametrize("fraction", [-0.1, 0.5, 0.7])
def test_trim_invalid_fraction(fraction):
    p = analytic_pair(SampledSignal(np.arange(10.0), 1.0))
    with pytest.raises(InvalidFraction):
        trim_fraction(p, fraction)


def test_trim_result_empty():
    # unreachable from analytic_pair (length >= 8), so build the pair directly
    x = SampledSignal(np.arange(3.0), 1.0)
    with pytest.raises(ResultEmpty):
        trim_fraction(AnalyticPair(x, x), 0.4)


def test_awgn_disabled():
    x = synthesize(constant_tone(1e3), 1.0, FS, 100)
    assert add_awgn(x, math.inf, 3) is x


def test_awgn_variance():
    rng = np.random.default_rng(0)
    x = SampledSignal(rng.choice([-1.0, 1.0], 100000), 1.0)
    noise = add_awgn(x, 20.0, 42).samples - x.samples
    assert abs(noise.var() - 0.01) / 0.01 < 0.05
    assert abs(noise.mean()) < 3 * math.sqrt(0.01 / 100000) * 2


def test_awgn_deterministic():
    x = synthesize(constant_tone(1e3), 1.0, FS, 1000)
    a, b = add_awgn(x, 15.0, 9), add_awgn(x, 15.0, 9)
    assert a.samples.tobytes() == b.samples.tobytes()
    assert add_awgn(x, 15.0, 10) != a


def test_awgn_zero_power():
    with pytest.raises(ZeroPowerSignal):
        add_awgn(SampledSignal(np.zeros(10), 1.0), 10.0, 0)


def test_profile_dict_round_trip():
    for prof in (constant_tone(1e3, 0.1, 0.5), linear_chirp(1e3, 2e3, -0.3, 0.1),
                 sinusoidal_sweep(5e3, 1e3, 20.0, 1.0, 0.2)):
        assert PhaseProfile.from_dict(prof.to_dict()) == prof


def test_analytic_pair_rejects_mismatch():
    with pytest.raises(InvalidParam):
        AnalyticPair(SampledSignal(np.ones(8), 1.0), SampledSignal(np.ones(9), 1.0))


# -- properties -------------------------------------------------------------

margin = 0.05 * FS
band = st.floats(margin, FS / 2 - margin)


@st.composite
def monocomponents(draw):
    kind = draw(st.sampled_from(["tone", "chirp", "sweep"]))
    phase = draw(st.floats(-math.pi, math.pi))
    if kind == "tone":
        prof = constant_tone(draw(band), phase, 0.03)
    elif kind == "chirp":
        prof = linear_chirp(draw(band), draw(band), phase, 0.03)
    else:
        dev = draw(st.floats(1e3, 150e3))
        center = draw(st.floats(margin + dev, FS / 2 - margin - dev))
        prof = sinusoidal_sweep(center, dev, draw(st.floats(10.0, 300.0)), phase, 0.03)
    return prof, draw(st.floats(0.1, 10.0))


@settings(max_examples=25, deadline=None)
@given(monocomponents())
def test_circle_invariant(case):
    prof, amp = case
    env = trim_fraction(analytic_pair(synthesize(prof, amp, FS, 30000)), 0.1).envelope_squared
    assert np.max(np.abs(env - amp**2)) / amp**2 < 0.01


@settings(max_examples=25, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 2**32 - 1), st.integers(8, 400))
def test_hilbert_linearity(a, b, seed, n):
    rng = np.random.default_rng(seed)
    x, y = SampledSignal(rng.normal(size=n), 1.0), SampledSignal(rng.normal(size=n), 1.0)
    lhs = analytic_pair(SampledSignal(a * x.samples + b * y.samples, 1.0)).quadrature.samples
    rhs = a * analytic_pair(x).quadrature.samples + b * analytic_pair(y).quadrature.samples
    scale = max(np.abs(lhs).max(), np.abs(rhs).max(), 1e-300)
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * scale + 1e-12


@settings(max_examples=25, deadline=None)
@given(monocomponents())
def test_phase_increments_below_pi(case):
    prof, _ = case
    alpha = prof.phase(FS, 30000)
    assert alpha[0] == prof.initial_phase_rad
    assert np.all(np.abs(np.diff(alpha)) < math.pi)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-10, 40))
def test_noise_is_pure_function_of_seed(seed, snr):
    x = synthesize(constant_tone(3e3), 1.0, FS, 256)
    assert add_awgn(x, snr, seed) == add_awgn(x, snr, seed)
