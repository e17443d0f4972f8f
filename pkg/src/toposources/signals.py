"""Constant-amplitude monocomponent sources and their analytic pairs.

A monocomponent source is ``A * cos(alpha(t))`` with a continuous phase
``alpha``. Its Hilbert transform is ``A * sin(alpha(t))``, so the pair traces a
circle of radius ``A`` in the plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np
from numpy.typing import NDArray

from .errors import (
    InvalidFraction,
    InvalidParam,
    NyquistViolation,
    ResultEmpty,
    SignalTooShort,
    ZeroPowerSignal,
)

MIN_HILBERT_LENGTH = 8


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Real discrete-time signal.

    Attributes
    ----------
    samples : ndarray
        Finite real samples, read-only.
    sample_rate_hz : float
        Positive sample rate.
    """

    samples: NDArray[np.float64]
    sample_rate_hz: float

    def __post_init__(self):
        x = np.array(self.samples, dtype=np.float64).ravel()
        if x.size == 0:
            raise InvalidParam("samples must be non-empty")
        if not np.all(np.isfinite(x)):
            raise InvalidParam("samples must be finite")
        if not (self.sample_rate_hz > 0 and math.isfinite(self.sample_rate_hz)):
            raise InvalidParam("sample_rate_hz must be positive")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    def __len__(self) -> int:
        return self.samples.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SampledSignal):
            return NotImplemented
        return self.sample_rate_hz == other.sample_rate_hz and np.array_equal(
            self.samples, other.samples
        )

    @property
    def power(self) -> float:
        return float(np.mean(self.samples**2))

    def scaled(self, factor: float) -> "SampledSignal":
        return SampledSignal(self.samples * factor, self.sample_rate_hz)


@dataclass(frozen=True)
class ConstantTone:
    f_hz: float
    kind: Literal["constant_tone"] = field(default="constant_tone", init=False)

    def frequency(self, t: NDArray[np.float64], duration_s: float) -> NDArray[np.float64]:
        return np.full_like(t, self.f_hz, dtype=np.float64)

    def bounds(self) -> tuple[float, float]:
        return self.f_hz, self.f_hz


@dataclass(frozen=True)
class LinearChirp:
    """Frequency moves linearly from ``f_start_hz`` to ``f_end_hz`` over the duration."""

    f_start_hz: float
    f_end_hz: float
    kind: Literal["linear_chirp"] = field(default="linear_chirp", init=False)

    def frequency(self, t: NDArray[np.float64], duration_s: float) -> NDArray[np.float64]:
        return self.f_start_hz + (self.f_end_hz - self.f_start_hz) * (t / duration_s)

    def bounds(self) -> tuple[float, float]:
        return min(self.f_start_hz, self.f_end_hz), max(self.f_start_hz, self.f_end_hz)


@dataclass(frozen=True)
class SinusoidalSweep:
    """Frequency oscillates as ``f_center + f_dev * sin(2 pi sweep_rate t)``."""

    f_center_hz: float
    f_dev_hz: float
    sweep_rate_hz: float
    kind: Literal["sinusoidal_sweep"] = field(default="sinusoidal_sweep", init=False)

    def frequency(self, t: NDArray[np.float64], duration_s: float) -> NDArray[np.float64]:
        return self.f_center_hz + self.f_dev_hz * np.sin(2 * np.pi * self.sweep_rate_hz * t)

    def bounds(self) -> tuple[float, float]:
        dev = abs(self.f_dev_hz)
        return self.f_center_hz - dev, self.f_center_hz + dev


FrequencyLaw = Union[ConstantTone, LinearChirp, SinusoidalSweep]

_LAWS = {"constant_tone": ConstantTone, "linear_chirp": LinearChirp,
         "sinusoidal_sweep": SinusoidalSweep}


@dataclass(frozen=True)
class PhaseProfile:
    """Instantaneous-frequency law plus initial phase and nominal duration.

    ``duration_s`` sets the time scale of chirps; the law is evaluated on
    whatever sample grid :func:`synthesize` is asked for.
    """

    law: FrequencyLaw
    initial_phase_rad: float = 0.0
    duration_s: float = 1.0

    def __post_init__(self):
        if not -math.pi <= self.initial_phase_rad <= math.pi:
            raise InvalidParam("initial_phase_rad must lie in [-pi, pi]")
        if not self.duration_s > 0:
            raise InvalidParam("duration_s must be positive")

    def instantaneous_frequency(self, t: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.law.frequency(np.asarray(t, dtype=np.float64), self.duration_s)

    def phase(self, sample_rate_hz: float, n_samples: int) -> NDArray[np.float64]:
        """Cumulative phase ``alpha[k]`` by trapezoidal integration, ``alpha[0] = initial phase``."""
        t = np.arange(n_samples) / sample_rate_hz
        f = self.instantaneous_frequency(t)
        increments = np.pi * (f[1:] + f[:-1]) / sample_rate_hz
        alpha = np.empty(n_samples)
        alpha[0] = self.initial_phase_rad
        np.cumsum(increments, out=alpha[1:])
        alpha[1:] += self.initial_phase_rad
        return alpha

    def to_dict(self) -> dict:
        d = {k: v for k, v in vars(self.law).items() if k != "kind"}
        return {"kind": self.law.kind, **d, "initial_phase_rad": self.initial_phase_rad,
                "duration_s": self.duration_s}

    @classmethod
    def from_dict(cls, d: dict) -> "PhaseProfile":
        d = dict(d)
        kind = d.pop("kind")
        try:
            law_cls = _LAWS[kind]
        except KeyError:
            raise InvalidParam(f"unknown phase profile kind {kind!r}") from None
        phase = d.pop("initial_phase_rad", 0.0)
        duration = d.pop("duration_s", 1.0)
        return cls(law_cls(**d), initial_phase_rad=phase, duration_s=duration)


def constant_tone(f_hz: float, initial_phase_rad: float = 0.0, duration_s: float = 1.0) -> PhaseProfile:
    return PhaseProfile(ConstantTone(f_hz), initial_phase_rad, duration_s)


def linear_chirp(f_start_hz: float, f_end_hz: float, initial_phase_rad: float = 0.0,
                 duration_s: float = 1.0) -> PhaseProfile:
    return PhaseProfile(LinearChirp(f_start_hz, f_end_hz), initial_phase_rad, duration_s)


def sinusoidal_sweep(f_center_hz: float, f_dev_hz: float, sweep_rate_hz: float,
                     initial_phase_rad: float = 0.0, duration_s: float = 1.0) -> PhaseProfile:
    return PhaseProfile(SinusoidalSweep(f_center_hz, f_dev_hz, sweep_rate_hz),
                        initial_phase_rad, duration_s)


def synthesize(profile: PhaseProfile, amplitude: float, sample_rate_hz: float,
               n_samples: int) -> SampledSignal:
    """Sample ``amplitude * cos(alpha[k])`` for ``k = 0 .. n_samples - 1``.

    Raises
    ------
    InvalidParam
        Non-positive amplitude, rate or length.
    NyquistViolation
        An instantaneous frequency on the sample grid leaves ``(0, fs/2)``.
    """
    if not amplitude > 0:
        raise InvalidParam("amplitude must be positive")
    if not sample_rate_hz > 0:
        raise InvalidParam("sample_rate_hz must be positive")
    if int(n_samples) != n_samples or n_samples < 1:
        raise InvalidParam("n_samples must be a positive integer")
    n_samples = int(n_samples)
    t = np.arange(n_samples) / sample_rate_hz
    f = profile.instantaneous_frequency(t)
    if np.any(f <= 0) or np.any(f >= sample_rate_hz / 2):
        raise NyquistViolation(
            f"instantaneous frequency spans [{f.min():g}, {f.max():g}] Hz, "
            f"outside (0, {sample_rate_hz / 2:g}) Hz"
        )
    alpha = profile.phase(sample_rate_hz, n_samples)
    return SampledSignal(amplitude * np.cos(alpha), sample_rate_hz)


@dataclass(frozen=True)
class AnalyticPair:
    """A signal and its discrete Hilbert transform."""

    in_phase: SampledSignal
    quadrature: SampledSignal

    def __post_init__(self):
        if len(self.in_phase) != len(self.quadrature):
            raise InvalidParam("in_phase and quadrature lengths differ")
        if self.in_phase.sample_rate_hz != self.quadrature.sample_rate_hz:
            raise InvalidParam("in_phase and quadrature sample rates differ")

    def __len__(self) -> int:
        return len(self.in_phase)

    @property
    def sample_rate_hz(self) -> float:
        return self.in_phase.sample_rate_hz

    @property
    def envelope_squared(self) -> NDArray[np.float64]:
        return self.in_phase.samples**2 + self.quadrature.samples**2

    def as_complex(self) -> NDArray[np.complex128]:
        return self.in_phase.samples + 1j * self.quadrature.samples

    def scaled(self, factor: float) -> "AnalyticPair":
        return AnalyticPair(self.in_phase.scaled(factor), self.quadrature.scaled(factor))


def hilbert_transform(x: NDArray[np.float64]) -> NDArray[np.float64]:
    """Discrete Hilbert transform of a real sequence via the full-length FFT.

    Positive frequencies are doubled, negative ones zeroed, DC and (for even
    lengths) the Nyquist bin kept once; the imaginary part of the inverse
    transform is the quadrature signal.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    h = np.zeros(n)
    h[0] = 1.0
    if n % 2 == 0:
        h[n // 2] = 1.0
        h[1 : n // 2] = 2.0
    else:
        h[1 : (n + 1) // 2] = 2.0
    return np.fft.ifft(np.fft.fft(x) * h).imag


def analytic_pair(x: SampledSignal) -> AnalyticPair:
    if len(x) < MIN_HILBERT_LENGTH:
        raise SignalTooShort(f"need at least {MIN_HILBERT_LENGTH} samples, got {len(x)}")
    quad = SampledSignal(hilbert_transform(x.samples), x.sample_rate_hz)
    return AnalyticPair(x, quad)


def trim_count(n: int, fraction: float) -> int:
    """Samples removed from each end: ``floor(fraction * n)``."""
    if not 0 <= fraction < 0.5:
        raise InvalidFraction(f"trim fraction must lie in [0, 0.5), got {fraction}")
    return math.floor(fraction * n)


def trim_fraction(p: AnalyticPair, fraction: float) -> AnalyticPair:
    n = len(p)
    cut = trim_count(n, fraction)
    if n - 2 * cut < 2:
        raise ResultEmpty(f"trimming {cut} samples from each end of {n} leaves fewer than 2")
    sl = slice(cut, n - cut)
    fs = p.sample_rate_hz
    return AnalyticPair(SampledSignal(p.in_phase.samples[sl], fs),
                        SampledSignal(p.quadrature.samples[sl], fs))


def add_awgn(x: SampledSignal, snr_db: float, rng_seed: int) -> SampledSignal:
    """Add white Gaussian noise at ``snr_db`` relative to the empirical power of ``x``.

    ``snr_db = inf`` disables noise and returns ``x`` unchanged.
    """
    power = x.power
    if power <= 0:
        raise ZeroPowerSignal("cannot set an SNR against a zero-power signal")
    if math.isinf(snr_db) and snr_db > 0:
        return x
    variance = power / 10 ** (snr_db / 10)
    rng = np.random.default_rng(rng_seed)
    noise = rng.normal(0.0, math.sqrt(variance), size=len(x))
    return SampledSignal(x.samples + noise, x.sample_rate_hz)
