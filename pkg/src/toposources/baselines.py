"""Classical MDL and AIC source enumeration from sample-covariance eigenvalues.

Both criteria follow Wax and Kailath, "Detection of signals by information
theoretic criteria", IEEE Trans. ASSP 33(2), 1985. For ``m`` sensors, ``N``
snapshots and eigenvalues ``l_1 >= ... >= l_m``, the log-likelihood term for
``k`` sources compares the geometric and arithmetic means of the ``m - k``
smallest eigenvalues::

    L(k)   = -N (m - k) log( g(k) / a(k) )
    MDL(k) = L(k) + k (2m - k) log(N) / 2
    AIC(k) = 2 L(k) + 2 k (2m - k)

and the estimate is the ``k`` in ``0 .. m-1`` minimizing the criterion. The
penalty ``k (2m - k)`` counts free parameters of a complex-valued model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import DegenerateSpectrum, TooFewSnapshots
from .mixing import ObservationSet
from .signals import hilbert_transform

CLAMP_RTOL = 1e-12


@dataclass(frozen=True)
class EigenSpectrum:
    eigenvalues: tuple[float, ...]
    n_snapshots: int

    def __post_init__(self):
        ev = tuple(float(v) for v in self.eigenvalues)
        if any(a < b for a, b in zip(ev, ev[1:])):
            raise ValueError("eigenvalues must be in descending order")
        if any(v < 0 for v in ev):
            raise ValueError("eigenvalues must be non-negative")
        if self.n_snapshots < 1:
            raise ValueError("n_snapshots must be positive")
        object.__setattr__(self, "eigenvalues", ev)

    def scaled(self, factor: float) -> "EigenSpectrum":
        return EigenSpectrum(tuple(v * factor for v in self.eigenvalues), self.n_snapshots)


def spectrum_from_matrix(r: NDArray, n_snapshots: int) -> EigenSpectrum:
    ev = np.linalg.eigvalsh(r)[::-1]
    # clip tiny negative round-off, keep order
    ev = np.maximum(ev, 0.0)
    return EigenSpectrum(tuple(ev.tolist()), n_snapshots)


def sample_autocorrelation(observations: ObservationSet | NDArray, use_analytic: bool = True
                           ) -> tuple[NDArray, EigenSpectrum]:
    """``R = (1/N) sum_k v[k] v[k]^H`` over snapshot vectors, with its descending spectrum.

    With ``use_analytic`` the snapshots are ``y + j * H{y}``; otherwise real.
    Accepts an :class:`ObservationSet` or an ``m x N`` array (real or complex).
    """
    y = observations.as_array() if isinstance(observations, ObservationSet) else np.atleast_2d(observations)
    m, n = y.shape
    if n < m:
        raise TooFewSnapshots(f"{n} snapshots for {m} channels")
    if use_analytic and not np.iscomplexobj(y):
        y = y + 1j * np.stack([hilbert_transform(row) for row in y])
    r = (y @ y.conj().T) / n
    if not np.iscomplexobj(r):
        r = r.astype(np.float64)
    return r, spectrum_from_matrix(r, n)


def _log_likelihood(ev: NDArray[np.float64], n_snapshots: int) -> NDArray[np.float64]:
    m = ev.size
    ll = np.empty(m)
    for k in range(m):
        tail = ev[k:]
        geo = np.exp(np.mean(np.log(tail)))
        ari = np.mean(tail)
        ll[k] = -n_snapshots * (m - k) * np.log(geo / ari)
    return ll


def _prepared(spec: EigenSpectrum) -> NDArray[np.float64]:
    ev = np.asarray(spec.eigenvalues, dtype=np.float64)
    if ev.size < 2:
        raise DegenerateSpectrum("need at least two eigenvalues")
    top = ev[0]
    if top <= 0:
        raise DegenerateSpectrum("all eigenvalues are zero")
    return np.maximum(ev, top * CLAMP_RTOL)


def mdl_criterion(spec: EigenSpectrum) -> NDArray[np.float64]:
    ev = _prepared(spec)
    m, n = ev.size, spec.n_snapshots
    k = np.arange(m)
    return _log_likelihood(ev, n) + 0.5 * k * (2 * m - k) * np.log(n)


def aic_criterion(spec: EigenSpectrum) -> NDArray[np.float64]:
    ev = _prepared(spec)
    m = ev.size
    k = np.arange(m)
    return 2 * _log_likelihood(ev, spec.n_snapshots) + 2 * k * (2 * m - k)


def mdl_estimate(spec: EigenSpectrum) -> int:
    return int(np.argmin(mdl_criterion(spec)))


def aic_estimate(spec: EigenSpectrum) -> int:
    return int(np.argmin(aic_criterion(spec)))
