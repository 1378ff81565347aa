"""Intrinsic amplitude, phase and instantaneous frequency.

For a parity pair ``(e, o)`` with continuous representations ``E(t)`` and
``O(t)``,

    A(t)   = sqrt(E**2 + O**2)
    phi(t) = atan2(O, E)
    w(t)   = (O' E - E' O) / A**2

so a cosine/sine quadrature pair rotates with positive frequency.  ``w`` is
evaluated from the closed-form quotient, never by differencing ``phi``.

Two continuous representations are available.  The *trigonometric* one
expands the even part over ``cos(v*eps*t)``, ``v = 0..l`` and the odd part over
``sin(v*eps*t)``, ``v = 1..l-1``; it is exact for every band component and for
any pair whose odd part vanishes at the end samples.  The *sinc* one uses the
band-limited interpolant of each component.  The default picks the
trigonometric form whenever the pair is representable in it and falls back to
the interpolant otherwise.

A pure even (or odd) signal has no phase of its own; a companion with the
missing parity is built from the same expansion coefficients, with sines in
place of cosines (or the reverse).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AlgorithmError, SignalFormatError, ZeroSignalError
from .projection import BandInterval, trig_columns
from .signal_core import DiscreteSignal, ParityPair, sinc_matrices

__all__ = [
    "PhaseTrack",
    "CompanionCoefficients",
    "AMP_FLOOR",
    "compute_phase_track",
    "band_phase_track",
    "companion_coefficients",
    "companion_even_source",
    "companion_odd_source",
    "classify_frequency_sign",
    "expansion_coefficients",
]

#: Points with amplitude below this fraction of the maximum are invalid.
AMP_FLOOR = 1e-8
# Relative size below which a parity component counts as absent.
_PURITY = 1e-12


@dataclass(frozen=True, eq=False)
class PhaseTrack:
    """Oversampled amplitude, phase and frequency of a parity pair.

    Attributes
    ----------
    t_grid : ndarray
        Times in seconds covering ``[-l*dt, l*dt]`` at step ``dt/oversample``.
    amplitude : ndarray
    phase : ndarray
        Unwrapped on each maximal valid run; NaN at invalid points.
    inst_freq : ndarray
        Instantaneous frequency in rad/s; NaN at invalid points.
    valid : ndarray of bool
    even_values, odd_values : ndarray
        The continuous even and odd components on ``t_grid``.
    route : {"trig", "sinc"}
    """

    t_grid: np.ndarray
    amplitude: np.ndarray
    phase: np.ndarray
    inst_freq: np.ndarray
    valid: np.ndarray
    even_values: np.ndarray
    odd_values: np.ndarray
    route: str


@dataclass(frozen=True)
class CompanionCoefficients:
    """Expansion coefficients ``c_i`` (even source) or ``s_i`` (odd source).

    ``coeffs`` has length ``l + 1`` and is indexed by ``i = 0..l``.
    """

    kind: str
    coeffs: np.ndarray


def _time_index(l: int, oversample: int) -> np.ndarray:
    return np.arange(-l * oversample, l * oversample + 1, dtype=np.int64)


@lru_cache(maxsize=32)
def _grid_trig_cached(l: int, oversample: int, v_key: tuple):
    """``sin``/``cos`` of ``v*eps*t`` on the oversampled grid, exactly symmetric."""
    v = np.asarray(v_key, dtype=np.int64)
    j = _time_index(l, oversample)
    period = 2 * l * oversample
    r = np.outer(j, v)
    sign = np.sign(r)
    a = np.abs(r) % period
    a = np.where(a > period // 2, a - period, a)
    ang = np.pi * (sign * a) / (l * oversample)
    S = np.sin(ang)
    S[(a == 0) | (np.abs(a) == period // 2)] = 0.0
    C = np.cos(ang)
    S.setflags(write=False)
    C.setflags(write=False)
    return S, C


def _grid_trig(l, oversample, v):
    return _grid_trig_cached(int(l), int(oversample), tuple(int(x) for x in v))


@lru_cache(maxsize=8)
def _full_families(l: int):
    vc = np.arange(0, l + 1)
    vs = np.arange(1, l)
    _, C = trig_columns(l, vc)
    S, _ = trig_columns(l, vs)
    return vc, C, vs, S


def _lstsq(M, y):
    return np.linalg.lstsq(M, y, rcond=None)[0]


def expansion_coefficients(pair: ParityPair):
    """Trigonometric expansion of a parity pair.

    Returns
    -------
    cos_v, cos_c, sin_v, sin_c : ndarray
        Cosine indices ``0..l`` with coefficients fitted to the even part
        (exact) and sine indices ``1..l-1`` fitted to the odd part.
    endpoint : float
        Odd-part value at ``k = l``, the one direction the sine family
        cannot represent.
    """
    l = pair.l
    vc, C, vs, S = _full_families(l)
    a = _lstsq(C, pair.even.samples)
    b = _lstsq(S, pair.odd.samples)
    return vc, a, vs, b, float(pair.odd.samples[-1])


def _unwrap_runs(phase: np.ndarray, valid: np.ndarray) -> np.ndarray:
    out = np.full(phase.shape, np.nan)
    idx = np.flatnonzero(valid)
    if idx.size == 0:
        return out
    breaks = np.flatnonzero(np.diff(idx) > 1) + 1
    for run in np.split(idx, breaks):
        out[run] = np.unwrap(phase[run])
    return out


def _assemble(t, e, o, de, do, route) -> PhaseTrack:
    a2 = e * e + o * o
    amp = np.sqrt(a2)
    top = amp.max()
    if not top > 0:
        raise ZeroSignalError("zero signal has no phase")
    valid = amp >= AMP_FLOOR * top
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(valid, (do * e - de * o) / a2, np.nan)
    phase = _unwrap_runs(np.arctan2(o, e), valid)
    for arr in (t, amp, phase, w, valid, e, o):
        arr.setflags(write=False)
    return PhaseTrack(t, amp, phase, w, valid, e, o, route)


def _trig_track(l, dt, cos_v, cos_c, sin_v, sin_c, oversample) -> PhaseTrack:
    eps = np.pi / (l * dt)
    t = _time_index(l, oversample) * (dt / oversample)
    Sc, Cc = _grid_trig(l, oversample, cos_v)
    Ss, Cs = _grid_trig(l, oversample, sin_v)
    wc = np.asarray(cos_v) * eps
    ws = np.asarray(sin_v) * eps
    e = Cc @ cos_c
    de = -(Sc @ (wc * cos_c))
    o = Ss @ sin_c
    do = Cs @ (ws * sin_c)
    return _assemble(t, e, o, de, do, "trig")


def _sinc_track(pair: ParityPair, oversample) -> PhaseTrack:
    l, dt = pair.l, pair.dt
    t = _time_index(l, oversample) * (dt / oversample)
    n = pair.even.n
    e = np.empty(t.size)
    o = np.empty(t.size)
    de = np.empty(t.size)
    do = np.empty(t.size)
    for start in range(0, t.size, 4096):
        sl = slice(start, start + 4096)
        S, D = sinc_matrices(n, dt, t[sl])
        e[sl] = S @ pair.even.samples
        o[sl] = S @ pair.odd.samples
        de[sl] = D @ pair.even.samples
        do[sl] = D @ pair.odd.samples
    return _assemble(t, e, o, de, do, "sinc")


def compute_phase_track(pair: ParityPair, oversample: int = 8,
                        method: str = "auto") -> PhaseTrack:
    """Amplitude, phase and instantaneous frequency of a parity pair.

    Parameters
    ----------
    pair : ParityPair
    oversample : int, optional
        Time-grid points per sampling period, at least 4.
    method : {"auto", "trig", "sinc"}, optional
        Continuous representation of the components.  ``"auto"`` uses the
        trigonometric expansion when the odd part vanishes at the end samples
        (so the expansion reproduces every sample) and the sinc interpolant
        otherwise.

    Returns
    -------
    PhaseTrack

    Raises
    ------
    ZeroSignalError
        If both components are identically zero.
    """
    oversample = int(oversample)
    if oversample < 4:
        raise ValueError("oversample must be >= 4")
    if method not in ("auto", "trig", "sinc"):
        raise ValueError(f"unknown method {method!r}")
    scale = max(np.max(np.abs(pair.even.samples)), np.max(np.abs(pair.odd.samples)))
    if scale == 0:
        raise ZeroSignalError("zero signal has no phase")
    if method == "sinc":
        return _sinc_track(pair, oversample)
    cos_v, a, sin_v, b, endpoint = expansion_coefficients(pair)
    if method == "auto" and abs(endpoint) > _PURITY * scale:
        return _sinc_track(pair, oversample)
    return _trig_track(pair.l, pair.dt, cos_v, a, sin_v, b, oversample)


def band_phase_track(band: BandInterval, sin_coeffs, cos_coeffs, l: int, dt: float,
                     oversample: int = 8, source: str = "full") -> PhaseTrack:
    """Phase track of a band component from its expansion coefficients.

    Parameters
    ----------
    band : BandInterval
    sin_coeffs, cos_coeffs : array_like
        Coefficients for ``v = band.i .. band.m``.
    l, dt : int, float
        Grid of the source signal.
    oversample : int, optional
    source : {"full", "even", "odd"}, optional
        ``"even"`` builds the companion from the cosine coefficients,
        ``"odd"`` from the sine coefficients; ``"full"`` uses both as given.
    """
    v = band.indices
    s = np.asarray(sin_coeffs, dtype=float)
    c = np.asarray(cos_coeffs, dtype=float)
    if source == "even":
        s = c
    elif source == "odd":
        c = s
    elif source != "full":
        raise ValueError(f"unknown source {source!r}")
    return _trig_track(l, dt, v, c, v, s, int(oversample))


def companion_coefficients(signal: DiscreteSignal, kind: str) -> CompanionCoefficients:
    """Fit ``c_i`` (cosines, even source) or ``s_i`` (sines, odd source).

    The full family ``i = 0..l`` is used; for sines the ``i = 0`` and
    ``i = l`` columns vanish on the grid and receive zero coefficients.
    """
    x = signal.samples
    mirror = x[::-1]
    norm = np.linalg.norm(x)
    l = signal.l
    v = np.arange(0, l + 1)
    S, C = trig_columns(l, v)
    if kind == "even-source":
        if np.linalg.norm(0.5 * (x - mirror)) > _PURITY * norm:
            raise SignalFormatError("companion_even_source needs a pure even signal")
        coeffs = _lstsq(C, x)
    elif kind == "odd-source":
        if norm == 0:
            raise ZeroSignalError("zero signal has no companion")
        if np.linalg.norm(0.5 * (x + mirror)) > _PURITY * norm:
            raise SignalFormatError("companion_odd_source needs a pure odd signal")
        coeffs = _lstsq(S, x)
        coeffs[0] = 0.0
        coeffs[l] = 0.0
    else:
        raise ValueError(f"unknown companion kind {kind!r}")
    return CompanionCoefficients(kind, coeffs)


def companion_even_source(even: DiscreteSignal) -> ParityPair:
    """Pair a pure even signal with ``f_q(t) = sum_{i>=1} c_i sin(i*eps*t)``."""
    cc = companion_coefficients(even, "even-source")
    S, _ = trig_columns(even.l, np.arange(1, even.l + 1))
    f_q = S @ cc.coeffs[1:]
    return ParityPair(even, even.with_samples(f_q))


def companion_odd_source(odd: DiscreteSignal) -> ParityPair:
    """Pair a pure odd signal with ``f_d(t) = sum_i s_i cos(i*eps*t)``."""
    cc = companion_coefficients(odd, "odd-source")
    _, C = trig_columns(odd.l, np.arange(0, odd.l + 1))
    f_d = C @ cc.coeffs
    return ParityPair(odd.with_samples(f_d), odd)


def classify_frequency_sign(track: PhaseTrack, tol: float = 0.0) -> str:
    """Sign class of the instantaneous frequency over the valid points.

    With ``tol = 0`` a track is ``"positive"`` when ``w > 0`` at every valid
    point and ``"negative"`` when ``w < 0`` everywhere.  A positive ``tol``
    is a slack for noisy data: excursions down to ``-tol`` still count as
    positive, provided the frequency exceeds ``tol`` somewhere (and
    symmetrically for negative).

    Returns
    -------
    {"positive", "negative", "mixed"}
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    w = track.inst_freq[track.valid]
    if w.size == 0:
        raise AlgorithmError("phase track has no valid points")
    lo, hi = float(w.min()), float(w.max())
    if tol == 0:
        if lo > 0:
            return "positive"
        if hi < 0:
            return "negative"
        return "mixed"
    if lo >= -tol and hi > tol:
        return "positive"
    if hi <= tol and lo < -tol:
        return "negative"
    return "mixed"
