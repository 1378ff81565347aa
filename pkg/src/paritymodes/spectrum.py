"""Real-axis and imaginary-axis spectra and their lobe structure.

The Fourier transform of the sinc interpolant splits by parity: the even part
gives a purely real curve and the odd part a purely imaginary one,

    Fre(w) = u[0] + sum_{k=1..l} 2 u_e[k] cos(w k dt)
    Fim(w) = sum_{k=1..l} 2 u_o[k] sin(w k dt)

(up to the constant factor ``dt`` on ``|w| <= pi/dt``, which is dropped).
An isolated grid tone produces a principal lobe of width ``2*eps`` flanked by
side lobes of width ``eps``; wider lobes hold several nearby tones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal_core import DiscreteSignal, parity_decompose

__all__ = [
    "AxisSpectrum",
    "Lobe",
    "AXES",
    "compute_axis_spectra",
    "detect_lobes",
    "lobe_width_classify",
    "lobe_bins",
    "PRINCIPAL_WIDTH",
    "PRINCIPAL_SIGNIFICANCE",
]

AXES = ("real", "imaginary")

#: Minimum principal-lobe width in units of eps.
PRINCIPAL_WIDTH = 1.5
#: Minimum principal-lobe peak relative to the largest value on its axis.
PRINCIPAL_SIGNIFICANCE = 0.2
# Values below this fraction of the curve maximum count as zero.
_RIPPLE = 1e-12


@dataclass(frozen=True)
class AxisSpectrum:
    """Sampled axis spectra on ``0 .. pi/dt``.

    Attributes
    ----------
    freq_grid : ndarray
        Angular frequencies in rad/s, step ``epsilon / oversample``.
    fre, fim : ndarray
        Real-axis and imaginary-axis curves on ``freq_grid``.
    epsilon : float
        Frequency resolution in rad/s.
    l : int
        Half-length of the source signal.
    """

    freq_grid: np.ndarray
    fre: np.ndarray
    fim: np.ndarray
    epsilon: float
    l: int

    @property
    def oversample(self) -> int:
        return int(round(self.epsilon / (self.freq_grid[1] - self.freq_grid[0])))

    def curve(self, axis: str) -> np.ndarray:
        if axis == "real":
            return self.fre
        if axis == "imaginary":
            return self.fim
        raise ValueError(f"unknown axis {axis!r}")


@dataclass(frozen=True)
class Lobe:
    """Sign-constant interval of one axis curve.

    ``lo``/``hi``/``peak_freq`` are in rad/s.  ``at_edge`` marks lobes that
    touch ``w = 0`` or the Nyquist edge.
    """

    lo: float
    hi: float
    axis: str
    peak_freq: float
    peak_value: float
    is_principal: bool
    at_edge: bool = False

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def dc_adjacent(self) -> bool:
        return self.lo == 0.0


def compute_axis_spectra(u: DiscreteSignal, oversample: int = 8) -> AxisSpectrum:
    """Evaluate Fre and Fim by their closed-form cosine/sine sums.

    Parameters
    ----------
    u : DiscreteSignal
    oversample : int, optional
        Grid points per ``eps``; at least 8.

    Returns
    -------
    AxisSpectrum
    """
    oversample = int(oversample)
    if oversample < 8:
        raise ValueError("oversample must be >= 8")
    pair = parity_decompose(u)
    l = u.l
    eps = u.epsilon
    grid = np.arange(l * oversample + 1) * (eps / oversample)
    k = np.arange(1, l + 1)
    phase = np.outer(grid, k * u.dt)
    ue = pair.even.samples[l + 1:]
    uo = pair.odd.samples[l + 1:]
    fre = pair.even.samples[l] + np.cos(phase) @ (2.0 * ue)
    fim = np.sin(phase) @ (2.0 * uo)
    fim[0] = 0.0
    return AxisSpectrum(grid, fre, fim, eps, l)


def _segments(w: np.ndarray, y: np.ndarray):
    """Split a curve into sign-constant segments.

    Returns ``(lo, hi, first, last)`` tuples where ``first``/``last`` are the
    grid indices of the outermost non-zero points.  Boundaries between
    adjacent opposite-sign points are placed by linear interpolation.  A run
    of exact zeros is a boundary too, placed at the middle of the run, even
    when the curve only touches zero there: two grid tones two bins apart
    meet at such a point.
    """
    nz = np.flatnonzero(y)
    if nz.size == 0:
        return []
    out = []
    lo = w[0]
    start = nz[0]
    for a, b in zip(nz[:-1], nz[1:]):
        if np.sign(y[a]) == np.sign(y[b]) and b == a + 1:
            continue
        if b == a + 1:
            x = w[a] - y[a] * (w[b] - w[a]) / (y[b] - y[a])
        else:
            x = 0.5 * (w[a + 1] + w[b - 1])
        out.append((lo, x, start, a))
        lo = x
        start = b
    out.append((lo, w[-1], start, nz[-1]))
    return out


def _axis_lobes(spec: AxisSpectrum, axis: str, min_freq: float) -> list[Lobe]:
    w = spec.freq_grid
    y = spec.curve(axis).copy()
    top = np.max(np.abs(y))
    if top == 0.0:
        return []
    y[np.abs(y) < _RIPPLE * top] = 0.0
    eps = spec.epsilon
    raw = []
    for lo, hi, first, last in _segments(w, y):
        j = first + int(np.argmax(np.abs(y[first:last + 1])))
        raw.append((lo, hi, j))
    above = [abs(y[j]) for _, _, j in raw if w[j] >= min_freq]
    ref = max(above) if above else 0.0
    lobes = []
    for lo, hi, j in raw:
        principal = (w[j] >= min_freq
                     and (hi - lo) >= PRINCIPAL_WIDTH * eps * (1 - 1e-9)
                     and abs(y[j]) >= PRINCIPAL_SIGNIFICANCE * ref)
        lobes.append(Lobe(float(lo), float(hi), axis, float(w[j]), float(y[j]),
                          bool(principal), bool(lo == w[0] or hi == w[-1])))
    return lobes


def detect_lobes(spec: AxisSpectrum, axis: str | None = None, min_freq: float = 0.0):
    """Partition the axis curves into lobes.

    A lobe is principal when it is at least ``1.5*eps`` wide and its peak
    reaches ``PRINCIPAL_SIGNIFICANCE`` of the largest lobe peak on that axis.
    The second condition keeps wide but weak side lobes (for instance those
    of a short burst) from seeding modes of their own.

    Parameters
    ----------
    spec : AxisSpectrum
    axis : {"real", "imaginary"}, optional
        Restrict to one axis and return a plain list.
    min_freq : float, optional
        Lobes peaking below this frequency (rad/s) are never principal and
        do not set the significance reference; used when a trend owns the
        low band.

    Returns
    -------
    dict or list
        ``{"real": [...], "imaginary": [...]}`` with lobes sorted by ``lo``,
        or the list for ``axis``.  An all-zero axis has no lobes.
    """
    if axis is not None:
        return _axis_lobes(spec, axis, min_freq)
    return {ax: _axis_lobes(spec, ax, min_freq) for ax in AXES}


def lobe_width_classify(lobe: Lobe, epsilon: float) -> str:
    """``"multi-component"`` when the lobe is wider than ``2*eps``."""
    if lobe.width > 2.0 * epsilon * (1 + 1e-6):
        return "multi-component"
    return "single-component"


def lobe_bins(lobe: Lobe, epsilon: float, l: int) -> np.ndarray:
    """Frequency indices ``v`` covered by a lobe.

    A bin belongs to the lobe when ``v*eps`` lies within ``eps/4`` of its
    support; the slack absorbs boundaries that fall exactly on a bin.  The
    result is clamped to ``1 .. l-1``.
    """
    lo = int(np.ceil(lobe.lo / epsilon - 0.25 - 1e-9))
    hi = int(np.floor(lobe.hi / epsilon + 0.25 + 1e-9))
    lo = max(lo, 1)
    hi = min(hi, l - 1)
    return np.arange(lo, hi + 1)
