"""Finite centred signals, parity splitting and the sinc interpolant.

A signal of odd length ``n = 2l + 1`` is indexed ``k = -l..l`` with sample
``k`` at time ``k*dt``.  Its band-limited interpolant is

    psi(t) = sum_k u[k] * sinc(pi/dt * (t - k*dt)),   sinc(x) = sin(x)/x,

which reproduces the samples at the nodes and is the continuous object every
other module reasons about.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SignalFormatError

__all__ = [
    "DiscreteSignal",
    "ParityPair",
    "parity_decompose",
    "interpolant_eval",
    "interpolant_derivative_eval",
    "sinc_matrices",
]

# Below this |x| the sinc kernel and its derivative use Taylor values.
_TAYLOR_GUARD = 1e-8
# Offsets (in sample units) this close to a non-zero integer are snapped onto
# the node so that kernel values there are exactly zero.
_NODE_SNAP = 1e-10
# Rows of the kernel matrix built at once; bounds memory on long time grids.
_CHUNK = 4096


@dataclass(frozen=True)
class DiscreteSignal:
    """Odd-length real signal centred on ``t = 0``.

    Parameters
    ----------
    samples : array_like
        Values for indices ``-l..l`` in increasing order.
    dt : float
        Sampling period in seconds.

    Notes
    -----
    The sample array is copied and made read-only, so instances can be
    shared freely.
    """

    samples: np.ndarray
    dt: float

    def __post_init__(self):
        x = np.array(self.samples, dtype=float, copy=True)
        if x.ndim != 1:
            raise SignalFormatError(f"samples must be one-dimensional, got shape {x.shape}")
        if x.size < 3 or x.size % 2 == 0:
            raise SignalFormatError(
                f"signal length must be odd and >= 3, got {x.size}")
        if not np.all(np.isfinite(x)):
            raise SignalFormatError("signal contains non-finite samples")
        dt = float(self.dt)
        if not np.isfinite(dt) or dt <= 0:
            raise SignalFormatError(f"sampling period must be positive, got {dt}")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "dt", dt)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def l(self) -> int:
        return (self.samples.size - 1) // 2

    @property
    def duration(self) -> float:
        """Total span ``T = (n - 1) * dt`` in seconds."""
        return (self.n - 1) * self.dt

    @property
    def half_span(self) -> float:
        """Half-width ``l * dt`` of the principal interval."""
        return self.l * self.dt

    @property
    def nyquist(self) -> float:
        """Band edge ``pi / dt`` in rad/s."""
        return np.pi / self.dt

    @property
    def epsilon(self) -> float:
        """Frequency resolution ``pi / (l * dt)`` in rad/s."""
        return np.pi / (self.l * self.dt)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.l, self.l + 1)

    @property
    def times(self) -> np.ndarray:
        return self.indices * self.dt

    def with_samples(self, samples) -> "DiscreteSignal":
        """New signal on the same grid."""
        return DiscreteSignal(samples, self.dt)

    def norm(self) -> float:
        return float(np.linalg.norm(self.samples))


@dataclass(frozen=True)
class ParityPair:
    """Even and odd parts of a centred signal.

    ``even`` carries the real-axis spectrum and ``odd`` the imaginary-axis
    spectrum.
    """

    even: DiscreteSignal
    odd: DiscreteSignal

    def __post_init__(self):
        if self.even.n != self.odd.n or self.even.dt != self.odd.dt:
            raise SignalFormatError("parity components must share length and dt")

    @property
    def dt(self) -> float:
        return self.even.dt

    @property
    def l(self) -> int:
        return self.even.l

    def combined(self) -> DiscreteSignal:
        return self.even.with_samples(self.even.samples + self.odd.samples)


def parity_decompose(u: DiscreteSignal) -> ParityPair:
    """Split ``u`` into its even and odd parts about ``k = 0``.

    Parameters
    ----------
    u : DiscreteSignal

    Returns
    -------
    ParityPair
        ``even = (u + u[::-1]) / 2`` and ``odd = (u - u[::-1]) / 2``.
    """
    if not isinstance(u, DiscreteSignal):
        raise SignalFormatError("parity_decompose expects a DiscreteSignal")
    x = u.samples
    r = x[::-1]
    even = 0.5 * (x + r)
    odd = 0.5 * (x - r)
    # Force exact symmetry; the centre of the odd part is zero by construction.
    odd[u.l] = 0.0
    return ParityPair(u.with_samples(even), u.with_samples(odd))


def sinc_matrices(n: int, dt: float, t, derivative: bool = True):
    """Kernel matrices mapping samples to interpolant values at times ``t``.

    Parameters
    ----------
    n : int
        Odd signal length.
    dt : float
        Sampling period.
    t : array_like
        Evaluation times in seconds.
    derivative : bool, optional
        Also return the time-derivative kernel.

    Returns
    -------
    S : ndarray, shape (len(t), n)
        ``S @ u`` is the interpolant.
    D : ndarray, shape (len(t), n)
        ``D @ u`` is its derivative (only when ``derivative``).
    """
    l = (n - 1) // 2
    k = np.arange(-l, l + 1)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = t[:, None] / dt - k[None, :]
    near = np.abs(s - np.round(s)) < _NODE_SNAP
    x = np.pi * s
    own = np.abs(x) < _TAYLOR_GUARD
    sin_x = np.where(near & ~own, 0.0, np.sin(x))
    with np.errstate(divide="ignore", invalid="ignore"):
        S = np.where(own, 1.0 - x * x / 6.0, sin_x / x)
        if not derivative:
            return S
        dS = np.where(own, -x / 3.0, (x * np.cos(x) - np.sin(x)) / (x * x))
    return S, dS * (np.pi / dt)


def _apply_kernel(u: DiscreteSignal, t, derivative: bool):
    t_arr = np.asarray(t, dtype=float)
    flat = np.atleast_1d(t_arr).reshape(-1)
    if not np.all(np.isfinite(flat)):
        raise SignalFormatError("evaluation times must be finite")
    out = np.empty(flat.size)
    for start in range(0, flat.size, _CHUNK):
        sl = slice(start, start + _CHUNK)
        if derivative:
            _, D = sinc_matrices(u.n, u.dt, flat[sl])
            out[sl] = D @ u.samples
        else:
            out[sl] = sinc_matrices(u.n, u.dt, flat[sl], derivative=False) @ u.samples
    if t_arr.ndim == 0:
        return float(out[0])
    return out.reshape(t_arr.shape)


def interpolant_eval(u: DiscreteSignal, t):
    """Evaluate the sinc interpolant of ``u`` at time(s) ``t``.

    At a node ``t = k*dt`` the sample ``u[k]`` is returned exactly.
    """
    return _apply_kernel(u, t, derivative=False)


def interpolant_derivative_eval(u: DiscreteSignal, t):
    """Analytic time derivative of the sinc interpolant at ``t``.

    Each kernel term is differentiated with
    ``d/dx sinc(x) = (x cos x - sin x) / x**2`` and a Taylor value near zero.
    """
    return _apply_kernel(u, t, derivative=True)
