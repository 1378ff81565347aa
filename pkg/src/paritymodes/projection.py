"""Narrowband trigonometric subspaces and orthogonal projection onto them.

A band ``[i*eps, m*eps]`` is spanned on the sample grid by the ``2p`` columns
``sin(v*pi*k/l)`` and ``cos(v*pi*k/l)``, ``v = i..m``.  The band component of
``u`` is its orthogonal projection ``G (G^T G)^{-1} G^T u``, computed here from
a thin QR factorisation rather than an explicit inverse.

On the discrete grid the sine columns are mutually orthogonal with squared
norm ``l``, while the cosine columns have squared norm ``l + 1`` and inner
products ``(-1)**(v + w)``; the Gram matrix is therefore close to, but not
exactly, diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import AlgorithmError, SignalFormatError
from .signal_core import DiscreteSignal

__all__ = [
    "BandInterval",
    "BandBasis",
    "Mode",
    "trig_columns",
    "build_band_basis",
    "project_band",
    "project_band_oracle",
]


@dataclass(frozen=True)
class BandInterval:
    """Integer frequency band ``[i*eps, m*eps]`` (rad/s).

    ``1 <= i <= m``; the upper limit ``m <= l - 1`` is checked when a basis is
    built, since it depends on the signal length.
    """

    i: int
    m: int
    epsilon: float

    def __post_init__(self):
        i, m = int(self.i), int(self.m)
        if i != self.i or m != self.m:
            raise ValueError("band indices must be integers")
        if not (1 <= i <= m):
            raise ValueError(f"band indices must satisfy 1 <= i <= m, got i={i}, m={m}")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "m", m)

    @property
    def p(self) -> int:
        return self.m - self.i + 1

    @property
    def lo(self) -> float:
        return self.i * self.epsilon

    @property
    def hi(self) -> float:
        return self.m * self.epsilon

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.i, self.m + 1)

    def hz(self) -> tuple[float, float]:
        """Band edges in Hz."""
        step = self.epsilon / (2 * np.pi)
        return self.i * step, self.m * step

    def contains(self, other: "BandInterval") -> bool:
        return self.i <= other.i and other.m <= self.m

    def overlaps(self, other: "BandInterval") -> bool:
        return self.i <= other.m and other.i <= self.m


def trig_columns(l: int, v) -> tuple[np.ndarray, np.ndarray]:
    """Sine and cosine columns ``sin(v*pi*k/l)``, ``cos(v*pi*k/l)``.

    The integer product ``v*k`` is reduced modulo ``2l`` into ``[-l, l)``
    before scaling, which keeps the columns exactly odd/even and the sine of
    multiples of pi exactly zero.

    Returns
    -------
    S, C : ndarray, shape (2l+1, len(v))
    """
    v = np.atleast_1d(np.asarray(v, dtype=np.int64))
    k = np.arange(-l, l + 1, dtype=np.int64)
    r = np.outer(k, v)
    sign = np.sign(r)
    a = np.abs(r) % (2 * l)
    a = np.where(a > l, a - 2 * l, a)
    ang = np.pi * (sign * a) / l
    S = np.sin(ang)
    S[(a == 0) | (np.abs(a) == l)] = 0.0
    C = np.cos(ang)
    return S, C


@dataclass(frozen=True, eq=False)
class BandBasis:
    """Band matrix ``columns`` with a cached thin QR factorisation.

    Columns alternate ``sin(v), cos(v)`` for ``v = i..m``.
    """

    columns: np.ndarray
    band: BandInterval
    dt: float
    _q: np.ndarray = field(repr=False)
    _r: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.columns.shape[0]

    def coefficients(self, y: np.ndarray) -> np.ndarray:
        """Least-squares coefficients of ``y`` in column order."""
        return solve_triangular(self._r, self._q.T @ y)

    def project(self, y: np.ndarray) -> np.ndarray:
        return self._q @ (self._q.T @ y)


def build_band_basis(n: int, dt: float, band: BandInterval) -> BandBasis:
    """Assemble the band matrix for a signal of length ``n``.

    Raises
    ------
    ValueError
        If the band leaves ``1 .. l-1``.
    """
    n = int(n)
    if n < 3 or n % 2 == 0:
        raise SignalFormatError(f"signal length must be odd and >= 3, got {n}")
    l = (n - 1) // 2
    if band.m > l - 1:
        raise ValueError(
            f"band [{band.i}, {band.m}] outside the admissible index range 1..{l - 1}")
    if not np.isclose(band.epsilon, np.pi / (l * dt), rtol=1e-9, atol=0):
        raise ValueError("band epsilon does not match the signal grid")
    S, C = trig_columns(l, band.indices)
    G = np.empty((n, 2 * band.p))
    G[:, 0::2] = S
    G[:, 1::2] = C
    q, r = np.linalg.qr(G)
    q.setflags(write=False)
    r.setflags(write=False)
    G.setflags(write=False)
    return BandBasis(G, band, float(dt), q, r)


@dataclass(frozen=True, eq=False)
class Mode:
    """Band component of a signal.

    Attributes
    ----------
    samples : DiscreteSignal
    band : BandInterval
    axis : {"full", "real", "imaginary"}
    freq_sign : {"positive", "negative", "unclassified"}
    sin_coeffs, cos_coeffs : ndarray
        Expansion of ``samples`` over the band, ordered by ``v = i..m``.
    track : PhaseTrack or None
        Phase track used for classification, when one was computed.
    """

    samples: DiscreteSignal
    band: BandInterval
    axis: str = "full"
    freq_sign: str = "unclassified"
    sin_coeffs: np.ndarray | None = None
    cos_coeffs: np.ndarray | None = None
    track: object = None

    def energy(self) -> float:
        return float(self.samples.samples @ self.samples.samples)


def project_band(u: DiscreteSignal, basis: BandBasis, axis: str = "full") -> Mode:
    """Orthogonal projection of ``u`` onto the band spanned by ``basis``.

    Parameters
    ----------
    u : DiscreteSignal
    basis : BandBasis
    axis : str, optional
        Axis tag stored on the returned mode.

    Returns
    -------
    Mode
        Unclassified mode holding the projected samples and the expansion
        coefficients.
    """
    if u.n != basis.n:
        raise ValueError(f"signal length {u.n} does not match basis length {basis.n}")
    c = basis.coefficients(u.samples)
    y = basis.project(u.samples)
    return Mode(u.with_samples(y), basis.band, axis, "unclassified",
                c[0::2].copy(), c[1::2].copy())


def project_band_oracle(u: DiscreteSignal, band: BandInterval) -> DiscreteSignal:
    """Projection through the explicitly assembled normal equations.

    Slow and less stable than :func:`project_band`; intended as an
    independent check.
    """
    l = u.l
    if band.m > l - 1:
        raise ValueError(f"band outside the admissible index range 1..{l - 1}")
    k = np.arange(-l, l + 1)
    cols = []
    for v in band.indices:
        cols.append(np.sin(v * np.pi * k / l))
        cols.append(np.cos(v * np.pi * k / l))
    G = np.column_stack(cols)
    try:
        coef = np.linalg.solve(G.T @ G, G.T @ u.samples)
    except np.linalg.LinAlgError as exc:
        raise AlgorithmError(f"singular normal equations: {exc}") from exc
    return u.with_samples(G @ coef)
