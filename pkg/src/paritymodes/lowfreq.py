"""Non-oscillatory trend by coarse resampling and parity polynomial fitting.

The signal is resampled at a period ``delta0`` chosen below the resampled
grid's Nyquist limit for the cutoff, ``dt < delta0 < pi/cutoff``.  The
``2*l0 + 1`` node values are split by parity and matched exactly by an even
polynomial ``a0 + sum a_i x**(2i)`` and an odd polynomial
``sum b_i x**(2i-1)``, ``i = 1..l0``, in the normalised time
``x = t/(l0*delta0)``.

Point resampling aliases every oscillation above ``pi/delta0`` into the
nodes.  By default the node values are therefore not read off the signal but
solved for: they are the node values of the unique parity polynomial whose
low band (the trigonometric bins below ``pi/delta0``) agrees with the low
band of the signal at the nodes.  On a polynomial input this returns the
polynomial itself.  Callers that know the oscillatory content may also pass
it as ``oscillatory`` so it is removed first (see
:func:`paritymodes.mode_search.decompose_full`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import TrendFitError
from .projection import trig_columns
from .signal_core import DiscreteSignal, interpolant_eval, parity_decompose

__all__ = [
    "TrendFit",
    "KAPPA",
    "MAX_L0",
    "choose_resample_period",
    "fit_trend",
    "eval_trend",
    "trend_signal",
]

#: Safety factor between the cutoff and the resampled Nyquist limit.
KAPPA = 1.25
#: Largest supported resampled half-length.
MAX_L0 = 12
_MAX_COND = 1e12


@dataclass(frozen=True)
class TrendFit:
    """Even/odd polynomial trend in normalised time.

    Attributes
    ----------
    delta0 : float
        Resampling period in seconds.
    l0 : int
        Resampled half-length.
    a_coeffs : ndarray
        ``a0 .. a_l0`` of the even polynomial in ``x**(2i)``.
    b_coeffs : ndarray
        ``b1 .. b_l0`` of the odd polynomial in ``x**(2i-1)``.
    time_scale : float
        ``l0 * delta0``; ``x = t / time_scale``.
    half_span : float
        Half-width of the principal interval of the source signal.
    nodes : ndarray
        Resampling times ``k*delta0``, ``k = -l0..l0``.
    node_values : ndarray
        Resampled values at ``nodes``.
    solve_residual : float
        Largest relative residual of the two linear systems.
    """

    delta0: float
    l0: int
    a_coeffs: np.ndarray
    b_coeffs: np.ndarray
    time_scale: float
    half_span: float
    nodes: np.ndarray
    node_values: np.ndarray
    solve_residual: float


def _admissible_multiple(dt: float, cutoff: float) -> int:
    """Largest grid multiple ``m`` with ``m*dt <= pi/(cutoff*KAPPA)``."""
    ratio = np.pi / (cutoff * KAPPA * dt)
    m = int(np.floor(ratio + 1e-9))
    if m < 2:
        # Without the margin the strict bound m*dt < pi/cutoff may still hold.
        m = int(np.ceil(np.pi / (cutoff * dt) - 1e-9)) - 1
    return m


def choose_resample_period(dt: float, cutoff: float, half_span: float | None = None) -> float:
    """Resampling period for a trend below ``cutoff`` (rad/s).

    The period is ``pi/(cutoff*KAPPA)`` rounded down to a multiple of ``dt``,
    so the resampling nodes land on samples.  With ``half_span`` (``l*dt``)
    it is further reduced until ``l0 = floor(half_span/delta0) >= 2``.

    Raises
    ------
    TrendFitError
        When no admissible period exists.
    """
    if not (cutoff > 0 and np.isfinite(cutoff)):
        raise TrendFitError(f"cutoff must be positive, got {cutoff}")
    if cutoff >= np.pi / dt:
        raise TrendFitError("cutoff must lie below the Nyquist limit pi/dt")
    m = _admissible_multiple(dt, cutoff)
    if m < 2:
        raise TrendFitError(
            "cutoff too close to the Nyquist limit: no resampling period "
            "between dt and pi/cutoff")
    if half_span is not None:
        l = int(round(half_span / dt))
        if l // m < 2:
            m = l // 2
        if m < 2:
            raise TrendFitError("signal too short to resample with l0 >= 2")
    return m * dt


def _solve(M, rhs):
    lu = lu_factor(M)
    x = lu_solve(lu, rhs)
    # One step of iterative refinement.
    x = x + lu_solve(lu, rhs - M @ x)
    scale = np.linalg.norm(rhs)
    resid = float(np.linalg.norm(M @ x - rhs) / scale) if scale > 0 else 0.0
    return x, resid


def _unit_responses(x, l0):
    """Even and odd polynomial interpolants of unit node vectors at ``x``.

    Column ``j`` of the even block interpolates the even node vector with
    ones at ``+-x_j`` (``j = 0..l0``); the odd block likewise for the odd
    node vector with ``+1`` at ``x_j`` and ``-1`` at ``-x_j`` (``j = 1..l0``).
    """
    xn = np.arange(l0 + 1) / l0
    p = np.arange(l0 + 1)
    Ve = xn[:, None] ** (2 * p[None, :])
    Vo = xn[1:, None] ** (2 * p[None, 1:] - 1)
    # Small systems (at most 13 x 13); the inverse is formed explicitly.
    Fe = (x[:, None] ** (2 * p[None, :])) @ np.linalg.inv(Ve)
    Fo = (x[:, None] ** (2 * p[None, 1:] - 1)) @ np.linalg.inv(Vo)
    return Fe, Fo


def _antialiased_nodes(src: DiscreteSignal, m: int, l0: int) -> np.ndarray:
    """Node values of the parity polynomial sharing the low band of ``src``."""
    l = src.l
    nb = l // m
    pos = l + m * np.arange(l0 + 1)
    S, C = trig_columns(l, np.arange(nb + 1))
    qc, _ = np.linalg.qr(C)
    qs, _ = np.linalg.qr(S[:, 1:nb + 1])
    pair = parity_decompose(src)
    Fe, Fo = _unit_responses(src.indices / (l0 * m), l0)
    Ke = qc[pos] @ (qc.T @ Fe)
    re = qc[pos] @ (qc.T @ pair.even.samples)
    Ko = qs[pos[1:]] @ (qs.T @ Fo)
    ro = qs[pos[1:]] @ (qs.T @ pair.odd.samples)
    if l0 * m == l:
        # Every sine vanishes at the interval ends, so the low band cannot
        # see the odd endpoint value; oscillations cannot contribute there
        # either, and it is matched directly.
        Ko[-1] = Fo[-1]
        ro[-1] = pair.odd.samples[-1]
    cond = max(np.linalg.cond(Ke), np.linalg.cond(Ko))
    if cond > _MAX_COND:
        raise TrendFitError(f"anti-aliasing system condition {cond:.2e} too large")
    ze = np.linalg.solve(Ke, re)
    zo = np.linalg.solve(Ko, ro)
    return np.concatenate([(ze[1:] - zo)[::-1], [ze[0]], ze[1:] + zo])


def fit_trend(u: DiscreteSignal, cutoff: float, oscillatory=None,
              antialias: bool = True) -> TrendFit:
    """Fit the low-frequency trend of ``u`` below ``cutoff`` (rad/s).

    Parameters
    ----------
    u : DiscreteSignal
    cutoff : float
        Upper trend frequency in rad/s.
    oscillatory : array_like, optional
        Samples of known oscillatory content, subtracted before resampling.
    antialias : bool, optional
        Solve for alias-free node values (default).  With ``False`` the
        nodes are plain samples of the interpolant.

    Returns
    -------
    TrendFit

    Raises
    ------
    TrendFitError
        For an inadmissible cutoff, ``l0 > MAX_L0`` or an ill-conditioned
        system.
    """
    delta0 = choose_resample_period(u.dt, cutoff, u.half_span)
    l0 = int(np.floor(u.half_span / delta0 + 1e-9))
    if l0 > MAX_L0:
        raise TrendFitError(
            f"resampled half-length l0={l0} exceeds {MAX_L0}; lower the cutoff")
    src = u
    if oscillatory is not None:
        src = u.with_samples(u.samples - np.asarray(oscillatory, dtype=float))
    k = np.arange(-l0, l0 + 1)
    nodes = k * delta0
    if antialias:
        vals = _antialiased_nodes(src, int(round(delta0 / u.dt)), l0)
    else:
        vals = np.asarray(interpolant_eval(src, nodes))
    even = 0.5 * (vals + vals[::-1])
    odd = 0.5 * (vals - vals[::-1])
    x = np.arange(1, l0 + 1) / l0
    p = np.arange(1, l0 + 1)
    Me = x[:, None] ** (2 * p[None, :])
    Mo = x[:, None] ** (2 * p[None, :] - 1)
    cond = max(np.linalg.cond(Me), np.linalg.cond(Mo))
    if cond > _MAX_COND:
        raise TrendFitError(
            f"trend system condition {cond:.2e} too large; use a larger "
            "resampling period or a lower cutoff")
    a0 = even[l0]
    a, re = _solve(Me, even[l0 + 1:] - a0)
    b, ro = _solve(Mo, odd[l0 + 1:])
    a_coeffs = np.concatenate([[a0], a])
    return TrendFit(delta0, l0, a_coeffs, b, l0 * delta0, u.half_span,
                    nodes, vals, max(re, ro))


def eval_trend(fit: TrendFit, t):
    """Evaluate the fitted trend at time(s) ``t`` inside the principal interval."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(np.abs(t_arr) > fit.half_span * (1 + 1e-12)):
        raise ValueError("trend evaluation outside the principal interval is refused")
    x = t_arr / fit.time_scale
    x2 = x * x
    even = np.polynomial.polynomial.polyval(x2, fit.a_coeffs)
    odd = x * np.polynomial.polynomial.polyval(x2, fit.b_coeffs)
    out = even + odd
    return float(out) if t_arr.ndim == 0 else out


def trend_signal(fit: TrendFit, u: DiscreteSignal) -> DiscreteSignal:
    """Trend sampled on the grid of ``u``."""
    return u.with_samples(eval_trend(fit, u.times))
