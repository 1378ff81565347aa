"""Band-boundary search for modes and whole-signal decomposition.

A mode is a band component whose instantaneous frequency keeps one sign over
the whole interval.  The search starts from a seed band, checks that its
projection is single-signed and then widens the band one resolution unit at a
time, downwards and upwards, for as long as the sign survives.

Widening is confined to a search domain.  By default this is the run of
adjacent principal lobes that contains the seed: an isolated principal lobe
is a mode on its own, while touching principal lobes may share one.
Without that limit, bins that hold no energy (or only leakage from
neighbouring tones) would keep the sign unchanged and be absorbed
indefinitely.
"""

from __future__ import annotations

import warnings

from dataclasses import dataclass, field

import numpy as np

from .errors import AlgorithmError, SeedNotInModeError, ZeroSignalError
from .lowfreq import TrendFit, fit_trend, trend_signal
from .phase_freq import PhaseTrack, band_phase_track, classify_frequency_sign
from .projection import BandInterval, Mode, build_band_basis, project_band
from .signal_core import DiscreteSignal, parity_decompose
from .spectrum import (
    Lobe,
    compute_axis_spectra,
    detect_lobes,
    lobe_bins,
    lobe_width_classify,
)

__all__ = [
    "SearchConfig",
    "SearchStep",
    "DecompositionResult",
    "evaluate_band",
    "parity_kind",
    "search_mode",
    "search_mode_trace",
    "default_search_limits",
    "decompose_axis",
    "decompose_full",
]

_ORDERS = ("lower-first", "upper-first", "best-first")
_SOURCE_AXIS = {"even": "real", "odd": "imaginary", "full": "full"}
# Relative size below which a parity part is treated as absent.
_PURITY = 1e-12
# Components this small relative to the whole signal are not searched.
_NEGLIGIBLE = 1e-10
_BACKFIT_TOL = 1e-13
_BACKFIT_MAX = 200


@dataclass(frozen=True)
class SearchConfig:
    """Search settings.

    Attributes
    ----------
    max_expansions : int or None
        Limit on accepted one-bin extensions; ``None`` means ``2*l``.
    sign_tolerance : float
        Slack in rad/s for the sign test (see ``classify_frequency_sign``).
    oversample : int
        Time-grid and spectrum oversampling.
    expansion_order : {"lower-first", "upper-first", "best-first"}
    """

    max_expansions: int | None = None
    sign_tolerance: float = 0.0
    oversample: int = 8
    expansion_order: str = "lower-first"

    def __post_init__(self):
        if self.expansion_order not in _ORDERS:
            raise ValueError(f"expansion_order must be one of {_ORDERS}")
        if self.max_expansions is not None and self.max_expansions < 1:
            raise ValueError("max_expansions must be positive")
        if self.sign_tolerance < 0:
            raise ValueError("sign_tolerance must be non-negative")
        if self.oversample < 8:
            raise ValueError("oversample must be >= 8")


@dataclass(frozen=True)
class SearchStep:
    """One accepted band during a search."""

    band: BandInterval
    sign: str
    min_abs_freq: float


@dataclass(frozen=True, eq=False)
class DecompositionResult:
    """Trend, modes and residual of a signal.

    ``trend + sum(modes) + residual`` reproduces the input.
    """

    trend: DiscreteSignal
    modes: list
    residual: DiscreteSignal
    report: list
    trend_fit: TrendFit | None = None
    backfit_iterations: int = 0
    source: DiscreteSignal | None = field(default=None, repr=False)


def parity_kind(u: DiscreteSignal) -> str:
    pair = parity_decompose(u)
    ne = pair.even.norm()
    no = pair.odd.norm()
    if ne == 0 and no == 0:
        raise ZeroSignalError("zero signal has no phase")
    if no <= _PURITY * ne:
        return "even"
    if ne <= _PURITY * no:
        return "odd"
    return "full"


class _BandEvaluator:
    """Projects ``u`` onto candidate bands and classifies them, with caching."""

    def __init__(self, u: DiscreteSignal, kind: str, cfg: SearchConfig):
        self.u = u
        self.kind = kind
        self.cfg = cfg
        self._cache = {}

    def __call__(self, i: int, m: int):
        key = (i, m)
        if key not in self._cache:
            band = BandInterval(i, m, self.u.epsilon)
            mode = project_band(self.u, build_band_basis(self.u.n, self.u.dt, band),
                                _SOURCE_AXIS[self.kind])
            try:
                track = band_phase_track(band, mode.sin_coeffs, mode.cos_coeffs,
                                         self.u.l, self.u.dt, self.cfg.oversample,
                                         self.kind)
                sign = classify_frequency_sign(track, self.cfg.sign_tolerance)
                w = track.inst_freq[track.valid]
                margin = float(np.min(np.abs(w)))
            except ZeroSignalError:
                track, sign, margin = None, "mixed", 0.0
            self._cache[key] = (mode, track, sign, margin)
        return self._cache[key]


def evaluate_band(u: DiscreteSignal, band: BandInterval, cfg: SearchConfig | None = None,
                  kind: str | None = None) -> Mode:
    """Project ``u`` onto ``band`` and classify the frequency sign.

    The returned mode carries its phase track; its ``freq_sign`` is
    ``"positive"``, ``"negative"`` or ``"mixed"``.
    """
    cfg = cfg or SearchConfig()
    kind = kind or parity_kind(u)
    mode, track, sign, _ = _BandEvaluator(u, kind, cfg)(band.i, band.m)
    return Mode(mode.samples, mode.band, mode.axis, sign, mode.sin_coeffs,
                mode.cos_coeffs, track)


def _as_interval(limits, eps) -> BandInterval:
    if isinstance(limits, BandInterval):
        return limits
    i, m = limits
    return BandInterval(int(i), int(m), eps)


def _lobe_groups(lobes: list[Lobe]) -> list[int]:
    """Group id per lobe; consecutive principal lobes share an id."""
    ids = []
    gid = -1
    prev = False
    for lb in lobes:
        if lb.is_principal and prev:
            ids.append(gid)
        else:
            gid += 1
            ids.append(gid)
        prev = lb.is_principal
    return ids


def default_search_limits(u: DiscreteSignal, seed: BandInterval, oversample: int = 8,
                          kind: str | None = None) -> BandInterval:
    """Search domain for a seed: the lobes it touches plus their principal groups.

    For a pure even (odd) signal only the real (imaginary) axis is consulted;
    otherwise both axes contribute.
    """
    kind = kind or parity_kind(u)
    axes = {"even": ("real",), "odd": ("imaginary",), "full": ("real", "imaginary")}[kind]
    spec = compute_axis_spectra(u, oversample)
    lo, hi = seed.i, seed.m
    for axis in axes:
        lobes = detect_lobes(spec, axis)
        groups = _lobe_groups(lobes)
        hit = set()
        for lb, g in zip(lobes, groups):
            b = lobe_bins(lb, u.epsilon, u.l)
            if b.size and b[0] <= seed.m and seed.i <= b[-1]:
                hit.add(g if lb.is_principal else ("lobe", id(lb)))
                if not lb.is_principal:
                    lo, hi = min(lo, b[0]), max(hi, b[-1])
        for lb, g in zip(lobes, groups):
            if g in hit and lb.is_principal:
                b = lobe_bins(lb, u.epsilon, u.l)
                if b.size:
                    lo, hi = min(lo, b[0]), max(hi, b[-1])
    return BandInterval(max(lo, 1), min(hi, u.l - 1), u.epsilon)


def search_mode_trace(u: DiscreteSignal, seed: BandInterval, cfg: SearchConfig | None = None,
                      *, limits=None, kind: str | None = None):
    """Run the band search and return the mode with its accepted bands.

    Parameters
    ----------
    u : DiscreteSignal
    seed : BandInterval
    cfg : SearchConfig, optional
    limits : BandInterval or (int, int), optional
        Search domain in bin indices; defaults to
        :func:`default_search_limits`.  The seed is always inside it.
    kind : {"even", "odd", "full"}, optional
        Parity treatment; inferred from ``u`` when omitted.  Pure even or odd
        signals get a companion for their phase.

    Returns
    -------
    mode : Mode
    trace : list of SearchStep
        The seed followed by every accepted extension.

    Raises
    ------
    SeedNotInModeError
        When the seed projection is already mixed-sign.
    AlgorithmError
        When ``max_expansions`` is exceeded.
    """
    cfg = cfg or SearchConfig()
    eps = u.epsilon
    if seed.m > u.l - 1:
        raise ValueError(f"seed band outside the admissible index range 1..{u.l - 1}")
    kind = kind or parity_kind(u)
    if limits is None:
        dom = default_search_limits(u, seed, cfg.oversample, kind)
    else:
        dom = _as_interval(limits, eps)
    lo_lim = max(1, min(dom.i, seed.i))
    hi_lim = min(u.l - 1, max(dom.m, seed.m))
    max_exp = cfg.max_expansions or 2 * u.l

    evaluate = _BandEvaluator(u, kind, cfg)
    mode, track, sign0, margin = evaluate(seed.i, seed.m)
    if sign0 == "mixed":
        raise SeedNotInModeError(
            f"seed is not inside a mode: band [{seed.i}, {seed.m}] has mixed-sign frequency",
            track)
    i, m = seed.i, seed.m
    trace = [SearchStep(mode.band, sign0, margin)]

    def accept(ci, cm):
        res = evaluate(ci, cm)
        return res if res[2] == sign0 else None

    expansions = 0
    while True:
        moved = 0
        lower = (i - 1, m) if i - 1 >= lo_lim else None
        upper = (i, m + 1) if m + 1 <= hi_lim else None
        if cfg.expansion_order == "best-first":
            options = [(c, accept(*c)) for c in (lower, upper) if c is not None]
            options = [(c, r) for c, r in options if r is not None]
            if options:
                c, r = max(options, key=lambda cr: cr[1][3])
                i, m = c
                trace.append(SearchStep(r[0].band, sign0, r[3]))
                moved = 1
        else:
            steps = ("lower", "upper") if cfg.expansion_order == "lower-first" else ("upper", "lower")
            for step in steps:
                if step == "lower" and i - 1 >= lo_lim:
                    r = accept(i - 1, m)
                    if r is not None:
                        i -= 1
                        trace.append(SearchStep(r[0].band, sign0, r[3]))
                        moved += 1
                elif step == "upper" and m + 1 <= hi_lim:
                    r = accept(i, m + 1)
                    if r is not None:
                        m += 1
                        trace.append(SearchStep(r[0].band, sign0, r[3]))
                        moved += 1
        if not moved:
            break
        expansions += moved
        if expansions > max_exp:
            raise AlgorithmError(f"band search exceeded {max_exp} expansions")

    mode, track, sign, _ = evaluate(i, m)
    final = Mode(mode.samples, mode.band, mode.axis, sign, mode.sin_coeffs,
                 mode.cos_coeffs, track)
    return final, trace


def search_mode(u: DiscreteSignal, seed: BandInterval, cfg: SearchConfig | None = None,
                *, limits=None, kind: str | None = None) -> Mode:
    """Grow a seed band into a mode; see :func:`search_mode_trace`."""
    return search_mode_trace(u, seed, cfg, limits=limits, kind=kind)[0]


def _free_run(free: np.ndarray, v: int, lo: int, hi: int):
    """Maximal run of free bins around ``v`` inside ``[lo, hi]``."""
    if not free[v]:
        return None
    a = v
    while a - 1 >= lo and free[a - 1]:
        a -= 1
    b = v
    while b + 1 <= hi and free[b + 1]:
        b += 1
    return a, b


def decompose_axis(component: DiscreteSignal, axis: str, cfg: SearchConfig | None = None,
                   *, min_freq: float = 0.0, reference_norm: float | None = None) -> list:
    """Extract the modes of a pure even (real) or pure odd (imaginary) component.

    Principal lobes are visited from the strongest peak downwards.  An
    isolated single-component lobe seeds with all of its bins; a wider lobe
    seeds with the bins within ``eps`` of its peak.  The search may extend
    over the free bins of the principal-lobe group containing the seed.
    Bins of accepted modes are removed from later searches.

    Parameters
    ----------
    component : DiscreteSignal
    axis : {"real", "imaginary"}
    cfg : SearchConfig, optional
    min_freq : float, optional
        Trend cutoff in rad/s: lobes peaking below it are skipped and no
        mode band reaches below it.
    reference_norm : float, optional
        Norm of the whole signal; components smaller than ``1e-10`` of it
        are treated as empty.

    Returns
    -------
    list of Mode
        Sorted by lower band edge.
    """
    cfg = cfg or SearchConfig()
    if axis not in ("real", "imaginary"):
        raise ValueError(f"unknown axis {axis!r}")
    norm = component.norm()
    ref = norm if reference_norm is None else reference_norm
    if norm == 0 or norm <= _NEGLIGIBLE * ref:
        return []
    x = component.samples
    mirror = -x[::-1] if axis == "real" else x[::-1]
    if np.linalg.norm(0.5 * (x + mirror)) > 1e-9 * norm:
        raise ValueError(f"{axis}-axis component must be pure "
                         f"{'even' if axis == 'real' else 'odd'}")
    kind = "even" if axis == "real" else "odd"
    l, eps = component.l, component.epsilon
    spec = compute_axis_spectra(component, cfg.oversample)
    lobes = detect_lobes(spec, axis, min_freq=min_freq)
    curve = np.abs(spec.curve(axis)[::spec.oversample])
    groups = _lobe_groups(lobes)
    bins = [lobe_bins(lb, eps, l) for lb in lobes]
    group_span = {}
    for g, b, lb in zip(groups, bins, lobes):
        if lb.is_principal and b.size:
            lo, hi = group_span.get(g, (b[0], b[-1]))
            group_span[g] = (min(lo, b[0]), max(hi, b[-1]))

    free = np.ones(l, dtype=bool)
    # Bins below the trend cutoff belong to the trend.
    free[:max(1, int(np.ceil(min_freq / eps - 1e-9)))] = False
    order = sorted((j for j, lb in enumerate(lobes) if lb.is_principal and bins[j].size),
                   key=lambda j: (-abs(lobes[j].peak_value), lobes[j].lo))
    modes = []
    for j in order:
        lb = lobes[j]
        multi = lobe_width_classify(lb, eps) == "multi-component"
        g_lo, g_hi = group_span[groups[j]]
        # A lobe may hold several modes; keep seeding until its bins are used.
        while True:
            own = [v for v in bins[j] if free[v]]
            if not own:
                break
            anchor = max(own, key=lambda v: (curve[v], -v))
            domain = _free_run(free, anchor, g_lo, g_hi)
            lo_b, hi_b = _free_run(free, anchor, bins[j][0], bins[j][-1])
            if multi:
                lo_b, hi_b = max(lo_b, anchor - 1), min(hi_b, anchor + 1)
            seeds = [(lo_b, hi_b)]
            if (lo_b, hi_b) != (anchor, anchor):
                seeds.append((anchor, anchor))
            mode = None
            for s_lo, s_hi in seeds:
                try:
                    mode = search_mode(component, BandInterval(s_lo, s_hi, eps), cfg,
                                       limits=domain, kind=kind)
                    break
                except SeedNotInModeError:
                    continue
            if mode is None:
                break
            free[mode.band.i:mode.band.m + 1] = False
            modes.append(Mode(mode.samples, mode.band, axis, mode.freq_sign,
                              mode.sin_coeffs, mode.cos_coeffs, mode.track))
    modes.sort(key=lambda md: md.band.i)
    return modes


def _axis_components(u: DiscreteSignal):
    pair = parity_decompose(u)
    return (("real", pair.even), ("imaginary", pair.odd))


def _decompose_axes(u, cfg, min_freq, ref):
    modes = []
    for axis, comp in _axis_components(u):
        modes.extend(decompose_axis(comp, axis, cfg, min_freq=min_freq, reference_norm=ref))
    return modes


def _backfit_trend(u: DiscreteSignal, cutoff: float, cfg: SearchConfig):
    """Alternate trend fitting and projection onto the oscillatory bands.

    The bands come from a first pass over ``u``; the projections of
    ``u - trend`` onto them are removed before each trend fit, which strips
    the leakage of identified tones into the trend's low band.  When the
    alternation stops contracting (the trend is not polynomial below the
    cutoff), the plain anti-aliased fit is returned with a warning.
    """
    ref = u.norm()
    provisional = _decompose_axes(u, cfg, cutoff, ref)
    bases = [(md.axis, build_band_basis(u.n, u.dt, md.band)) for md in provisional]
    if not bases:
        fit = fit_trend(u, cutoff)
        return fit, trend_signal(fit, u).samples, 1
    trend = np.zeros(u.n)
    history = []
    for it in range(1, _BACKFIT_MAX + 1):
        pair = parity_decompose(u.with_samples(u.samples - trend))
        osc = np.zeros(u.n)
        for axis, basis in bases:
            comp = pair.even if axis == "real" else pair.odd
            osc += basis.project(comp.samples)
        fit = fit_trend(u, cutoff, oscillatory=osc)
        new = trend_signal(fit, u).samples
        delta = float(np.linalg.norm(new - trend))
        trend = new
        if delta <= _BACKFIT_TOL * ref:
            return fit, trend, it
        history.append(delta)
        if len(history) > 5 and history[-1] > 0.5 * history[-6]:
            break
    warnings.warn("trend and mode bands do not separate below the cutoff; "
                  "using the trend fit without mode deflation", RuntimeWarning,
                  stacklevel=3)
    fit = fit_trend(u, cutoff)
    return fit, trend_signal(fit, u).samples, it


def decompose_full(u: DiscreteSignal, trend_cutoff: float | None = None,
                   cfg: SearchConfig | None = None) -> DecompositionResult:
    """Trend, per-axis modes and residual of ``u``.

    Parameters
    ----------
    u : DiscreteSignal
    trend_cutoff : float, optional
        Trend cutoff in rad/s; without it the trend is zero.
    cfg : SearchConfig, optional

    Returns
    -------
    DecompositionResult
    """
    cfg = cfg or SearchConfig()
    ref = u.norm()
    zero = u.with_samples(np.zeros(u.n))
    if ref == 0:
        return DecompositionResult(zero, [], zero, [], None, 0, u)
    fit = None
    iterations = 0
    trend = np.zeros(u.n)
    min_freq = 0.0
    if trend_cutoff is not None:
        fit, trend, iterations = _backfit_trend(u, trend_cutoff, cfg)
        min_freq = trend_cutoff
    remainder = u.with_samples(u.samples - trend)
    modes = _decompose_axes(remainder, cfg, min_freq, ref)
    residual = remainder.samples - sum((md.samples.samples for md in modes), np.zeros(u.n))
    energy = ref * ref
    report = []
    for idx, md in enumerate(modes):
        lo, hi = md.band.hz()
        report.append({
            "index": idx,
            "axis": md.axis,
            "band_hz": [lo, hi],
            "band_index": [md.band.i, md.band.m],
            "sign": md.freq_sign,
            "energy_fraction": md.energy() / energy,
        })
    return DecompositionResult(u.with_samples(trend), modes, u.with_samples(residual),
                               report, fit, iterations, u)
