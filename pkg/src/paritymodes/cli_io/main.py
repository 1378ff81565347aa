"""Command-line front end.

Frequencies on the command line and in manifests are in Hz; the library
works in rad/s (``omega = 2*pi*f``).  Band edges given in Hz are rounded to
the nearest frequency bin ``eps/(2*pi)`` and the bins actually used are
reported back.

Exit codes: 0 success, 2 input or format error, 3 algorithm error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from .. import __version__
from ..errors import AlgorithmError, SignalFormatError
from ..lowfreq import fit_trend, trend_signal
from ..mode_search import SearchConfig, parity_kind, decompose_full, evaluate_band, search_mode_trace
from ..phase_freq import (classify_frequency_sign, companion_even_source, companion_odd_source,
                          compute_phase_track)
from ..projection import BandInterval
from ..signal_core import parity_decompose
from ..spectrum import compute_axis_spectra, detect_lobes
from .formats import read_signal, to_signal, write_manifest, write_signal, write_table
from .generators import EXAMPLE_IDS, example_rate, example_signal

__all__ = ["main", "build_parser"]

EXIT_FORMAT = 2
EXIT_ALGORITHM = 3


def _hz_pair(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI in Hz, got {text!r}") from None
    return lo, hi


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--oversample", type=int, default=8, help="grid points per bin (>= 8)")
    p.add_argument("--sign-tol", type=float, default=0.0,
                   help="slack in rad/s for the frequency-sign test")
    p.add_argument("--expansion-order", default="lower-first",
                   choices=("lower-first", "upper-first", "best-first"))
    p.add_argument("--plot", action="store_true", help="also write SVG plots")
    p.add_argument("--drop-last", action="store_true",
                   help="drop the final row of an even-length input (with a warning)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paritymodes", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a reference example signal")
    p.add_argument("id", type=int, choices=EXAMPLE_IDS)
    p.add_argument("out")
    _common(p)

    for name, helptext in (("spectra", "real/imaginary-axis spectra and lobes"),
                           ("phase", "amplitude, phase and instantaneous frequency")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input")
        p.add_argument("-o", "--out-dir", default=".")
        _common(p)

    p = sub.add_parser("project", help="project onto a band")
    p.add_argument("input")
    p.add_argument("--band", type=_hz_pair, required=True, metavar="LO,HI")
    p.add_argument("--axis", default="full", choices=("full", "real", "imaginary"),
                   help="work on the whole signal or on its even (real) or odd part")
    p.add_argument("-o", "--out-dir", default=".")
    _common(p)

    p = sub.add_parser("search", help="grow a seed band into a mode")
    p.add_argument("input")
    p.add_argument("--seed", type=_hz_pair, required=True, metavar="LO,HI")
    p.add_argument("--axis", default="full", choices=("full", "real", "imaginary"),
                   help="work on the whole signal or on its even (real) or odd part")
    p.add_argument("-o", "--out-dir", default=".")
    _common(p)

    p = sub.add_parser("trend", help="fit the low-frequency trend")
    p.add_argument("input")
    p.add_argument("--cutoff", type=float, required=True, metavar="HZ")
    p.add_argument("-o", "--out-dir", default=".")
    _common(p)

    p = sub.add_parser("decompose", help="trend, modes and residual")
    p.add_argument("input")
    p.add_argument("--trend-cutoff", type=float, default=None, metavar="HZ")
    p.add_argument("-o", "--out-dir", default=".")
    _common(p)
    return parser


def _config(args) -> SearchConfig:
    return SearchConfig(sign_tolerance=args.sign_tol, oversample=args.oversample,
                        expansion_order=args.expansion_order)


def _band(u, lo_hz: float, hi_hz: float) -> BandInterval:
    step = u.epsilon / (2 * np.pi)
    return BandInterval(int(round(lo_hz / step)), int(round(hi_hz / step)), u.epsilon)


def _header(args, sf, u) -> dict:
    return {
        "command": args.command,
        "input": str(Path(args.input).resolve()),
        "config": {"oversample": args.oversample, "sign_tol": args.sign_tol,
                   "expansion_order": args.expansion_order},
        "rate_hz": sf.rate_hz,
        "n": u.n,
        "epsilon_hz": u.epsilon / (2 * np.pi),
        "nyquist_hz": u.nyquist / (2 * np.pi),
    }


def _mode_record(md, energy: float, fname: str | None = None) -> dict:
    lo, hi = md.band.hz()
    rec = {"axis": md.axis, "band_hz": [lo, hi], "band_index": [md.band.i, md.band.m],
           "sign": md.freq_sign, "energy_fraction": md.energy() / energy if energy else 0.0}
    if fname:
        rec["file"] = fname
    return rec


def _load(args):
    sf = read_signal(args.input)
    times = sf.times
    u = to_signal(sf, drop_last=args.drop_last)
    return sf, times[:u.n], u


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise SignalFormatError(f"cannot create {out}: {exc}") from exc
    return out


def _plot(path, series, **kw):
    from .plotting import emit_plot
    return emit_plot(series, path, **kw)


def _cmd_gen(args) -> dict:
    u = example_signal(args.id)
    path = write_signal(args.out, u.times, u.samples, example_rate(args.id),
                        label=f"example {args.id}")
    if args.plot:
        _plot(Path(path).with_suffix(".svg"), [(f"example {args.id}", u.times, u.samples)])
    return {}


def _cmd_spectra(args) -> dict:
    sf, times, u = _load(args)
    out = _out_dir(args)
    spec = compute_axis_spectra(u, args.oversample)
    write_table(out / "spectra.csv",
                {"freq_hz": spec.freq_grid / (2 * np.pi), "fre": spec.fre, "fim": spec.fim})
    man = _header(args, sf, u)
    man["spectra_file"] = "spectra.csv"
    man["lobes"] = {}
    for axis, lobes in detect_lobes(spec).items():
        man["lobes"][axis] = [
            {"lo_hz": lb.lo / (2 * np.pi), "hi_hz": lb.hi / (2 * np.pi),
             "peak_hz": lb.peak_freq / (2 * np.pi), "peak_value": lb.peak_value,
             "principal": lb.is_principal} for lb in lobes]
    if args.plot:
        f = spec.freq_grid / (2 * np.pi)
        _plot(out / "spectra.svg", [("Fre", f, spec.fre), ("Fim", f, spec.fim)],
              xlabel="frequency (Hz)", ylabel="spectrum")
    write_manifest(out / "manifest.json", man)
    return man


def _cmd_phase(args) -> dict:
    sf, times, u = _load(args)
    out = _out_dir(args)
    kind = parity_kind(u)
    pair = parity_decompose(u)
    if kind == "even":
        pair = companion_even_source(pair.even)
    elif kind == "odd":
        pair = companion_odd_source(pair.odd)
    track = compute_phase_track(pair, args.oversample)
    t0 = times[u.l]
    write_table(out / "phase.csv",
                {"t": track.t_grid + t0, "amplitude": track.amplitude, "phase": track.phase,
                 "omega": track.inst_freq, "valid": track.valid.astype(float)})
    man = _header(args, sf, u)
    w = track.inst_freq[track.valid]
    man.update({"phase_file": "phase.csv", "source": kind, "route": track.route,
                "sign": classify_frequency_sign(track, args.sign_tol),
                "omega_min": float(np.min(w)), "omega_max": float(np.max(w))})
    if args.plot:
        _plot(out / "omega.svg", [("omega (rad/s)", track.t_grid + t0, track.inst_freq)],
              ylabel="rad/s")
    write_manifest(out / "manifest.json", man)
    return man


def _write_mode(out, md, times, rate, name):
    write_signal(out / name, times, md.samples.samples, rate, label=f"{md.axis} mode")


def _axis_part(u, axis: str):
    if axis == "full":
        return u
    pair = parity_decompose(u)
    return pair.even if axis == "real" else pair.odd


def _cmd_project(args) -> dict:
    sf, times, u = _load(args)
    out = _out_dir(args)
    u = _axis_part(u, args.axis)
    band = _band(u, *args.band)
    md = evaluate_band(u, band, _config(args))
    _write_mode(out, md, times, sf.rate_hz, "mode.csv")
    man = _header(args, sf, u)
    man["mode"] = _mode_record(md, u.norm() ** 2, "mode.csv")
    if args.plot:
        _plot(out / "mode.svg", [("signal", times, u.samples), ("mode", times, md.samples.samples)])
    write_manifest(out / "manifest.json", man)
    return man


def _cmd_search(args) -> dict:
    sf, times, u = _load(args)
    out = _out_dir(args)
    u = _axis_part(u, args.axis)
    seed = _band(u, *args.seed)
    md, trace = search_mode_trace(u, seed, _config(args))
    _write_mode(out, md, times, sf.rate_hz, "mode.csv")
    man = _header(args, sf, u)
    man["seed_index"] = [seed.i, seed.m]
    man["mode"] = _mode_record(md, u.norm() ** 2, "mode.csv")
    man["trace_hz"] = [list(step.band.hz()) for step in trace]
    if args.plot:
        _plot(out / "mode.svg", [("signal", times, u.samples), ("mode", times, md.samples.samples)])
    write_manifest(out / "manifest.json", man)
    return man


def _cmd_trend(args) -> dict:
    sf, times, u = _load(args)
    out = _out_dir(args)
    fit = fit_trend(u, 2 * np.pi * args.cutoff)
    tr = trend_signal(fit, u)
    write_signal(out / "trend.csv", times, tr.samples, sf.rate_hz, label="trend")
    man = _header(args, sf, u)
    man.update({"trend_file": "trend.csv", "cutoff_hz": args.cutoff, "delta0": fit.delta0,
                "l0": fit.l0, "time_scale": fit.time_scale,
                "a_coeffs": fit.a_coeffs.tolist(), "b_coeffs": fit.b_coeffs.tolist(),
                "solve_residual": fit.solve_residual})
    if args.plot:
        _plot(out / "trend.svg", [("signal", times, u.samples), ("trend", times, tr.samples)])
    write_manifest(out / "manifest.json", man)
    return man


def _cmd_decompose(args) -> dict:
    sf, times, u = _load(args)
    out = _out_dir(args)
    cutoff = None if args.trend_cutoff is None else 2 * np.pi * args.trend_cutoff
    res = decompose_full(u, cutoff, _config(args))
    man = _header(args, sf, u)
    man["trend_cutoff_hz"] = args.trend_cutoff
    energy = u.norm() ** 2
    modes = []
    for k, md in enumerate(res.modes):
        name = f"mode_{k:02d}.csv"
        _write_mode(out, md, times, sf.rate_hz, name)
        rec = _mode_record(md, energy, name)
        rec["index"] = k
        modes.append(rec)
    man["modes"] = modes
    write_signal(out / "trend.csv", times, res.trend.samples, sf.rate_hz, label="trend")
    write_signal(out / "residual.csv", times, res.residual.samples, sf.rate_hz, label="residual")
    man["trend_file"] = "trend.csv"
    man["residual_file"] = "residual.csv"
    if res.trend_fit is not None:
        man["trend"] = {"delta0": res.trend_fit.delta0, "l0": res.trend_fit.l0,
                        "a_coeffs": res.trend_fit.a_coeffs.tolist(),
                        "b_coeffs": res.trend_fit.b_coeffs.tolist()}
    if args.plot:
        series = [("signal", times, u.samples)]
        if res.trend_fit is not None:
            series.append(("trend", times, res.trend.samples))
        series += [(f"mode {k} ({r['axis']})", times, md.samples.samples)
                   for k, (r, md) in enumerate(zip(modes, res.modes))]
        _plot(out / "decomposition.svg", series)
    write_manifest(out / "manifest.json", man)
    return man


_COMMANDS = {"gen": _cmd_gen, "spectra": _cmd_spectra, "phase": _cmd_phase,
             "project": _cmd_project, "search": _cmd_search, "trend": _cmd_trend,
             "decompose": _cmd_decompose}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = _show_warning
            _COMMANDS[args.command](args)
    except SignalFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except AlgorithmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ALGORITHM
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    return 0


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
