"""Signal CSV files and JSON result manifests.

A signal file is two-column CSV preceded by comment lines::

    # rate_hz=100
    # label=example 7
    # columns=t,value
    -1,-5.5
    ...

Values are written with 17 significant digits, so a write/read round trip
reproduces the samples bit for bit.  Times must be strictly increasing and
uniformly spaced to 1e-9 relative; the sampling period is taken from the
``rate_hz`` header.  The middle row is time zero for analysis purposes.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import SignalFormatError
from ..signal_core import DiscreteSignal

__all__ = ["SignalFile", "read_signal", "write_signal", "write_table", "write_manifest",
           "read_manifest", "to_signal"]

_SPACING_TOL = 1e-9


@dataclass(frozen=True)
class SignalFile:
    """Contents of a signal file.

    Attributes
    ----------
    rate_hz : float
    times : ndarray
        Sample times in seconds, as written in the file.
    values : ndarray
    label : str or None
    """

    rate_hz: float
    times: np.ndarray
    values: np.ndarray
    label: str | None = None


def _fmt(x: float) -> str:
    return "%.17g" % x


def write_signal(path, times, values, rate_hz: float, label: str | None = None) -> Path:
    """Write a signal file; returns the path."""
    path = Path(path)
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.shape != values.shape or times.ndim != 1:
        raise ValueError("times and values must be 1-D arrays of equal length")
    lines = [f"# rate_hz={_fmt(rate_hz)}"]
    if label:
        lines.append(f"# label={label}")
    lines.append("# columns=t,value")
    lines.extend(f"{_fmt(t)},{_fmt(v)}" for t, v in zip(times, values))
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise SignalFormatError(f"cannot write {path}: {exc}") from exc
    return path


def write_table(path, columns: dict, comments: dict | None = None) -> Path:
    """Write equal-length named columns as CSV with ``# key=value`` comments."""
    path = Path(path)
    names = list(columns)
    arrays = [np.asarray(columns[k], dtype=float) for k in names]
    lines = [f"# {k}={v}" for k, v in (comments or {}).items()]
    lines.append("# columns=" + ",".join(names))
    lines.extend(",".join(_fmt(x) for x in row) for row in zip(*arrays))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_signal(path) -> SignalFile:
    """Parse and validate a signal file.

    Raises
    ------
    SignalFormatError
        Missing or invalid header, malformed rows, non-finite values or
        non-uniform times.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SignalFormatError(f"cannot read {path}: {exc}") from exc
    rate = None
    label = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, val = line[1:].strip().partition("=")
            key = key.strip()
            if sep and key == "rate_hz":
                try:
                    rate = float(val)
                except ValueError:
                    raise SignalFormatError(f"{path}:{lineno}: bad rate_hz {val!r}") from None
            elif sep and key == "label":
                label = val.strip()
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise SignalFormatError(f"{path}:{lineno}: expected 't,value', got {line!r}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise SignalFormatError(f"{path}:{lineno}: non-numeric row {line!r}") from None
    if rate is None:
        raise SignalFormatError(f"{path}: missing '# rate_hz=' header")
    if not (np.isfinite(rate) and rate > 0):
        raise SignalFormatError(f"{path}: rate_hz must be positive, got {rate}")
    if not rows:
        raise SignalFormatError(f"{path}: no samples")
    data = np.array(rows)
    times, values = data[:, 0], data[:, 1]
    if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
        raise SignalFormatError(f"{path}: non-finite entries")
    if times.size > 1:
        steps = np.diff(times)
        dt = 1.0 / rate
        if np.any(steps <= 0):
            raise SignalFormatError(f"{path}: times must be strictly increasing")
        # Allow for decimal rounding of large time stamps on top of the spacing tolerance.
        slack = _SPACING_TOL * dt + 8 * np.finfo(float).eps * np.max(np.abs(times))
        if np.max(np.abs(steps - dt)) > slack:
            raise SignalFormatError(f"{path}: times are not uniformly spaced at 1/rate_hz")
    return SignalFile(rate, times, values, label)


def to_signal(sf: SignalFile, drop_last: bool = False) -> DiscreteSignal:
    """Analysis signal from a file; rows are indexed ``-l..l`` in file order.

    With ``drop_last`` an even row count is fixed by discarding the final
    row, with a warning.
    """
    values = sf.values
    if values.size % 2 == 0:
        if not drop_last:
            raise SignalFormatError(
                f"analysis needs an odd number of samples, got {values.size} "
                "(use --drop-last to discard the final row)")
        warnings.warn("even sample count: dropping the final row", stacklevel=2)
        values = values[:-1]
    return DiscreteSignal(values, 1.0 / sf.rate_hz)


def write_manifest(path, manifest: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=False) + "\n")
    return path


def read_manifest(path) -> dict:
    return json.loads(Path(path).read_text())
