"""Reference signals used throughout the documentation and tests.

Examples 1-9 are sampled at 100 Hz on ``t in [-1, 1]`` (201 samples).
Example 0 is a seeded 21-point random signal on ``[-30, 30]`` and Example 10
is sampled at 276 Hz on ``[-1, 1]``.
"""

from __future__ import annotations

import numpy as np

from ..signal_core import DiscreteSignal

__all__ = ["EXAMPLE_IDS", "RANDOM_SEED", "SAW_PERIOD", "sawtooth", "example_signal",
           "example_components", "example_rate"]

EXAMPLE_IDS = tuple(range(11))
RANDOM_SEED = 20240101
#: Period of the Example 10 sawtooth in seconds; amplitude is +-1.
SAW_PERIOD = 0.4


def example_rate(ex_id: int) -> float:
    """Sampling rate in Hz."""
    if ex_id == 0:
        return 1.0 / 3.0
    if ex_id == 10:
        return 276.0
    return 100.0


def _grid(rate: float, half_span: float) -> np.ndarray:
    l = int(round(half_span * rate))
    return np.arange(-l, l + 1) / rate


def sawtooth(t) -> np.ndarray:
    """Odd sawtooth of period ``SAW_PERIOD`` rising from -1 to 1.

    It crosses zero upwards at ``t = 0`` and jumps at ``t = (j + 1/2) * SAW_PERIOD``,
    where it takes the mid value 0.
    """
    t = np.asarray(t, dtype=float)
    phase = t / SAW_PERIOD + 0.5
    frac = phase - np.floor(phase)
    out = 2.0 * frac - 1.0
    at_jump = np.isclose(frac, 0.0, atol=1e-9) | np.isclose(frac, 1.0, atol=1e-9)
    return np.where(at_jump, 0.0, out)


def example_components(ex_id: int) -> dict:
    """Analytic components of an example on its sample grid.

    Returns
    -------
    dict
        Name to sample array; the signal is the sum of the values.
    """
    if ex_id == 0:
        t = _grid(example_rate(0), 30.0)
        rng = np.random.default_rng(RANDOM_SEED)
        return {"random": rng.standard_normal(t.size)}
    t = _grid(example_rate(ex_id), 1.0)
    pi = np.pi
    if ex_id == 1:
        return {"sin": np.sin(20 * t**3), "cos": np.cos(20 * t**3)}
    if ex_id == 2:
        return {"s3": 1.3 * np.sin(6 * pi * t), "s2.5": np.sin(5 * pi * t),
                "c3": 1.5 * np.cos(6 * pi * t), "c2.5": np.cos(5 * pi * t)}
    if ex_id == 3:
        f = np.arange(1, 88)
        arg = pi * np.outer(t, f)
        return {"sin": np.sin(arg).sum(axis=1), "cos": np.cos(arg).sum(axis=1)}
    if ex_id == 4:
        return {"s2.5": 1.3 * np.sin(5 * pi * t), "s6": np.sin(12 * pi * t),
                "c2": np.cos(4 * pi * t), "c6.5": np.cos(13 * pi * t)}
    if ex_id == 5:
        return {"s2.5": 1.3 * np.sin(5 * pi * t), "s3.5": np.sin(7 * pi * t),
                "c2": np.cos(4 * pi * t), "c3": np.cos(6 * pi * t)}
    if ex_id == 6:
        window = (np.abs(t) <= 0.5).astype(float)
        return {"d1": 0.6 * np.cos(5 * pi * t) + 1.5 * np.cos(6 * pi * t),
                "d2": 1.3 * np.cos(28 * pi * t),
                "q1": np.sin(7 * pi * t),
                "q2": 1.2 * np.sin(22 * pi * t),
                "q3": window * 1.5 * np.sin(62 * pi * t)}
    if ex_id == 7:
        return {"trend": 6 * t, "c4": np.cos(8 * pi * t), "c20": 0.5 * np.cos(40 * pi * t)}
    if ex_id == 8:
        piece = np.where(np.abs(t) <= 0.5, np.cos(60 * pi * t), np.cos(80 * pi * t - 10 * pi))
        return {"trend": 6 * t**2,
                "chirp": np.cos(10 * pi * np.abs(t) + 10 * pi * t**2),
                "piecewise": piece}
    if ex_id == 9:
        return {"trend": 1.0 / (1.2 + np.cos(2 * pi * t)),
                "fm": np.cos(32 * pi * t + 0.2 * np.cos(64 * pi * t))
                / (1.5 + np.sin(2 * pi * np.abs(t)))}
    if ex_id == 10:
        return {"saw": sawtooth(t), "tone": 0.3 * np.sin(72 * pi * t)}
    raise ValueError(f"example id must be in 0..10, got {ex_id}")


def example_signal(ex_id: int) -> DiscreteSignal:
    """Sampled example signal."""
    comps = example_components(ex_id)
    total = sum(comps.values())
    return DiscreteSignal(total, 1.0 / example_rate(ex_id))
