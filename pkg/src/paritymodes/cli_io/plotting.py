"""Self-contained SVG line charts."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["emit_plot"]


def emit_plot(series, out, *, xlabel: str = "t (s)", ylabel: str = "value",
              title: str | None = None) -> Path:
    """Write ``series`` as overlaid polylines to an SVG file.

    Parameters
    ----------
    series : sequence of (label, t, values)
        Tracks drawn in order; the legend follows the same order.
    out : path

    Raises
    ------
    ValueError
        If ``series`` is empty or a track is empty.
    """
    series = list(series)
    if not series:
        raise ValueError("nothing to plot: empty series")
    out = Path(out)
    with plt.rc_context({"svg.fonttype": "none", "svg.hashsalt": "paritymodes"}):
        fig, ax = plt.subplots(figsize=(8, 4))
        try:
            for label, t, y in series:
                if len(t) == 0:
                    raise ValueError(f"track {label!r} is empty")
                ax.plot(t, y, label=label, linewidth=1.0)
            ax.set_xlabel(xlabel)
            ax.set_ylabel(ylabel)
            if title:
                ax.set_title(title)
            ax.legend(loc="best")
            ax.grid(True, alpha=0.3)
            fig.tight_layout()
            fig.savefig(out, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return out
