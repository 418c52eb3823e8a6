"""Figures for experiment outputs.

matplotlib is imported lazily so the numerical core never depends on it.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

_STYLES = {
    "B1_bbr": dict(color="tab:red", ls="--"),
    "B2_integral": dict(color="tab:blue", ls="-."),
    "B3_tau": dict(color="tab:green", ls="--"),
    "B_quadrature": dict(color="tab:purple", ls=":"),
    "B_SL": dict(color="tab:orange", ls="--"),
    "rate_hasson": dict(color="tab:blue", ls="-."),
    "rate_fuchs": dict(color="tab:red", ls="--"),
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_decay_figure(
    decay,
    curves: Mapping[str, object],
    path: str | Path,
    *,
    title: str = "",
    extra: Mapping[str, Sequence[float]] | None = None,
) -> Path:
    """Semilog plot of the measured decay against each bound curve.

    Zero entries are clipped out of the log axis.  Fixed-``ell`` curves in
    ``extra`` are drawn thin and grey.
    """
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4.5))
    d = np.asarray(decay.curve, dtype=float)
    k = np.arange(d.size)
    pos = d > 0
    ax.semilogy(k[pos], d[pos], color="black", lw=1.2, label=f"measured ({decay.source})")
    for name, values in (extra or {}).items():
        v = np.asarray(values, dtype=float)
        ok = np.isfinite(v) & (v > 0)
        ax.semilogy(np.arange(v.size)[ok], v[ok], color="0.7", lw=0.6)
    for name, c in curves.items():
        ok = np.isfinite(c.capped) & (c.capped > 0)
        ax.semilogy(c.ks[ok], c.capped[ok], lw=1.4, label=name, **_STYLES.get(name, {}))
    floor = d[pos].min() if pos.any() else 1e-16
    ax.set_ylim(max(floor / 10, 1e-300), 2.0)
    ax.set_xlabel("k = |i - j|")
    ax.set_ylabel("max entry on k-th diagonal")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
