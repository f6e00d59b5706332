"""Figure rendering for analysis reports.

Each channel gets three PNGs next to the delimited output: the Legendre
spectrum, the scaling function with its goodness of fit, and the log-log
regression behind the uniform-regularity estimate.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import ChannelReport, _safe_name
from .spectrum import LegendreSpectrum

__all__ = [
    "render_spectrum",
    "render_scaling",
    "render_hmin",
    "render_channel_figures",
]


def render_spectrum(spectrum: LegendreSpectrum, path, title: str = "") -> None:
    finite = np.isfinite(spectrum.d_values)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(spectrum.h_values[finite], spectrum.d_values[finite], "-", lw=1.5)
    ax.axvline(spectrum.mode_h, color="gray", lw=0.8, ls=":")
    ax.set_xlabel("H")
    ax.set_ylabel("D(H)")
    ax.set_ylim(max(spectrum.floor, -0.1), 1.1)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def render_scaling(zeta, path, title: str = "") -> None:
    ok = zeta.defined
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(zeta.q_values[ok], zeta.zeta[ok], "o-", ms=3, lw=1.0)
    ax.axhline(0.0, color="gray", lw=0.8, ls=":")
    ax.set_xlabel("q")
    ax.set_ylabel("scaling exponent")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def render_hmin(fit, path, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(fit.j_values, fit.log2_sup, "o", ms=4)
    xs = np.array([fit.j_values.min(), fit.j_values.max()], dtype=float)
    ax.plot(xs, fit.intercept - fit.value * xs, "-", lw=1.0,
            label=f"slope -> hmin = {fit.value:.3f}")
    ax.set_xlabel("scale j")
    ax.set_ylabel("log2 sup |c(j, k)|")
    ax.legend(loc="best", fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def render_channel_figures(channel: ChannelReport, outdir, index: int = 0) -> list[Path]:
    """Render the three per-channel figures; returns the written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = _safe_name(channel.label, index)
    paths = [
        outdir / f"{stem}_spectrum.png",
        outdir / f"{stem}_scaling.png",
        outdir / f"{stem}_hmin.png",
    ]
    render_spectrum(channel.spectrum, paths[0], title=channel.label)
    render_scaling(channel.zeta, paths[1], title=channel.label)
    render_hmin(channel.hmin, paths[2], title=channel.label)
    return paths
