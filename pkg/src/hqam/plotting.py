"""
Figure rendering for the CLI report path.

Figures are written next to the CSV they visualise; the CSV stays the
interchange format and the PNG is a convenience view of it.
"""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable, Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

GOLDEN = (math.sqrt(5) - 1.0) / 2.0

_STYLE = {
    "font.size": 10,
    "axes.labelsize": 11,
    "axes.titlesize": 11,
    "legend.fontsize": 8,
    "lines.linewidth": 1.2,
    "lines.markersize": 4,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def new_figure(width: float = 6.0, height: float | None = None):
    height = height or width * GOLDEN
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(width, height))
    return fig, ax


def _save(fig, path) -> None:
    with plt.rc_context(_STYLE):
        fig.savefig(path)
    plt.close(fig)


def plot_constellation(points: Iterable, path, title: str = "") -> None:
    """Scatter plot of constellation points, labelled by codeword when small."""
    points = list(points)
    fig, ax = new_figure(5.0, 5.0)
    ax.scatter([p.i for p in points], [p.q for p in points], s=14, color="k")
    if len(points) <= 64:
        for p in points:
            ax.annotate(p.codeword, (p.i, p.q), textcoords="offset points", xytext=(0, 4),
                        ha="center", fontsize=6)
    ax.axhline(0, color="0.6", lw=0.6)
    ax.axvline(0, color="0.6", lw=0.6)
    ax.set_xlabel("I")
    ax.set_ylabel("Q")
    ax.set_aspect("equal", adjustable="datalim")
    if title:
        ax.set_title(title)
    _save(fig, path)


def plot_ber(rows: Iterable[Mapping], path, xlabel: str = "SNR (dB)", title: str = "") -> None:
    """
    BER versus SNR from CSV-style rows.

    Simulated curves are drawn as markers, analytic values as lines; one
    colour per bit index.
    """
    sim = defaultdict(list)
    theory = defaultdict(dict)
    for r in rows:
        bit = int(r["bit_index"])
        snr = float(r["snr_db"])
        if r.get("errors") in (None, ""):
            theory[(r["detector"], bit)][snr] = float(r["ber"])
        else:
            sim[(r["detector"], bit)].append((snr, float(r["ber"])))
            theory[("analytic", bit)][snr] = float(r["analytic_ber"])

    fig, ax = new_figure()
    cmap = plt.get_cmap("tab10")
    markers = {"sic": "o", "ml": "x"}
    for (label, bit), curve in sorted(theory.items()):
        xs = sorted(x for x in curve if curve[x] > 0)
        style = ":" if label.endswith("reference") else "-"
        ax.semilogy(xs, [curve[x] for x in xs], style, color=cmap((bit - 1) % 10), label=f"bit {bit} {label}")
    for (det, bit), pts in sorted(sim.items()):
        pts = [(x, y) for x, y in sorted(pts) if y > 0]
        if not pts:
            continue
        xs, ys = zip(*pts)
        ax.semilogy(xs, ys, markers.get(det, "s"), linestyle="none", mfc="none",
                    color=cmap((bit - 1) % 10), label=f"bit {bit} {det}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("BER")
    if title:
        ax.set_title(title)
    ax.legend(ncol=2)
    _save(fig, path)
