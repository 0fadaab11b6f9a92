"""Figure renderers.

Both renderers are pure functions of their input files: the matplotlib
style is pinned, SVG output carries no timestamp or random hash salt, and
files are written atomically, so re-running on identical inputs yields
byte-identical output.
"""

from __future__ import annotations

import itertools
import os
import tempfile

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .io import read_biasmap_json, read_fit_json, read_scan_csv

_STYLE = {
    "figure.figsize": (6.4, 4.4),
    "figure.dpi": 120,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "plotkit",
    "svg.fonttype": "none",
}

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_PAULIS = ("I", "X", "Y", "Z")


def _save_atomic(fig, out_path: str) -> None:
    ext = os.path.splitext(out_path)[1].lstrip(".").lower() or "svg"
    metadata = {"Date": None} if ext == "svg" else None
    fd, tmp = tempfile.mkstemp(suffix=f".{ext}",
                               dir=os.path.dirname(out_path) or ".")
    os.close(fd)
    try:
        fig.savefig(tmp, format=ext, metadata=metadata)
        os.replace(tmp, out_path)
    finally:
        plt.close(fig)
        if os.path.exists(tmp):
            os.unlink(tmp)


def plot_thresholds(csv_path: str, fit_path: str | None, out_path: str) -> None:
    """Failure rate vs physical error rate per distance, with the fitted
    threshold marked as a vertical line and a +/- sigma band."""
    rows = read_scan_csv(csv_path)
    fit = read_fit_json(fit_path) if fit_path else None
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for color, d in zip(itertools.cycle(_COLORS),
                            sorted({r.d for r in rows})):
            series = sorted((r for r in rows if r.d == d), key=lambda r: r.p)
            ps = [r.p for r in series]
            pf = [r.p_f for r in series]
            lo = [r.p_f - r.ci_low for r in series]
            hi = [r.ci_high - r.p_f for r in series]
            ax.errorbar(ps, pf, yerr=[lo, hi], color=color, marker="o",
                        markersize=3.5, capsize=2, linewidth=1,
                        label=f"d = {d}")
        if fit is not None:
            p_th, sigma = fit["p_th"], fit["sigma"]
            ax.axvspan(p_th - sigma, p_th + sigma, color="0.75", alpha=0.5,
                       linewidth=0)
            ax.axvline(p_th, color="0.3", linestyle="--", linewidth=1,
                       label=f"$p_{{th}} = {100 * p_th:.2f}\\%$")
        ax.set_xlabel("physical error rate $p$")
        ax.set_ylabel("logical failure rate $P_f$")
        ax.legend()
        fig.tight_layout()
        _save_atomic(fig, out_path)


def plot_bias_mapping(grid_path: str, out_path: str) -> None:
    """The eight conditional-prior curves vs bias on a log x-axis:
    quiet links (s = 0) solid, triggered links (s = 1) dashed."""
    doc = read_biasmap_json(grid_path)
    eta = doc["eta"]
    single = len(eta) == 1
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for key, style in (("s0", "-"), ("s1", "--")):
            for col, (pauli, color) in enumerate(zip(_PAULIS, _COLORS)):
                vals = [row[col] for row in doc[key]]
                ax.plot(eta, vals, style, color=color, linewidth=1.2,
                        marker="o" if single else None,
                        label=f"$P_{{{pauli},{key[1]}}}$")
        ax.set_xscale("log")
        ax.set_xlabel(r"bias $\eta$")
        ax.set_ylabel("conditional probability")
        ax.set_title(f"$p = {doc['p']:g}$" if "p" in doc else "")
        ax.legend(ncols=2, fontsize=8)
        fig.tight_layout()
        _save_atomic(fig, out_path)
