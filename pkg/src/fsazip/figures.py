"""Matplotlib renderings of bench results."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from fsazip.bench import METHOD_TITLES, BenchReport  # noqa: E402

plt.rcParams.update(
    {
        "font.size": 9,
        "axes.labelsize": 9,
        "legend.fontsize": 8,
        "xtick.labelsize": 8,
        "ytick.labelsize": 8,
        "axes.spines.top": False,
        "axes.spines.right": False,
    }
)


def plot_sizes(report: BenchReport, path: str | Path) -> Path:
    """Grouped bars: mean compressed bytes per class and method."""
    path = Path(path)
    kinds = report.kinds()
    methods = report.methods()
    means = report.means()
    x = np.arange(len(kinds))
    width = 0.8 / max(len(methods), 1)
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    for i, method in enumerate(methods):
        vals = [means.get((k, method)) for k in kinds]
        heights = [np.nan if v is None else v for v in vals]
        ax.bar(x + (i - (len(methods) - 1) / 2) * width, heights, width,
               label=METHOD_TITLES.get(method, method))
    ax.set_xticks(x)
    ax.set_xticklabels(kinds)
    ax.set_ylabel("mean compressed size (bytes)")
    ax.set_yscale("log")
    ax.legend(frameon=False, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_redundancy(trend: list[dict], path: str | Path) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    ns = [t["n"] for t in trend]
    ax.plot(ns, [t["redundancy"] for t in trend], "o-")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("states n")
    ax.set_ylabel("(bits - n^2 h(p)) / n^2")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
