"""Figures for the CLI: a distance heatmap and a per-criterion summary bar chart."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_COLOURS = {"PASS": "#3b8f4f", "FAIL": "#c0392b", "UNKNOWN": "#d4a017"}


def distance_heatmap(table, labels, path, title="distances"):
    """Heatmap of a distance table; infinite entries are left blank and marked."""
    n = len(table)
    finite = [v for row in table for v in row if not math.isinf(v)]
    top = max(finite) if finite else 1
    grid = [[float("nan") if math.isinf(v) else v for v in row] for row in table]
    fig, ax = plt.subplots(figsize=(1.2 + 0.6 * n, 1 + 0.6 * n))
    im = ax.imshow(grid, cmap="viridis", vmin=0, vmax=top)
    for i in range(n):
        for j in range(n):
            v = table[i][j]
            ax.text(j, i, "inf" if math.isinf(v) else f"{v:g}", ha="center", va="center", fontsize=8, color="white" if not math.isinf(v) and v < top / 2 else "black")
    ax.set_xticks(range(n), labels, rotation=90, fontsize=7)
    ax.set_yticks(range(n), labels, fontsize=7)
    ax.set_title(title)
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def summary_bars(rows, path, title="suite"):
    """One bar per suite row: items checked, split into passed and not passed."""
    ids = [r["id"] for r in rows]
    passed = [r["passed"] for r in rows]
    rest = [r["checked"] - r["passed"] for r in rows]
    fig, ax = plt.subplots(figsize=(max(6, 0.6 * len(rows)), 3.5))
    ax.bar(ids, passed, color=[_COLOURS.get(r["status"], "grey") for r in rows], label="passed")
    ax.bar(ids, rest, bottom=passed, color="#999999", label="failed or unknown")
    ax.set_ylabel("items checked")
    ax.set_title(title)
    ax.tick_params(axis="x", rotation=60, labelsize=7)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
