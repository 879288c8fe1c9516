"""Matplotlib figure output rendered alongside the delimited reports."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .clustering import Dendrogram
from .metrics import MetricReport

_HASH_SALT = "sarfkit"


def _save(fig, path: Path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".svg":
        metadata = {"Date": None}
    else:
        metadata = {"Software": "sarfkit"}
    with matplotlib.rc_context({"svg.hashsalt": _HASH_SALT}):
        fig.savefig(path, dpi=100, metadata=metadata)
    plt.close(fig)


def _leaf_order(dendrogram: Dendrogram) -> list[str]:
    if not dendrogram.merges:
        return list(dendrogram.leaves)
    order: list[str] = []
    # ids refer to the most recent cluster carrying them, so replay the merge
    # list to rebuild the tree, then walk it left child first
    nodes: dict[str, object] = {leaf: leaf for leaf in dendrogram.leaves}
    for record in dendrogram.merges:
        nodes[record.into] = (nodes[record.left], nodes[record.right])
    stack = [nodes[dendrogram.merges[-1].into]]
    while stack:
        node = stack.pop()
        if isinstance(node, tuple):
            stack.append(node[1])
            stack.append(node[0])
        else:
            order.append(node)
    return order


def save_dendrogram_figure(dendrogram: Dendrogram, path: Path) -> None:
    """Draw the merge tree: leaves along the x axis, merge steps upward."""
    order = _leaf_order(dendrogram)
    x = {leaf: float(i) for i, leaf in enumerate(order)}
    y = {leaf: 0.0 for leaf in order}
    fig, ax = plt.subplots(figsize=(max(4.0, 0.3 * len(order)), 4.0))
    for step, record in enumerate(dendrogram.merges, start=1):
        xl, yl = x[record.left], y[record.left]
        xr, yr = x[record.right], y[record.right]
        ax.plot([xl, xl], [yl, step], color="#1f77b4", linewidth=1.0)
        ax.plot([xr, xr], [yr, step], color="#1f77b4", linewidth=1.0)
        ax.plot([xl, xr], [step, step], color="#1f77b4", linewidth=1.0)
        x[record.into] = (xl + xr) / 2.0
        y[record.into] = float(step)
    ax.set_ylabel("merge step")
    if len(order) <= 40:
        ax.set_xticks(range(len(order)))
        ax.set_xticklabels(order, rotation=90, fontsize=7)
    else:
        ax.set_xticks([])
    ax.set_xlim(-1, len(order))
    fig.tight_layout()
    _save(fig, path)


def save_stability_figure(
    labels: Sequence[str], values: Sequence[float], mean_value: float, path: Path
) -> None:
    """Per-transition similarity as a line, with the average drawn across."""
    fig, ax = plt.subplots(figsize=(max(4.0, 0.8 * len(values)), 3.5))
    ax.plot(range(len(values)), values, marker="o", color="#1f77b4")
    ax.axhline(mean_value, color="#d62728", linewidth=1.0, linestyle="--")
    ax.set_xticks(range(len(values)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("MoJoSim")
    ax.set_ylim(0, 105)
    fig.tight_layout()
    _save(fig, path)


def save_measures_figure(report: MetricReport, path: Path) -> None:
    """Bar chart of the report's numeric measure values."""
    names = list(report.values)
    heights = [float(report.values[name]) for name in names]
    fig, ax = plt.subplots(figsize=(max(3.0, 1.2 * len(names)), 3.5))
    ax.bar(range(len(names)), heights, color="#1f77b4")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, fontsize=9)
    for i, value in enumerate(heights):
        ax.text(i, value, f"{value:.1f}", ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    _save(fig, path)
