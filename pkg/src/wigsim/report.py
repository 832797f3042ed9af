"""Render metrics CSVs to figures on disk (queue backlog, links, accuracy)."""

from __future__ import annotations

import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _by_strategy(rows):
    grouped = defaultdict(lambda: defaultdict(list))
    for r in rows:
        grouped[r.strategy][r.seed].append(r)
    for seeds in grouped.values():
        for rs in seeds.values():
            rs.sort(key=lambda r: r.slot)
    return grouped


def _seed_mean(seed_rows, attr):
    series = [np.array([getattr(r, attr) for r in rs]) for rs in seed_rows.values()]
    length = min(len(s) for s in series)
    return np.mean([s[:length] for s in series], axis=0)


def _plot(grouped, attr, ylabel, path, normalize_by_slot=False):
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for strategy in sorted(grouped):
        mean = _seed_mean(grouped[strategy], attr)
        slots = np.arange(1, len(mean) + 1)
        if normalize_by_slot:
            mean = mean / slots
        line, = ax.plot(slots, mean, label=strategy, linewidth=1.6)
        for rs in grouped[strategy].values():
            series = np.array([getattr(r, attr) for r in rs])
            if normalize_by_slot:
                series = series / np.arange(1, len(series) + 1)
            ax.plot(np.arange(1, len(series) + 1), series, alpha=0.18,
                    linewidth=0.7, color=line.get_color())
    ax.set_xlabel("slot")
    ax.set_ylabel(ylabel)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_report(rows, out_dir, stem="metrics"):
    """Write the standard three figures; returns the created paths."""
    os.makedirs(out_dir, exist_ok=True)
    grouped = _by_strategy(rows)
    paths = [
        _plot(grouped, "mean_queue", "average backlog / slot index",
              os.path.join(out_dir, f"{stem}_queue_stability.png"),
              normalize_by_slot=True),
        _plot(grouped, "cum_links", "cumulative activated links",
              os.path.join(out_dir, f"{stem}_cum_links.png")),
        _plot(grouped, "test_acc", "test accuracy",
              os.path.join(out_dir, f"{stem}_test_acc.png")),
    ]
    return paths
