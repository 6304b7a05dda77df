"""Figure rendering for reports: written to files, never shown."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .classifier import ClassificationStats
from .evaluation import MetricsRow

SPACES = ("rgb", "hsv", "ycbcr")


def save_colorspace_counts_figure(stats_by_image: Mapping[str, ClassificationStats],
                                  path: str | Path) -> Path:
    """Bar chart of pixels passing each color-space sub-rule, per image."""
    path = Path(path)
    labels = list(stats_by_image)
    x = np.arange(len(labels))
    width = 0.22
    fig, ax = plt.subplots(figsize=(max(6.0, 1.6 * len(labels)), 4.0))
    for i, space in enumerate(SPACES):
        counts = [getattr(stats_by_image[k], f"{space}_pass_count") for k in labels]
        ax.bar(x + (i - 1) * width, counts, width, label=space.upper())
    ax.bar(x + 2 * width, [stats_by_image[k].skin_pixels for k in labels],
           width, label="combined", color="0.35")
    ax.set_xticks(x + width / 2)
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_ylabel("pixels passing")
    ax.set_title("Skin pixels per color space")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_metrics_figure(rows: Sequence[MetricsRow], path: str | Path) -> Path:
    """Precision/accuracy bars per evaluated image."""
    path = Path(path)
    labels = [r.image_id for r in rows]
    x = np.arange(len(labels))
    width = 0.35
    fig, ax = plt.subplots(figsize=(max(6.0, 1.4 * len(labels)), 4.0))
    prec = [r.precision_pct if r.precision_pct is not None else 0.0 for r in rows]
    acc = [r.accuracy_pct for r in rows]
    ax.bar(x - width / 2, prec, width, label="precision")
    ax.bar(x + width / 2, acc, width, label="accuracy")
    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_ylim(0, 105)
    ax.set_ylabel("percent")
    ax.set_title("Per-image precision and accuracy")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
