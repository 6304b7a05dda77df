"""Confusion-matrix evaluation of predicted masks against ground truth.

Headline metrics are precision = TP / (TP + FP) and accuracy =
(TP + TN) / (TP + TN + FP + FN), both reported as percentages. Values are
carried at full precision and only rounded to one decimal place when a
table is printed. Pooling across images is micro-averaged (summed counts);
macro averages are emitted alongside in reports since either convention is
defensible for a dataset summary.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from .classifier import ClassificationStats
from .image_io import DimensionMismatchError, Mask


class UndefinedPrecisionError(ZeroDivisionError):
    """Precision is undefined when no pixel was predicted skin (TP + FP = 0)."""


class EmptyComparisonError(ZeroDivisionError):
    """Accuracy is undefined over zero pixels."""


@dataclasses.dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(
            self.tp + other.tp, self.fp + other.fp, self.tn + other.tn, self.fn + other.fn
        )


def confusion(pred: Mask, gt: Mask) -> ConfusionMatrix:
    """Count TP/FP/TN/FN between a predicted mask and ground truth."""
    if (pred.height, pred.width) != (gt.height, gt.width):
        raise DimensionMismatchError(
            f"prediction is {pred.width}x{pred.height} but ground truth is {gt.width}x{gt.height}"
        )
    p = pred.bits
    g = gt.bits
    tp = int(np.count_nonzero(p & g))
    fp = int(np.count_nonzero(p & ~g))
    tn = int(np.count_nonzero(~p & ~g))
    fn = int(np.count_nonzero(~p & g))
    return ConfusionMatrix(tp, fp, tn, fn)


def precision(cm: ConfusionMatrix) -> float:
    """Percentage of predicted-skin pixels that are truly skin."""
    denom = cm.tp + cm.fp
    if denom == 0:
        raise UndefinedPrecisionError("precision undefined: no pixels predicted skin")
    return 100.0 * cm.tp / denom


def accuracy(cm: ConfusionMatrix) -> float:
    """Percentage of all pixels classified correctly."""
    if cm.total == 0:
        raise EmptyComparisonError("accuracy undefined: no pixels compared")
    return 100.0 * (cm.tp + cm.tn) / cm.total


def _precision_or_none(cm: ConfusionMatrix) -> Optional[float]:
    try:
        return precision(cm)
    except UndefinedPrecisionError:
        return None


@dataclasses.dataclass(frozen=True)
class MetricsRow:
    """One evaluated image, shaped like a row of the results table."""

    image_id: str
    total: int
    detected_skin: int
    gt_skin: int
    detected_nonskin: int
    gt_nonskin: int
    cm: ConfusionMatrix
    precision_pct: Optional[float]  # None when no pixel was predicted skin
    accuracy_pct: float


def metrics_row(image_id: str, cm: ConfusionMatrix) -> MetricsRow:
    return MetricsRow(
        image_id=image_id,
        total=cm.total,
        detected_skin=cm.tp + cm.fp,
        gt_skin=cm.tp + cm.fn,
        detected_nonskin=cm.tn + cm.fn,
        gt_nonskin=cm.tn + cm.fp,
        cm=cm,
        precision_pct=_precision_or_none(cm),
        accuracy_pct=accuracy(cm),
    )


@dataclasses.dataclass(frozen=True)
class EvaluationSummary:
    rows: tuple[MetricsRow, ...]
    pooled: ConfusionMatrix
    micro_precision_pct: Optional[float]
    micro_accuracy_pct: float
    macro_precision_pct: Optional[float]
    macro_accuracy_pct: float


def aggregate(rows: Sequence[MetricsRow]) -> EvaluationSummary:
    """Pool rows into dataset-level metrics (micro plus macro averages)."""
    if not rows:
        raise ValueError("cannot aggregate zero evaluation rows")
    pooled = ConfusionMatrix(0, 0, 0, 0)
    for row in rows:
        pooled = pooled + row.cm
    defined_precisions = [r.precision_pct for r in rows if r.precision_pct is not None]
    macro_precision = sum(defined_precisions) / len(defined_precisions) if defined_precisions else None
    macro_accuracy = sum(r.accuracy_pct for r in rows) / len(rows)
    return EvaluationSummary(
        rows=tuple(rows),
        pooled=pooled,
        micro_precision_pct=_precision_or_none(pooled),
        micro_accuracy_pct=accuracy(pooled),
        macro_precision_pct=macro_precision,
        macro_accuracy_pct=macro_accuracy,
    )


def supplementary_metrics(cm: ConfusionMatrix) -> dict:
    """Recall / specificity / F1, offered beyond the two headline metrics."""
    recall = 100.0 * cm.tp / (cm.tp + cm.fn) if cm.tp + cm.fn else None
    specificity = 100.0 * cm.tn / (cm.tn + cm.fp) if cm.tn + cm.fp else None
    prec = _precision_or_none(cm)
    if prec is not None and recall is not None and prec + recall > 0:
        f1 = 2.0 * prec * recall / (prec + recall)
    else:
        f1 = None
    return {"recall_pct": recall, "specificity_pct": specificity, "f1_pct": f1}


# --- Report emission ---------------------------------------------------------

CSV_COLUMNS = (
    "sr_no",
    "total_pixels",
    "detected_skin",
    "gt_skin",
    "detected_nonskin",
    "gt_nonskin",
    "tp",
    "fp",
    "tn",
    "fn",
    "precision_pct",
    "accuracy_pct",
    "image",
)


def _fmt_pct(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.1f}"


def render_csv_report(rows: Sequence[MetricsRow]) -> str:
    """Results-table CSV; percentages rounded to one decimal place."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for i, row in enumerate(rows, start=1):
        writer.writerow(
            [
                i,
                row.total,
                row.detected_skin,
                row.gt_skin,
                row.detected_nonskin,
                row.gt_nonskin,
                row.cm.tp,
                row.cm.fp,
                row.cm.tn,
                row.cm.fn,
                _fmt_pct(row.precision_pct),
                _fmt_pct(row.accuracy_pct),
                row.image_id,
            ]
        )
    return buf.getvalue()


def write_csv_report(rows: Sequence[MetricsRow], path: str | Path) -> None:
    Path(path).write_text(render_csv_report(rows))


def row_as_dict(row: MetricsRow, stats: Optional[ClassificationStats] = None) -> dict:
    d = {
        "image": row.image_id,
        "total_pixels": row.total,
        "detected_skin": row.detected_skin,
        "gt_skin": row.gt_skin,
        "detected_nonskin": row.detected_nonskin,
        "gt_nonskin": row.gt_nonskin,
        "tp": row.cm.tp,
        "fp": row.cm.fp,
        "tn": row.cm.tn,
        "fn": row.cm.fn,
        "precision_pct": row.precision_pct,
        "accuracy_pct": row.accuracy_pct,
        "supplementary": supplementary_metrics(row.cm),
    }
    if stats is not None:
        d["colorspace_pass_counts"] = {
            "rgb": stats.rgb_pass_count,
            "hsv": stats.hsv_pass_count,
            "ycbcr": stats.ycbcr_pass_count,
        }
    return d


def render_json_report(
    rows: Sequence[MetricsRow],
    stats_by_image: Optional[Mapping[str, ClassificationStats]] = None,
) -> dict:
    """Full-precision report variant, including per-color-space pass counts."""
    stats_by_image = stats_by_image or {}
    summary = aggregate(rows)
    return {
        "rows": [row_as_dict(r, stats_by_image.get(r.image_id)) for r in rows],
        "pooled": {
            "micro": {
                "tp": summary.pooled.tp,
                "fp": summary.pooled.fp,
                "tn": summary.pooled.tn,
                "fn": summary.pooled.fn,
                "precision_pct": summary.micro_precision_pct,
                "accuracy_pct": summary.micro_accuracy_pct,
            },
            "macro": {
                "precision_pct": summary.macro_precision_pct,
                "accuracy_pct": summary.macro_accuracy_pct,
            },
        },
    }


def write_json_report(
    rows: Sequence[MetricsRow],
    path: str | Path,
    stats_by_image: Optional[Mapping[str, ClassificationStats]] = None,
) -> None:
    Path(path).write_text(json.dumps(render_json_report(rows, stats_by_image), indent=2) + "\n")
