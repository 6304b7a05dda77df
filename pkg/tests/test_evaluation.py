import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from skinmask.evaluation import (
    ConfusionMatrix,
    EmptyComparisonError,
    UndefinedPrecisionError,
    accuracy,
    aggregate,
    confusion,
    metrics_row,
    precision,
    render_csv_report,
    render_json_report,
    supplementary_metrics,
)
from skinmask.classifier import ClassificationStats
from skinmask.image_io import DimensionMismatchError, Mask

from printed_table import TABLE1, matches_printed

counts = st.integers(min_value=0, max_value=10**6)


def mask_of(bits):
    return Mask(np.asarray(bits, dtype=bool).reshape(1, -1))


# --- confusion counting ---


def test_confusion_four_pixel_enumeration():
    cm = confusion(mask_of([1, 0, 1, 0]), mask_of([1, 1, 0, 0]))
    assert cm == ConfusionMatrix(tp=1, fp=1, tn=1, fn=1)


def test_confusion_perfect_prediction():
    rng = np.random.default_rng(2)
    bits = rng.random(500) < 0.3
    cm = confusion(mask_of(bits), mask_of(bits))
    k = int(bits.sum())
    assert cm == ConfusionMatrix(tp=k, fp=0, tn=500 - k, fn=0)


def test_confusion_published_row1_consistency():
    # detected 54885 of 55836 GT-skin pixels over 196608, no false alarms
    pred = np.zeros(196608, dtype=bool)
    gt = np.zeros(196608, dtype=bool)
    gt[:55836] = True
    pred[:54885] = True
    cm = confusion(mask_of(pred), mask_of(gt))
    assert cm == ConfusionMatrix(tp=54885, fp=0, tn=140772, fn=951)


def test_confusion_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        confusion(mask_of([1, 0]), mask_of([1, 0, 1]))


@given(st.lists(st.tuples(st.booleans(), st.booleans()), min_size=1, max_size=200))
def test_confusion_counts_partition_and_swap(pairs):
    pred = mask_of([p for p, _ in pairs])
    gt = mask_of([g for _, g in pairs])
    cm = confusion(pred, gt)
    assert cm.total == len(pairs)
    swapped = confusion(gt, pred)
    assert (swapped.tp, swapped.tn) == (cm.tp, cm.tn)
    assert (swapped.fp, swapped.fn) == (cm.fn, cm.fp)


@given(st.lists(st.tuples(st.booleans(), st.booleans()), min_size=1, max_size=200))
def test_accuracy_invariant_under_joint_complement(pairs):
    pred = np.array([p for p, _ in pairs], dtype=bool).reshape(1, -1)
    gt = np.array([g for _, g in pairs], dtype=bool).reshape(1, -1)
    a1 = accuracy(confusion(Mask(pred), Mask(gt)))
    a2 = accuracy(confusion(Mask(~pred), Mask(~gt)))
    assert a1 == pytest.approx(a2, abs=1e-12)


# --- headline metrics ---


def test_precision_published_rows():
    assert matches_printed(precision(ConfusionMatrix(23089, 6739, 146590, 0)), "77.4")
    assert matches_printed(precision(ConfusionMatrix(47359, 24878, 55763, 0)), "65.5")


def test_precision_no_false_positives():
    assert precision(ConfusionMatrix(10, 0, 5, 5)) == 100.0


def test_precision_undefined():
    with pytest.raises(UndefinedPrecisionError):
        precision(ConfusionMatrix(0, 0, 10, 5))


def test_accuracy_published_rows():
    assert matches_printed(accuracy(ConfusionMatrix(54885, 0, 140772, 951)), "99.5")
    assert matches_printed(accuracy(ConfusionMatrix(47359, 24878, 55763, 0)), "80.55")


def test_accuracy_perfect():
    assert accuracy(ConfusionMatrix(7, 0, 3, 0)) == 100.0


def test_accuracy_empty():
    with pytest.raises(EmptyComparisonError):
        accuracy(ConfusionMatrix(0, 0, 0, 0))


@given(counts, counts, counts, counts)
def test_metrics_bounded(tp, fp, tn, fn):
    cm = ConfusionMatrix(tp, fp, tn, fn)
    if tp + fp > 0:
        assert 0.0 <= precision(cm) <= 100.0
    if cm.total > 0:
        assert 0.0 <= accuracy(cm) <= 100.0


def test_every_published_row_reproduces():
    for (_total, _det, _gts, _detn, _gtn, tp, fp, tn, fn, p, a) in TABLE1:
        cm = ConfusionMatrix(tp, fp, tn, fn)
        assert matches_printed(precision(cm), p)
        assert matches_printed(accuracy(cm), a)


# --- rows and aggregation ---


def test_metrics_row_marginals():
    cm = ConfusionMatrix(tp=10, fp=4, tn=20, fn=6)
    row = metrics_row("img", cm)
    assert row.detected_skin == 14 and row.gt_skin == 16
    assert row.detected_nonskin == 26 and row.gt_nonskin == 24
    assert row.total == 40


def test_aggregate_single_row_is_identity():
    row = metrics_row("a", ConfusionMatrix(10, 5, 80, 5))
    summary = aggregate([row])
    assert summary.micro_precision_pct == row.precision_pct
    assert summary.micro_accuracy_pct == row.accuracy_pct
    assert summary.macro_precision_pct == row.precision_pct


def test_aggregate_duplicate_rows_idempotent():
    row = metrics_row("a", ConfusionMatrix(10, 5, 80, 5))
    summary = aggregate([row, row])
    assert summary.micro_precision_pct == pytest.approx(row.precision_pct)
    assert summary.micro_accuracy_pct == pytest.approx(row.accuracy_pct)


def test_aggregate_published_table_pooled():
    rows = [
        metrics_row(f"row{i}", ConfusionMatrix(tp, fp, tn, fn))
        for i, (_t, _d, _g, _dn, _gn, tp, fp, tn, fn, _p, _a) in enumerate(TABLE1, 1)
    ]
    summary = aggregate(rows)
    tp = sum(r[5] for r in TABLE1)
    fp = sum(r[6] for r in TABLE1)
    tn = sum(r[7] for r in TABLE1)
    fn = sum(r[8] for r in TABLE1)
    assert summary.pooled == ConfusionMatrix(tp, fp, tn, fn)
    assert summary.micro_precision_pct == pytest.approx(100.0 * tp / (tp + fp))
    assert summary.micro_accuracy_pct == pytest.approx(100.0 * (tp + tn) / (tp + tn + fp + fn))


def test_aggregate_empty_rejected():
    with pytest.raises(ValueError):
        aggregate([])


def test_row_with_no_predictions_has_null_precision():
    row = metrics_row("quiet", ConfusionMatrix(0, 0, 90, 10))
    assert row.precision_pct is None
    summary = aggregate([row])
    assert summary.micro_precision_pct is None and summary.macro_precision_pct is None


def test_supplementary_metrics():
    d = supplementary_metrics(ConfusionMatrix(50, 50, 80, 50))
    assert d["recall_pct"] == pytest.approx(50.0)
    assert d["specificity_pct"] == pytest.approx(80 / 130 * 100)
    assert d["f1_pct"] == pytest.approx(50.0)


# --- report emission ---


def test_csv_report_shape():
    rows = [
        metrics_row("one", ConfusionMatrix(10, 0, 85, 5)),
        metrics_row("two", ConfusionMatrix(0, 0, 99, 1)),
    ]
    text = render_csv_report(rows)
    lines = text.strip().split("\n")
    assert lines[0] == ("sr_no,total_pixels,detected_skin,gt_skin,detected_nonskin,"
                        "gt_nonskin,tp,fp,tn,fn,precision_pct,accuracy_pct,image")
    assert lines[1] == "1,100,10,15,90,85,10,0,85,5,100.0,95.0,one"
    assert lines[2] == "2,100,0,1,100,99,0,0,99,1,,99.0,two"  # undefined precision left blank


def test_csv_single_decimal_rounding():
    text = render_csv_report([metrics_row("r", ConfusionMatrix(23089, 6739, 146590, 0))])
    row = text.strip().split("\n")[1].split(",")
    assert row[10] == "77.4" and row[11] == "96.2"  # full-precision 96.18 rounds to 96.2


def test_json_report_full_precision_and_counts():
    rows = [metrics_row("img", ConfusionMatrix(23089, 6739, 146590, 0))]
    stats = {"img": ClassificationStats(176418, 29000, 29828, 25000, 27000)}
    doc = render_json_report(rows, stats)
    assert json.dumps(doc)  # serializable
    row = doc["rows"][0]
    assert row["precision_pct"] == pytest.approx(77.40713423, abs=1e-6)
    assert row["colorspace_pass_counts"] == {"rgb": 29828, "hsv": 25000, "ycbcr": 27000}
    assert set(row["supplementary"]) == {"recall_pct", "specificity_pct", "f1_pct"}
    assert doc["pooled"]["micro"]["accuracy_pct"] == pytest.approx(96.1800949, abs=1e-6)
    assert "macro" in doc["pooled"]
