"""Confusion matrix, precision/recall/F1 reports and ROC curves for 0/1 labels.

Class 1 (flood) is the positive class throughout.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from typing import TextIO

import numpy as np


class MetricError(ValueError):
    pass


def _check_binary(y_true, y_pred):
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise MetricError(f"length mismatch: {y_true.shape} vs {y_pred.shape}")
    for name, arr in (("y_true", y_true), ("y_pred", y_pred)):
        if not np.all(np.isin(arr, (0, 1))):
            raise MetricError(f"{name} contains values other than 0 and 1")
    return y_true.astype(int), y_pred.astype(int)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn

    @property
    def accuracy(self):
        return (self.tp + self.tn) / self.total if self.total else 0.0

    def flipped(self):
        """The same counts with class 0 treated as positive."""
        return ConfusionMatrix(tp=self.tn, fp=self.fn, tn=self.tp, fn=self.fp)

    def as_array(self):
        """``[[tn, fp], [fn, tp]]``: rows are true class, columns predicted class."""
        return np.array([[self.tn, self.fp], [self.fn, self.tp]])


def confusion(y_true, y_pred) -> ConfusionMatrix:
    t, p = _check_binary(y_true, y_pred)
    return ConfusionMatrix(
        tp=int(np.sum((t == 1) & (p == 1))),
        fp=int(np.sum((t == 0) & (p == 1))),
        tn=int(np.sum((t == 0) & (p == 0))),
        fn=int(np.sum((t == 1) & (p == 0))),
    )


def _ratio(a, b):
    return a / b if b else 0.0


def prf(cm: ConfusionMatrix):
    """Precision, recall and F1 of the positive class; 0 wherever a denominator is 0."""
    precision = _ratio(cm.tp, cm.tp + cm.fp)
    recall = _ratio(cm.tp, cm.tp + cm.fn)
    f1 = _ratio(2 * precision * recall, precision + recall)
    return precision, recall, f1


@dataclass(frozen=True)
class ClassRow:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class ClassReport:
    rows: tuple  # (class 0, class 1)
    accuracy: float
    macro: ClassRow
    weighted: ClassRow
    confusion: ConfusionMatrix

    @property
    def total(self):
        return self.confusion.total

    def format(self, digits=2):
        return format_report(self, digits)


def report_from_confusion(cm: ConfusionMatrix) -> ClassReport:
    per_class = []
    for c, m in ((0, cm.flipped()), (1, cm)):
        p, r, f = prf(m)
        per_class.append(ClassRow(p, r, f, m.tp + m.fn))
    total = cm.total
    macro = ClassRow(*(sum(getattr(row, k) for row in per_class) / 2
                       for k in ("precision", "recall", "f1")), total)
    weighted = ClassRow(*(_ratio(sum(getattr(row, k) * row.support for row in per_class), total)
                          for k in ("precision", "recall", "f1")), total)
    return ClassReport(tuple(per_class), cm.accuracy, macro, weighted, cm)


def classification_report(y_true, y_pred) -> ClassReport:
    return report_from_confusion(confusion(y_true, y_pred))


_HEADERS = ("precision", "recall", "f1-score", "support")


def format_report(report: ClassReport, digits=2):
    """Fixed-width text in the usual layout: class rows, accuracy, macro avg, weighted avg."""
    width = len("weighted avg")
    head = f"{'':>{width}s} " + " ".join(f"{h:>9s}" for h in _HEADERS)
    lines = [head, ""]

    def row(label, r):
        vals = " ".join(f"{v:>9.{digits}f}" for v in (r.precision, r.recall, r.f1))
        return f"{label:>{width}s} {vals} {r.support:>9d}"

    for c, r in enumerate(report.rows):
        lines.append(row(str(c), r))
    lines.append("")
    blank = " " * 9
    lines.append(f"{'accuracy':>{width}s} {blank} {blank} {report.accuracy:>9.{digits}f} "
                 f"{report.total:>9d}")
    lines.append(row("macro avg", report.macro))
    lines.append(row("weighted avg", report.weighted))
    return "\n".join(lines) + "\n"


def parse_report(text):
    """Read back a formatted report as ``{row_label: tuple_of_numbers}``."""
    out = {}
    for line in text.splitlines():
        m = re.match(r"^\s*(0|1|accuracy|macro avg|weighted avg)\s+(.*)$", line)
        if not m:
            continue
        nums = [float(v) for v in m.group(2).split()]
        nums[-1] = int(nums[-1])
        out[m.group(1)] = tuple(nums)
    return out


@dataclass(frozen=True)
class RocCurve:
    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray  # +inf for the leading (0, 0) point
    auc: float


def roc_curve(y_true, scores) -> RocCurve:
    """Sweep thresholds over distinct scores, highest first.

    Tied scores enter the curve together, which makes the trapezoidal area
    equal to P(score+ > score-) + 1/2 P(score+ == score-).
    """
    y = np.asarray(y_true)
    s = np.asarray(scores, dtype=float)
    if y.shape != s.shape or y.ndim != 1:
        raise MetricError(f"length mismatch: {y.shape} vs {s.shape}")
    if not np.all(np.isin(y, (0, 1))):
        raise MetricError("labels must be 0 or 1")
    if not np.all(np.isfinite(s)):
        raise MetricError("scores must be finite")
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise MetricError("ROC is undefined when only one class is present")

    order = np.argsort(-s, kind="stable")
    s_sorted, y_sorted = s[order], y[order]
    last_of_group = np.r_[np.flatnonzero(np.diff(s_sorted) != 0), len(s) - 1]
    tp = np.cumsum(y_sorted)[last_of_group]
    fp = (last_of_group + 1) - tp
    tpr = np.r_[0.0, tp / n_pos]
    fpr = np.r_[0.0, fp / n_neg]
    # the lowest threshold admits every row, so the curve already ends at (1, 1)
    thresholds = np.r_[np.inf, s_sorted[last_of_group]]
    auc = float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))
    return RocCurve(fpr, tpr, thresholds, auc)


def write_roc_csv(curve: RocCurve, stream: TextIO):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["threshold", "fpr", "tpr"])
    for t, f, p in zip(curve.thresholds, curve.fpr, curve.tpr):
        w.writerow([repr(float(t)), repr(float(f)), repr(float(p))])


def write_confusion_csv(cm: ConfusionMatrix, stream: TextIO):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["", "pred_0", "pred_1"])
    w.writerow(["true_0", cm.tn, cm.fp])
    w.writerow(["true_1", cm.fn, cm.tp])


_SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


def roc_svg(curves, size=400, margin=50):
    """Minimal SVG: one polyline per named curve and a legend carrying each AUC.

    ``curves`` is a sequence of ``(label, RocCurve)`` pairs.
    """
    plot = size - 2 * margin
    total = size + 40 + 18 * len(curves)

    def xy(f, t):
        return f"{margin + f * plot:.2f},{margin + (1 - t) * plot:.2f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{total}" '
        f'viewBox="0 0 {size} {total}">',
        f'<rect x="{margin}" y="{margin}" width="{plot}" height="{plot}" '
        'fill="none" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin + plot}" x2="{margin + plot}" y2="{margin}" '
        'stroke="grey" stroke-dasharray="4 4"/>',
        f'<text x="{size / 2}" y="{size - 15}" text-anchor="middle" font-size="12">'
        'False positive rate</text>',
        f'<text x="15" y="{size / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 15 {size / 2})">True positive rate</text>',
    ]
    for k, (label, curve) in enumerate(curves):
        color = _SVG_COLORS[k % len(_SVG_COLORS)]
        pts = " ".join(xy(f, t) for f, t in zip(curve.fpr, curve.tpr))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        y = size + 10 + 18 * k
        parts.append(f'<line x1="{margin}" y1="{y}" x2="{margin + 20}" y2="{y}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{margin + 28}" y="{y + 4}" font-size="12">'
                     f'{_escape(label)} (AUC = {curve.auc:.3f})</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text):
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
