"""Pixel-level segmentation metrics: accuracy and per-class P/R/F1.

Background counts toward accuracy only. Macro precision/recall/F1 are the
unweighted mean over text, figure and table; a class with no support in
either mask scores 0 and is listed in ``Metrics.zero_support``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EvaluationError, ShapeMismatchError
from .labels import FOREGROUND, NUM_CLASSES


def confusion(pred: np.ndarray, truth: np.ndarray) -> np.ndarray:
    """4x4 counts; ``cm[t, p]`` = pixels of true class t predicted as p."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise ShapeMismatchError(f"prediction shape {pred.shape} != truth shape {truth.shape}")
    for name, m in (("prediction", pred), ("truth", truth)):
        if m.size and (m.min() < 0 or m.max() >= NUM_CLASSES):
            raise EvaluationError(f"{name} mask holds values outside 0..{NUM_CLASSES - 1}")
    idx = truth.astype(np.int64).ravel() * NUM_CLASSES + pred.astype(np.int64).ravel()
    return np.bincount(idx, minlength=NUM_CLASSES**2).reshape(NUM_CLASSES, NUM_CLASSES)


@dataclass
class ClassScores:
    precision: float
    recall: float
    f1: float


@dataclass
class Metrics:
    accuracy: float
    per_class: dict[str, ClassScores]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    total: int
    zero_support: list[str] = field(default_factory=list)


def _ratio(num, den) -> float:
    return float(num) / float(den) if den else 0.0


def f1_score(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def metrics(cm: np.ndarray) -> Metrics:
    cm = np.asarray(cm, dtype=np.int64)
    total = int(cm.sum())
    if total <= 0:
        raise EvaluationError("cannot compute metrics over zero pixels")
    per_class = {}
    zero = []
    for c in FOREGROUND:
        tp = cm[c, c]
        p = _ratio(tp, cm[:, c].sum())
        r = _ratio(tp, cm[c, :].sum())
        per_class[c.label_name] = ClassScores(p, r, f1_score(p, r))
        if cm[c, :].sum() == 0 and cm[:, c].sum() == 0:
            zero.append(c.label_name)
    n = len(FOREGROUND)
    return Metrics(
        accuracy=float(np.trace(cm)) / total,
        per_class=per_class,
        macro_precision=sum(s.precision for s in per_class.values()) / n,
        macro_recall=sum(s.recall for s in per_class.values()) / n,
        macro_f1=sum(s.f1 for s in per_class.values()) / n,
        total=total,
        zero_support=zero,
    )


def evaluate_masks(pred: np.ndarray, truth: np.ndarray) -> Metrics:
    return metrics(confusion(pred, truth))


REPORT_COLUMNS = (
    ["page", "status", "pixels", "accuracy"]
    + [f"{c.label_name}_{m}" for c in FOREGROUND for m in ("p", "r", "f1")]
    + ["macro_p", "macro_r", "macro_f1", "note"]
)


def report_row(page: str, m: Metrics | None, status: str = "ok", note: str = "") -> dict[str, str]:
    row = dict.fromkeys(REPORT_COLUMNS, "")
    row.update(page=page, status=status, note=note)
    if m is None:
        return row
    row["pixels"] = str(m.total)
    row["accuracy"] = f"{m.accuracy:.6f}"
    for name, s in m.per_class.items():
        row[f"{name}_p"] = f"{s.precision:.6f}"
        row[f"{name}_r"] = f"{s.recall:.6f}"
        row[f"{name}_f1"] = f"{s.f1:.6f}"
    row["macro_p"] = f"{m.macro_precision:.6f}"
    row["macro_r"] = f"{m.macro_recall:.6f}"
    row["macro_f1"] = f"{m.macro_f1:.6f}"
    if m.zero_support and not note:
        row["note"] = "zero support: " + ",".join(m.zero_support)
    return row
