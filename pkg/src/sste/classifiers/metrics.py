"""Binary classification metrics with fake (1) as the positive class."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EvalResult:
    accuracy: float
    precision: float
    recall: float
    f1: float
    confusion: tuple[tuple[int, int], tuple[int, int]]
    """((tn, fp), (fn, tp))"""


def confusion_matrix(y_true, y_pred) -> np.ndarray:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise ValueError(
            f"length mismatch: {y_true.shape[0]} true labels vs {y_pred.shape[0]} predictions"
        )
    if y_true.size == 0:
        raise ValueError("cannot evaluate empty label arrays")
    matrix = np.zeros((2, 2), dtype=np.int64)
    for t, p in ((0, 0), (0, 1), (1, 0), (1, 1)):
        matrix[t, p] = int(np.sum((y_true == t) & (y_pred == p)))
    return matrix


def evaluate(y_true, y_pred) -> EvalResult:
    """Accuracy, precision, recall, and F1 over binary labels.

    F1 is the harmonic mean of precision and recall for the fake class;
    undefined ratios (zero denominators) evaluate to 0.
    """
    matrix = confusion_matrix(y_true, y_pred)
    (tn, fp), (fn, tp) = matrix.tolist()
    total = tn + fp + fn + tp
    accuracy = (tn + tp) / total
    precision = tp / (tp + fp) if (tp + fp) else 0.0
    recall = tp / (tp + fn) if (tp + fn) else 0.0
    f1 = 2 * precision * recall / (precision + recall) if (precision + recall) else 0.0
    return EvalResult(
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f1=f1,
        confusion=((tn, fp), (fn, tp)),
    )
