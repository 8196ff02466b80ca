"""Macro F1 and ROC AUC for the binary congruent/incongruent task."""

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata


class MetricUndefinedError(ValueError):
    pass


def _binary(name, values):
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0 and 1")
    return arr.astype(np.int64)


def confusion_counts(labels, predictions):
    """2x2 counts, rows = true class, columns = predicted class."""
    y = _binary("labels", labels)
    p = _binary("predictions", predictions)
    if y.size != p.size:
        raise ValueError(f"{y.size} labels but {p.size} predictions")
    cm = np.zeros((2, 2), dtype=np.int64)
    np.add.at(cm, (y, p), 1)
    return cm


def _per_class(cm):
    precision, recall, f1 = [], [], []
    for c in (0, 1):
        tp = cm[c, c]
        pred = cm[:, c].sum()
        true = cm[c, :].sum()
        pr = tp / pred if pred else 0.0
        rc = tp / true if true else 0.0
        precision.append(float(pr))
        recall.append(float(rc))
        # 2tp / (2tp + fp + fn): equal to the harmonic mean, exact on integer counts
        f1.append(float(2 * tp / (pred + true)) if tp else 0.0)
    return precision, recall, f1


def macro_f1(labels, predictions):
    if len(labels) == 0:
        raise ValueError("macro_f1 of an empty set")
    _, _, f1 = _per_class(confusion_counts(labels, predictions))
    return (f1[0] + f1[1]) / 2


def auc(labels, scores):
    """ROC AUC as the Mann-Whitney statistic, ties counted half."""
    y = _binary("labels", labels)
    s = np.asarray(scores, dtype=np.float64)
    if s.shape != y.shape:
        raise ValueError(f"{y.size} labels but {s.size} scores")
    n_pos = int(y.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise MetricUndefinedError("AUC undefined: only one class present")
    ranks = rankdata(s)
    u = ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2
    return float(u / (n_pos * n_neg))


@dataclass
class MetricsReport:
    macro_f1: float
    auc: float
    precision: list
    recall: list
    f1: list
    confusion: list
    n_examples: int

    def to_dict(self):
        return {
            "macro_f1": self.macro_f1,
            "auc": self.auc,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "confusion": self.confusion,
            "n_examples": self.n_examples,
        }


def evaluate_predictions(labels, p_incongruent, predictions=None):
    """Full report; ``auc`` uses the incongruent-class probability as score."""
    p_incongruent = np.asarray(p_incongruent, dtype=np.float64)
    if predictions is None:
        predictions = (p_incongruent > 0.5).astype(np.int64)
    cm = confusion_counts(labels, predictions)
    precision, recall, f1 = _per_class(cm)
    return MetricsReport(
        macro_f1=(f1[0] + f1[1]) / 2,
        auc=auc(labels, p_incongruent),
        precision=precision,
        recall=recall,
        f1=f1,
        confusion=cm.tolist(),
        n_examples=int(cm.sum()),
    )
