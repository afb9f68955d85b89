"""Evaluation metrics and stratified cross-validated grid search."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from ..errors import TooFewRowsPerFold
from .dataset import Dataset


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass
class EvalReport:
    per_class: dict
    weighted: ClassMetrics
    confusion: dict  # (true, predicted) -> count
    accuracy: float
    fold_details: list = field(default_factory=list)


def _metrics_from_confusion(confusion: dict, labels) -> EvalReport:
    per_class = {}
    total = sum(confusion.values())
    correct = sum(c for (t, p), c in confusion.items() if t == p)
    for label in labels:
        tp = confusion.get((label, label), 0)
        fp = sum(c for (t, p), c in confusion.items() if p == label and t != label)
        fn = sum(c for (t, p), c in confusion.items() if t == label and p != label)
        support = tp + fn
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label] = ClassMetrics(precision, recall, f1, support)
    if total:
        weighted = ClassMetrics(
            precision=sum(m.precision * m.support for m in per_class.values()) / total,
            recall=sum(m.recall * m.support for m in per_class.values()) / total,
            f1=sum(m.f1 * m.support for m in per_class.values()) / total,
            support=total,
        )
        accuracy = correct / total
    else:
        weighted = ClassMetrics(0.0, 0.0, 0.0, 0)
        accuracy = 0.0
    return EvalReport(per_class=per_class, weighted=weighted, confusion=confusion, accuracy=accuracy)


def evaluate(model, dataset: Dataset) -> EvalReport:
    """Confusion-matrix metrics of model predictions over the dataset."""
    from . import predict

    confusion: dict = {}
    for row, true_label in zip(dataset.X, dataset.y):
        predicted, _ = predict(model, row)
        key = (true_label, predicted)
        confusion[key] = confusion.get(key, 0) + 1
    labels = list(dataset.label_domain)
    return _metrics_from_confusion(confusion, labels)


def stratified_folds(labels: list, folds: int, seed: int) -> list[list[int]]:
    """Deterministic stratified fold assignment; returns index lists."""
    rng = random.Random(seed)
    by_label: dict = {}
    for i, label in enumerate(labels):
        by_label.setdefault(label, []).append(i)
    assignment: list[list[int]] = [[] for _ in range(folds)]
    cursor = 0
    for label in sorted(by_label, key=repr):
        indices = by_label[label]
        rng.shuffle(indices)
        for i in indices:
            assignment[cursor % folds].append(i)
            cursor += 1
    return [sorted(fold) for fold in assignment]


def grid_search_cv(
    family: str,
    dataset: Dataset,
    grid: dict,
    folds: int = 5,
    seed: int = 0,
):
    """Exhaustive parameter search maximizing mean held-out weighted F1.

    Ties break toward the earlier grid point; the winner is refit on the
    full dataset. Returns (best parameters, model, EvalReport) where the
    report pools the winner's cross-validation confusion matrices and
    lists per-fold scores in fold_details.
    """
    from . import train

    if folds < 2:
        raise ValueError("folds must be >= 2")
    if not grid:
        raise ValueError("grid must be non-empty")
    if len(dataset) < folds:
        raise TooFewRowsPerFold(f"{len(dataset)} rows cannot fill {folds} folds")

    names = list(grid)
    combos = [dict(zip(names, values)) for values in itertools.product(*(grid[n] for n in names))]
    fold_indices = stratified_folds(dataset.y, folds, seed)
    all_indices = set(range(len(dataset)))

    best = None  # (mean_f1, params, fold_scores, pooled_confusion)
    for params in combos:
        fold_scores = []
        pooled: dict = {}
        for fold in fold_indices:
            if not fold:
                continue
            train_idx = sorted(all_indices - set(fold))
            model = train(family, dataset.subset(train_idx), params, seed)
            report = evaluate(model, dataset.subset(fold))
            fold_scores.append(report.weighted.f1)
            for key, count in report.confusion.items():
                pooled[key] = pooled.get(key, 0) + count
        mean_f1 = sum(fold_scores) / len(fold_scores) if fold_scores else 0.0
        if best is None or mean_f1 > best[0]:
            best = (mean_f1, params, fold_scores, pooled)

    mean_f1, params, fold_scores, pooled = best
    final_model = train(family, dataset, params, seed)
    report = _metrics_from_confusion(pooled, list(dataset.label_domain))
    report.fold_details = [
        {"fold": i, "weighted_f1": score} for i, score in enumerate(fold_scores)
    ]
    return params, final_model, report
