"""Shared classification machinery: Naive Bayes, Pegasos SVM, random
forest, grid-searched cross-validation, metrics, mRMR selection, and
versioned JSON persistence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameter, SingleClass, WidthMismatch
from .bayes import fit_naive_bayes, nb_posteriors
from .dataset import Dataset, from_rows
from .evalcv import ClassMetrics, EvalReport, evaluate, grid_search_cv, stratified_folds
from .forest import fit_forest, forest_votes
from .mrmr import mrmr_select, mutual_information, discretize_column
from .persist import (
    MODEL_FORMAT_VERSION,
    load_model,
    model_from_dict,
    model_to_dict,
    save_model,
)
from .svm import fit_svm, svm_posteriors

FAMILIES = ("naive_bayes", "svm", "random_forest")

DEFAULT_GRIDS = {
    "naive_bayes": {"alpha": [0.1, 0.5, 1.0]},
    "svm": {"C": [0.01, 0.1, 1, 10], "kernel": ["linear"]},
    "random_forest": {"trees": [50, 100, 200]},
}


@dataclass(frozen=True)
class ClassifierModel:
    family: str
    parameters: dict
    feature_names: tuple
    label_domain: tuple
    seed: int
    state: dict

    @property
    def width(self) -> int:
        return len(self.feature_names)


def train(family: str, dataset: Dataset, parameters: dict | None = None, seed: int = 0) -> ClassifierModel:
    """Fit one classifier; deterministic for a fixed seed."""
    parameters = dict(parameters or {})
    if family not in FAMILIES:
        raise InvalidParameter(f"unknown family {family!r}")
    if len(set(dataset.y)) < 2:
        raise SingleClass("training data has a single label")
    if family == "naive_bayes":
        state = fit_naive_bayes(dataset, parameters)
    elif family == "svm":
        state = fit_svm(dataset, parameters, seed)
    else:
        state = fit_forest(dataset, parameters, seed)
    return ClassifierModel(
        family=family,
        parameters=parameters,
        feature_names=tuple(dataset.feature_names),
        label_domain=tuple(dataset.label_domain),
        seed=seed,
        state=state,
    )


def posteriors(model: ClassifierModel, vector) -> dict:
    """Per-label confidence: NB posterior, squashed SVM margins, RF votes."""
    vector = np.asarray(vector, dtype=float).ravel()
    if vector.shape[0] != model.width:
        raise WidthMismatch(f"expected {model.width} features, got {vector.shape[0]}")
    if model.family == "naive_bayes":
        return nb_posteriors(model.state, model.label_domain, vector)
    if model.family == "svm":
        return svm_posteriors(model.state, model.label_domain, vector)
    return forest_votes(model.state, model.label_domain, vector)


def predict(model: ClassifierModel, vector) -> tuple[object, float]:
    """(label, confidence); ties break toward the earlier domain label."""
    probs = posteriors(model, vector)
    label = max(model.label_domain, key=lambda l: probs[l])
    return label, probs[label]


__all__ = [
    "ClassifierModel",
    "ClassMetrics",
    "Dataset",
    "DEFAULT_GRIDS",
    "EvalReport",
    "FAMILIES",
    "MODEL_FORMAT_VERSION",
    "discretize_column",
    "evaluate",
    "from_rows",
    "grid_search_cv",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "mrmr_select",
    "mutual_information",
    "posteriors",
    "predict",
    "save_model",
    "stratified_folds",
    "train",
]
