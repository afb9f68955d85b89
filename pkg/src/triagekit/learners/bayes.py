"""Naive Bayes: multinomial event model for count-like text features,
Gaussian for continuous ones."""

from __future__ import annotations

import math

import numpy as np

from ..errors import InvalidParameter
from .dataset import Dataset


def fit_naive_bayes(dataset: Dataset, parameters: dict) -> dict:
    alpha = float(parameters.get("alpha", 1.0))
    distribution = parameters.get("distribution", "multinomial")
    if alpha < 0:
        raise InvalidParameter("alpha must be >= 0")
    if distribution not in ("multinomial", "gaussian"):
        raise InvalidParameter(f"unknown distribution {distribution!r}")

    labels = list(dataset.label_domain)
    X, y = dataset.X, dataset.y
    n, d = X.shape
    priors = []
    for label in labels:
        count = sum(1 for value in y if value == label)
        priors.append(count / n)

    if distribution == "multinomial":
        if np.any(X < 0):
            raise InvalidParameter("multinomial NB requires non-negative features")
        feature_log_prob = []
        for label in labels:
            rows = X[[i for i, value in enumerate(y) if value == label]]
            counts = rows.sum(axis=0)
            total = counts.sum()
            probs = (counts + alpha) / (total + alpha * d)
            feature_log_prob.append(np.log(probs).tolist())
        return {
            "distribution": "multinomial",
            "class_log_prior": [math.log(p) if p > 0 else -math.inf for p in priors],
            "feature_log_prob": feature_log_prob,
        }

    means, variances = [], []
    all_var = X.var(axis=0)
    smoothing = 1e-9 * float(all_var.max()) if all_var.size and all_var.max() > 0 else 1e-9
    for label in labels:
        rows = X[[i for i, value in enumerate(y) if value == label]]
        means.append(rows.mean(axis=0).tolist())
        variances.append((rows.var(axis=0) + smoothing).tolist())
    return {
        "distribution": "gaussian",
        "class_log_prior": [math.log(p) if p > 0 else -math.inf for p in priors],
        "means": means,
        "variances": variances,
    }


def nb_log_joint(state: dict, labels: tuple, vector: np.ndarray) -> np.ndarray:
    log_prior = np.array(state["class_log_prior"])
    if state["distribution"] == "multinomial":
        flp = np.array(state["feature_log_prob"])
        return log_prior + flp @ vector
    means = np.array(state["means"])
    variances = np.array(state["variances"])
    log_lik = -0.5 * (
        np.log(2.0 * np.pi * variances) + (vector - means) ** 2 / variances
    ).sum(axis=1)
    return log_prior + log_lik


def nb_posteriors(state: dict, labels: tuple, vector: np.ndarray) -> dict:
    joint = nb_log_joint(state, labels, vector)
    shifted = joint - joint.max()
    weights = np.exp(shifted)
    probs = weights / weights.sum()
    return {label: float(p) for label, p in zip(labels, probs)}
