"""SVM trained by Pegasos-style subgradient descent, fixed iteration
budget. Linear primal for any size; kernelized (rbf) dual limited to
2,000 rows. Confidence is a logistic squashing of the margin, a
documented non-probabilistic calibration."""

from __future__ import annotations

import math

import numpy as np

from ..errors import InvalidParameter
from .dataset import Dataset

MAX_KERNEL_ROWS = 2000


def _resolve_gamma(gamma, X: np.ndarray) -> float:
    if gamma == "scale":
        var = float(X.var())
        return 1.0 / (X.shape[1] * var) if var > 0 else 1.0
    return float(gamma)


def _rbf_matrix(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    sq = ((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=2)
    return np.exp(-gamma * sq)


def fit_svm(dataset: Dataset, parameters: dict, seed: int) -> dict:
    C = float(parameters.get("C", 1.0))
    kernel = parameters.get("kernel", "linear")
    iterations = int(parameters.get("iterations", 0)) or max(2000, 50 * len(dataset))
    if C <= 0:
        raise InvalidParameter("C must be positive")
    if kernel not in ("linear", "rbf"):
        raise InvalidParameter(f"unknown kernel {kernel!r}")
    if kernel == "rbf" and len(dataset) > MAX_KERNEL_ROWS:
        raise InvalidParameter(f"rbf kernel limited to {MAX_KERNEL_ROWS} rows")

    labels = list(dataset.label_domain)
    X = dataset.X
    n = len(dataset)
    lam = 1.0 / (C * n)
    gamma = _resolve_gamma(parameters.get("gamma", "scale"), X) if kernel == "rbf" else None

    state = {"kernel": kernel, "lambda": lam, "iterations": iterations}
    if kernel == "rbf":
        state["gamma"] = gamma
        state["support_X"] = X.tolist()
        kernel_matrix = _rbf_matrix(X, X, gamma)

    # one binary Pegasos run per label (one-vs-rest); for 2 labels a
    # single run against the second label suffices
    machines = []
    targets = labels if len(labels) > 2 else labels[1:]
    for target in targets:
        y = np.array([1.0 if value == target else -1.0 for value in dataset.y])
        rng = np.random.default_rng(seed)
        if kernel == "linear":
            w = np.zeros(X.shape[1] + 1)  # augmented bias column
            Xa = np.hstack([X, np.ones((n, 1))])
            for t in range(1, iterations + 1):
                i = int(rng.integers(n))
                eta = 1.0 / (lam * t)
                margin = y[i] * float(Xa[i] @ w)
                w *= 1.0 - eta * lam
                if margin < 1.0:
                    w += eta * y[i] * Xa[i]
            machines.append({"target": target, "weights": w.tolist()})
        else:
            alpha = np.zeros(n)
            for t in range(1, iterations + 1):
                i = int(rng.integers(n))
                decision = (alpha * y) @ kernel_matrix[:, i] / (lam * t)
                if y[i] * decision < 1.0:
                    alpha[i] += 1.0
            state_scale = 1.0 / (lam * iterations)
            machines.append(
                {
                    "target": target,
                    "alpha": alpha.tolist(),
                    "y": y.tolist(),
                    "scale": state_scale,
                }
            )
    state["machines"] = machines
    return state


def svm_decisions(state: dict, labels: tuple, vector: np.ndarray) -> dict:
    """Raw decision value per label."""
    machines = {m["target"]: m for m in state["machines"]}
    decisions = {}
    if state["kernel"] == "linear":
        augmented = np.concatenate([vector, [1.0]])
        for target, machine in machines.items():
            decisions[target] = float(np.array(machine["weights"]) @ augmented)
    else:
        support = np.array(state["support_X"])
        k = _rbf_matrix(support, vector.reshape(1, -1), state["gamma"]).ravel()
        for target, machine in machines.items():
            coeff = np.array(machine["alpha"]) * np.array(machine["y"])
            decisions[target] = float(machine["scale"] * (coeff @ k))
    if len(labels) == 2:
        positive = labels[1]
        decisions[labels[0]] = -decisions[positive]
    return decisions


def svm_posteriors(state: dict, labels: tuple, vector: np.ndarray) -> dict:
    decisions = svm_decisions(state, labels, vector)
    squashed = {label: 1.0 / (1.0 + math.exp(-decisions[label])) for label in labels}
    total = sum(squashed.values())
    if total == 0.0:
        return {label: 1.0 / len(labels) for label in labels}
    return {label: value / total for label, value in squashed.items()}
