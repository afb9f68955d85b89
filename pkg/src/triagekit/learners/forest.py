"""Random forest: Gini-impurity trees over bootstrap samples.

Vote fractions are exact multiples of 1/T. Trees serialize to plain
nested dicts so the whole model round-trips through JSON.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import InvalidParameter
from .dataset import Dataset


def _gini(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - (p * p).sum())


def _majority(counts: np.ndarray, labels: tuple):
    best = int(np.argmax(counts))  # argmax ties to the lowest index
    return labels[best]


def _build_tree(X, y_idx, indices, labels, max_depth, min_leaf, max_features, rng, depth=0):
    counts = np.bincount(y_idx[indices], minlength=len(labels))
    node_gini = _gini(counts)
    if (
        node_gini == 0.0
        or (max_depth is not None and depth >= max_depth)
        or len(indices) < 2 * min_leaf
    ):
        return {"leaf": int(np.argmax(counts))}

    n_features = X.shape[1]
    k = min(max_features, n_features)
    candidates = sorted(rng.choice(n_features, size=k, replace=False).tolist())

    best = None  # (weighted_gini, feature, threshold, left_idx, right_idx)
    for feature in candidates:
        values = X[indices, feature]
        unique = np.unique(values)
        if unique.size < 2:
            continue
        thresholds = (unique[:-1] + unique[1:]) / 2.0
        for threshold in thresholds:
            mask = values <= threshold
            n_left = int(mask.sum())
            if n_left < min_leaf or len(indices) - n_left < min_leaf:
                continue
            left_counts = np.bincount(y_idx[indices[mask]], minlength=len(labels))
            right_counts = counts - left_counts
            weighted = (
                n_left * _gini(left_counts)
                + (len(indices) - n_left) * _gini(right_counts)
            ) / len(indices)
            if best is None or weighted < best[0] - 1e-12:
                best = (weighted, feature, float(threshold), indices[mask], indices[~mask])

    if best is None or best[0] >= node_gini - 1e-12:
        return {"leaf": int(np.argmax(counts))}

    _, feature, threshold, left_idx, right_idx = best
    return {
        "feature": int(feature),
        "threshold": threshold,
        "left": _build_tree(X, y_idx, left_idx, labels, max_depth, min_leaf, max_features, rng, depth + 1),
        "right": _build_tree(X, y_idx, right_idx, labels, max_depth, min_leaf, max_features, rng, depth + 1),
    }


def fit_forest(dataset: Dataset, parameters: dict, seed: int) -> dict:
    trees = int(parameters.get("trees", 100))
    max_depth = parameters.get("max_depth")
    min_leaf = int(parameters.get("min_leaf", 1))
    if trees < 1:
        raise InvalidParameter("trees must be >= 1")
    if max_depth is not None and int(max_depth) < 1:
        raise InvalidParameter("max_depth must be >= 1 when set")
    if min_leaf < 1:
        raise InvalidParameter("min_leaf must be >= 1")

    labels = tuple(dataset.label_domain)
    label_index = {label: i for i, label in enumerate(labels)}
    y_idx = np.array([label_index[value] for value in dataset.y])
    X = dataset.X
    n = len(dataset)
    max_features = max(1, int(math.sqrt(X.shape[1])))

    rng = np.random.default_rng(seed)
    fitted = []
    for _ in range(trees):
        bootstrap = rng.integers(n, size=n)
        tree = _build_tree(
            X,
            y_idx,
            np.array(sorted(bootstrap.tolist())),
            labels,
            int(max_depth) if max_depth is not None else None,
            min_leaf,
            max_features,
            rng,
        )
        fitted.append(tree)
    return {"trees": fitted, "max_features": max_features}


def _tree_predict(tree: dict, vector: np.ndarray) -> int:
    node = tree
    while "leaf" not in node:
        node = node["left"] if vector[node["feature"]] <= node["threshold"] else node["right"]
    return node["leaf"]


def forest_votes(state: dict, labels: tuple, vector: np.ndarray) -> dict:
    counts = np.zeros(len(labels))
    for tree in state["trees"]:
        counts[_tree_predict(tree, vector)] += 1
    total = counts.sum()
    return {label: float(c / total) for label, c in zip(labels, counts)}
