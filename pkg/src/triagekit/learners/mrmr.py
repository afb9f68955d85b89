"""Greedy minimum-redundancy maximum-relevance feature selection (MID
variant: relevance minus mean redundancy with the already-selected set).

Continuous features are discretized into equal-frequency bins before
mutual information is computed; features with at most `bins` distinct
values are used as categories directly.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np

from .dataset import Dataset


def discretize_column(values: np.ndarray, bins: int) -> list:
    unique = np.unique(values)
    if unique.size <= bins:
        return [float(v) for v in values]
    quantiles = np.quantile(values, [i / bins for i in range(1, bins)])
    return [int(np.searchsorted(quantiles, v, side="right")) for v in values]


def mutual_information(xs: list, ys: list) -> float:
    """I(X;Y) in nats from empirical joint frequencies."""
    n = len(xs)
    if n == 0:
        return 0.0
    joint = Counter(zip(xs, ys))
    px = Counter(xs)
    py = Counter(ys)
    mi = 0.0
    for (x, y), count in joint.items():
        p_xy = count / n
        mi += p_xy * math.log(p_xy * n * n / (px[x] * py[y]))
    return max(mi, 0.0)


def mrmr_select(dataset: Dataset, k: int, bins: int = 4) -> list[str]:
    """Ordered top-k feature names; deterministic, ties by feature order."""
    if k > dataset.width:
        raise ValueError("k exceeds the feature count")
    columns = [discretize_column(dataset.X[:, j], bins) for j in range(dataset.width)]
    labels = list(dataset.y)
    relevance = [mutual_information(col, labels) for col in columns]

    selected: list[int] = []
    mi_cache: dict[tuple[int, int], float] = {}

    def redundancy(j: int) -> float:
        if not selected:
            return 0.0
        total = 0.0
        for s in selected:
            key = (min(j, s), max(j, s))
            if key not in mi_cache:
                mi_cache[key] = mutual_information(columns[key[0]], columns[key[1]])
            total += mi_cache[key]
        return total / len(selected)

    while len(selected) < k:
        best_j, best_score = None, None
        for j in range(dataset.width):
            if j in selected:
                continue
            score = relevance[j] - redundancy(j)
            if best_score is None or score > best_score + 1e-12:
                best_j, best_score = j, score
        selected.append(best_j)
    return [dataset.feature_names[j] for j in selected]
