"""Feature-matrix container shared by the classifiers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


@dataclass
class Dataset:
    X: np.ndarray  # (n_rows, n_features)
    y: list
    feature_names: list[str]
    label_domain: tuple = ()

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        if len(self.y) == 0:
            self.X = np.zeros((0, len(self.feature_names)))
        elif self.X.ndim != 2:
            self.X = self.X.reshape(len(self.y), -1)
        if self.X.shape[0] != len(self.y):
            raise ValueError("row count and label count differ")
        if self.X.shape[1] != len(self.feature_names):
            raise ValueError("feature_names width mismatch")
        observed = set(self.y)
        if not self.label_domain:
            self.label_domain = tuple(sorted(observed, key=repr))
        elif not observed <= set(self.label_domain):
            raise ValueError("labels outside the declared domain")

    @property
    def width(self) -> int:
        return self.X.shape[1]

    def __len__(self) -> int:
        return len(self.y)

    def subset(self, indices: Sequence[int]) -> "Dataset":
        idx = list(indices)
        return Dataset(
            X=self.X[idx],
            y=[self.y[i] for i in idx],
            feature_names=self.feature_names,
            label_domain=self.label_domain,
        )


def from_rows(rows: Sequence[tuple[np.ndarray, object]], feature_names: list[str]) -> Dataset:
    X = np.array([np.asarray(v, dtype=float) for v, _ in rows])
    y = [label for _, label in rows]
    return Dataset(X=X, y=y, feature_names=feature_names)
