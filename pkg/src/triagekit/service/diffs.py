"""Word-level diff used for edit accounting: the count is the Levenshtein
distance over word tokens (substitutions + insertions + deletions),
backed by the compiled kernel when available."""

from __future__ import annotations

import numpy as np

from .._kernels import levenshtein_ids


def _tokenize(value) -> list[str]:
    if value is None:
        return []
    if isinstance(value, str):
        return value.split()
    if isinstance(value, (list, tuple)):
        return [str(item) for item in value]
    return str(value).split()


def word_changes(before, after) -> int:
    """Changed-word count between two field values."""
    a = _tokenize(before)
    b = _tokenize(after)
    table: dict[str, int] = {}
    def ids(tokens):
        out = np.empty(len(tokens), dtype=np.int32)
        for i, token in enumerate(tokens):
            out[i] = table.setdefault(token, len(table))
        return out
    return int(levenshtein_ids(ids(a), ids(b)))
