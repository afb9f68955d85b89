"""Summary-quality scoring: n-gram overlap and skip-bigram+unigram overlap.

Recall is common units over reference units, precision is common units
over candidate units, F1 = 2PR/(P+R). The reference-denominator reading
follows the standard recall orientation; scores are computed over
lowercased tokens with stopwords retained, because removing stopwords
first would silently change every published-style number.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import CoverageMismatch
from .textproc import ngrams, skip_bigrams


@dataclass(frozen=True)
class RougeVariant:
    kind: str  # 'n' | 'su'
    n: int = 2
    max_skip: Optional[int] = None  # None = unlimited (su only)

    def label(self) -> str:
        if self.kind == "n":
            return f"rouge_{self.n}"
        skip = "u" if self.max_skip is None else str(self.max_skip)
        return f"rouge_su{skip}"


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float
    variant: RougeVariant
    p_common: int
    q_reference: int


def _score(candidate_units: Counter, reference_units: Counter, variant: RougeVariant) -> RougeScore:
    common = sum((candidate_units & reference_units).values())
    q_reference = sum(reference_units.values())
    n_candidate = sum(candidate_units.values())
    recall = common / q_reference if q_reference else 0.0
    precision = common / n_candidate if n_candidate else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return RougeScore(
        precision=precision,
        recall=recall,
        f1=f1,
        variant=variant,
        p_common=common,
        q_reference=q_reference,
    )


def rouge_n(candidate: Sequence[str], reference: Sequence[str], n: int) -> RougeScore:
    """n-gram overlap score; empty reference yields an all-zero score."""
    variant = RougeVariant(kind="n", n=n)
    return _score(ngrams(candidate, n), ngrams(reference, n), variant)


def _su_units(tokens: Sequence[str], max_skip: Optional[int]) -> Counter:
    units = Counter()
    for pair, count in skip_bigrams(tokens, max_skip).items():
        units[pair] += count
    for token in tokens:
        units[(token,)] += 1
    return units


def rouge_su(
    candidate: Sequence[str], reference: Sequence[str], max_skip: Optional[int] = None
) -> RougeScore:
    """Skip-bigram + unigram overlap; max_skip None means unlimited gaps."""
    variant = RougeVariant(kind="su", max_skip=max_skip)
    return _score(_su_units(candidate, max_skip), _su_units(reference, max_skip), variant)


def score_pair(candidate: Sequence[str], reference: Sequence[str], variant: RougeVariant) -> RougeScore:
    if variant.kind == "n":
        return rouge_n(candidate, reference, variant.n)
    if variant.kind == "su":
        return rouge_su(candidate, reference, variant.max_skip)
    raise ValueError(f"unknown variant kind {variant.kind!r}")


@dataclass(frozen=True)
class ComparisonMatrix:
    """Pairwise mean-F1 grid; rows are candidates, columns are references."""

    methods: tuple[str, ...]
    cells: dict[tuple[str, str], float]
    variant: RougeVariant

    def to_json(self) -> str:
        payload = {
            "variant": self.variant.label(),
            "methods": list(self.methods),
            "cells": [
                {"candidate": a, "reference": b, "mean_f1": v}
                for (a, b), v in sorted(self.cells.items())
            ],
        }
        return json.dumps(payload, indent=2)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["candidate\\reference"] + list(self.methods))
        for row in self.methods:
            cells = []
            for col in self.methods:
                if row == col:
                    cells.append("")
                else:
                    cells.append(f"{self.cells[(row, col)]:.6f}")
            writer.writerow([row] + cells)
        return out.getvalue()

    def to_text(self) -> str:
        width = max(len(m) for m in self.methods) + 2
        header = " " * width + "".join(f"{m:>{width}}" for m in self.methods)
        lines = [header]
        for row in self.methods:
            cells = []
            for col in self.methods:
                cells.append(
                    f"{'-':>{width}}" if row == col else f"{self.cells[(row, col)]:>{width}.2f}"
                )
            lines.append(f"{row:<{width}}" + "".join(cells))
        return "\n".join(lines)


def pairwise_matrix(
    summaries: dict[str, dict[str, Sequence[str]]], variant: RougeVariant
) -> ComparisonMatrix:
    """Cross-score per-method summaries over a shared request set.

    summaries maps method -> request id -> summary tokens. Cell (row, col)
    is the mean F1 of row-method summaries with col-method summaries as
    the reference; the diagonal is omitted.
    """
    methods = tuple(summaries)
    if len(methods) < 2:
        raise CoverageMismatch("need at least 2 methods")
    id_sets = {m: set(by_id) for m, by_id in summaries.items()}
    shared = id_sets[methods[0]]
    for m, ids in id_sets.items():
        if ids != shared:
            raise CoverageMismatch(f"method {m!r} covers a different request set")
    cells = {}
    order = sorted(shared)
    for row in methods:
        for col in methods:
            if row == col:
                continue
            scores = [
                score_pair(summaries[row][rid], summaries[col][rid], variant).f1
                for rid in order
            ]
            cells[(row, col)] = sum(scores) / len(scores) if scores else 0.0
    return ComparisonMatrix(methods=methods, cells=cells, variant=variant)


def score_against_gold(
    summaries: dict[str, dict[str, Sequence[str]]],
    golds: dict[str, Sequence[str]],
    variant: RougeVariant,
) -> dict[str, RougeScore]:
    """Mean P/R/F1 per method against a fixed gold reference."""
    results = {}
    gold_ids = set(golds)
    for method, by_id in summaries.items():
        if set(by_id) != gold_ids:
            raise CoverageMismatch(f"method {method!r} does not cover the gold request set")
        order = sorted(gold_ids)
        scores = [score_pair(by_id[rid], golds[rid], variant) for rid in order]
        n = len(scores)
        mean_p = sum(s.precision for s in scores) / n if n else 0.0
        mean_r = sum(s.recall for s in scores) / n if n else 0.0
        mean_f = sum(s.f1 for s in scores) / n if n else 0.0
        results[method] = RougeScore(
            precision=mean_p,
            recall=mean_r,
            f1=mean_f,
            variant=variant,
            p_common=sum(s.p_common for s in scores),
            q_reference=sum(s.q_reference for s in scores),
        )
    return results
