"""Escalation, priority, and developer-assignment prediction.

Feature vectors concatenate one text block per enabled source (all
sharing a task vocabulary) with one-hot blocks for the categorical
attributes; the block layout is recorded in the fitted featurizer.
Unknown categorical values at predict time map to an all-zero block so
triage degrades gracefully on new organizations.

Default recipes hard-wire the published winners: text-only lemmatized
conversation + extractive summary for escalation; summaries plus
organization and brand name for priority; summaries plus brand name for
assignment. Priority and assignment train only on escalated requests.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import learners
from .corpus import PRIORITY_LEVELS, UserRequest, downsample_majority
from .errors import MissingSource, SingleClass
from .extractive import ExtractiveSummary, summarize_request
from .textproc import VectorizerModel, fit_vectorizer, load_stopwords, transform_dense, word_tokens
from .ticketgen import generate_title

TEXT_SOURCES = ("conversation", "extractive_summary", "abstractive_summary")
CATEGORICAL_ATTRS = ("organization", "brand_name")

# small single-point grids keep training fast; pass learners.DEFAULT_GRIDS
# for the full published sweep
DEFAULT_TASK_GRIDS = {
    "naive_bayes": {"alpha": [1.0]},
    "svm": {"C": [1.0], "kernel": ["linear"]},
    "random_forest": {"trees": [100]},
}

_SOURCE_LABELS = {
    "conversation": "Conversation",
    "extractive_summary": "Extractive summary",
    "abstractive_summary": "Abstractive summary",
}
_ATTR_LABELS = {"organization": "Organization", "brand_name": "Brand name"}


@dataclass(frozen=True)
class FeatureRecipe:
    text_sources: tuple[str, ...] = ("conversation",)
    normalization: str = "lemmatize"  # none | stem | lemmatize
    vector_mode: str = "tfidf"  # bow | tfidf
    categorical_attrs: tuple[str, ...] = ()
    stopword_profile: str = "default"

    def __post_init__(self):
        if not self.text_sources and not self.categorical_attrs:
            raise ValueError("recipe needs at least one text source or attribute")
        for source in self.text_sources:
            if source not in TEXT_SOURCES:
                raise ValueError(f"unknown text source {source!r}")
        for attr in self.categorical_attrs:
            if attr not in CATEGORICAL_ATTRS:
                raise ValueError(f"unknown categorical attribute {attr!r}")

    def label(self) -> str:
        parts = [_SOURCE_LABELS[s] for s in self.text_sources]
        parts += [_ATTR_LABELS[a] for a in self.categorical_attrs]
        if self.normalization == "lemmatize":
            parts.append("Lemmatization")
        elif self.normalization == "stem":
            parts.append("Stemming")
        return " + ".join(parts)


DEFAULT_RECIPES = {
    "escalation": FeatureRecipe(
        text_sources=("conversation", "extractive_summary"), normalization="lemmatize"
    ),
    "priority": FeatureRecipe(
        text_sources=("abstractive_summary", "extractive_summary"),
        categorical_attrs=("organization", "brand_name"),
        normalization="lemmatize",
    ),
    "assignment": FeatureRecipe(
        text_sources=("abstractive_summary", "extractive_summary"),
        categorical_attrs=("brand_name",),
        normalization="lemmatize",
    ),
}

TABLE_RECIPES = {
    "escalation": [
        FeatureRecipe(text_sources=("conversation",), normalization="none"),
        FeatureRecipe(text_sources=("conversation",), normalization="lemmatize"),
        FeatureRecipe(text_sources=("extractive_summary",), normalization="lemmatize"),
        FeatureRecipe(
            text_sources=("conversation", "extractive_summary"), normalization="lemmatize"
        ),
    ],
    "priority": [
        FeatureRecipe(text_sources=("conversation",)),
        FeatureRecipe(text_sources=("extractive_summary",)),
        FeatureRecipe(text_sources=("conversation", "extractive_summary")),
        FeatureRecipe(text_sources=("abstractive_summary", "extractive_summary")),
        FeatureRecipe(
            text_sources=("conversation", "abstractive_summary", "extractive_summary")
        ),
        FeatureRecipe(
            text_sources=("abstractive_summary", "extractive_summary"),
            categorical_attrs=("organization", "brand_name"),
        ),
    ],
    "assignment": [
        FeatureRecipe(text_sources=("conversation",)),
        FeatureRecipe(text_sources=("extractive_summary",)),
        FeatureRecipe(text_sources=("conversation", "extractive_summary")),
        FeatureRecipe(text_sources=("abstractive_summary", "extractive_summary")),
        FeatureRecipe(
            text_sources=("conversation", "abstractive_summary", "extractive_summary")
        ),
        FeatureRecipe(
            text_sources=("abstractive_summary", "extractive_summary"),
            categorical_attrs=("brand_name",),
        ),
    ],
}


@dataclass(frozen=True)
class TaskFeaturizer:
    """Fitted feature-block layout for one task."""

    recipe: FeatureRecipe
    vectorizer: VectorizerModel
    categorical_values: dict[str, tuple[str, ...]]

    def feature_names(self) -> list[str]:
        names = []
        vocab = sorted(self.vectorizer.vocabulary, key=self.vectorizer.vocabulary.get)
        for source in self.recipe.text_sources:
            names.extend(f"{source}:{word}" for word in vocab)
        for attr in self.recipe.categorical_attrs:
            names.extend(f"{attr}={value}" for value in self.categorical_values[attr])
        return names

    @property
    def width(self) -> int:
        return len(self.recipe.text_sources) * self.vectorizer.width + sum(
            len(v) for v in self.categorical_values.values()
        )


class SummaryProvider:
    """Extractive summaries and abstractive titles per request, computed
    lazily with the configured summarizer and cached."""

    def __init__(
        self,
        summarizer: Optional[Callable[[UserRequest], ExtractiveSummary]] = None,
        budget: int = 5,
        seed: int = 0,
    ):
        self._summarizer = summarizer or (
            lambda request: summarize_request(request, method="textrank", budget=budget, seed=seed)
        )
        self._summaries: dict[str, ExtractiveSummary] = {}
        self._titles: dict[str, str] = {}

    def put_summary(self, request_id: str, summary: ExtractiveSummary) -> None:
        self._summaries[request_id] = summary

    def put_title(self, request_id: str, title: str) -> None:
        self._titles[request_id] = title

    def summary(self, request: UserRequest) -> ExtractiveSummary:
        if request.id not in self._summaries:
            self._summaries[request.id] = self._summarizer(request)
        return self._summaries[request.id]

    def title(self, request: UserRequest) -> str:
        if request.id not in self._titles:
            summary = self.summary(request)
            if summary.selected:
                self._titles[request.id] = generate_title(summary.selected).text
            else:
                self._titles[request.id] = ""
        return self._titles[request.id]


def _source_tokens(request: UserRequest, source: str, provider: Optional[SummaryProvider]) -> list[str]:
    if source == "conversation":
        return word_tokens(request.conversation_text())
    if provider is None:
        raise MissingSource(f"recipe requires {source} but no summaries were provided")
    if source == "extractive_summary":
        return [t for s in provider.summary(request).selected for t in s.tokens]
    if source == "abstractive_summary":
        return word_tokens(provider.title(request))
    raise MissingSource(f"unknown source {source!r}")


def fit_task_featurizer(
    requests: Sequence[UserRequest],
    recipe: FeatureRecipe,
    provider: Optional[SummaryProvider] = None,
) -> TaskFeaturizer:
    stopwords = load_stopwords(recipe.stopword_profile)
    documents = []
    for request in requests:
        doc: list[str] = []
        for source in recipe.text_sources:
            doc.extend(_source_tokens(request, source, provider))
        documents.append(doc)
    vectorizer = fit_vectorizer(
        documents,
        mode=recipe.vector_mode,
        normalization=recipe.normalization,
        stopwords=stopwords,
    )
    categorical_values = {}
    for attr in recipe.categorical_attrs:
        values = sorted({getattr(r, attr) for r in requests if getattr(r, attr)})
        categorical_values[attr] = tuple(values)
    return TaskFeaturizer(
        recipe=recipe, vectorizer=vectorizer, categorical_values=categorical_values
    )


def build_features(
    request: UserRequest,
    featurizer: TaskFeaturizer,
    provider: Optional[SummaryProvider] = None,
) -> np.ndarray:
    """Concatenated text and one-hot blocks in the recorded layout."""
    blocks = []
    for source in featurizer.recipe.text_sources:
        tokens = _source_tokens(request, source, provider)
        blocks.append(transform_dense(featurizer.vectorizer, tokens))
    for attr in featurizer.recipe.categorical_attrs:
        values = featurizer.categorical_values[attr]
        block = np.zeros(len(values))
        value = getattr(request, attr)
        if value in values:
            block[values.index(value)] = 1.0
        blocks.append(block)
    return np.concatenate(blocks) if blocks else np.zeros(0)


@dataclass(frozen=True)
class TaskModel:
    task: str
    classifier: learners.ClassifierModel
    featurizer: TaskFeaturizer
    best_params: dict
    report: learners.EvalReport


@dataclass
class TriagePredictors:
    escalation: Optional[TaskModel] = None
    priority: Optional[TaskModel] = None
    assignment: Optional[TaskModel] = None


def _train_task(
    task: str,
    requests: Sequence[UserRequest],
    labels: Sequence,
    recipe: FeatureRecipe,
    family: str,
    seed: int,
    folds: int,
    grid: Optional[dict],
    provider: Optional[SummaryProvider],
    label_domain: tuple = (),
) -> TaskModel:
    featurizer = fit_task_featurizer(requests, recipe, provider)
    X = np.array([build_features(r, featurizer, provider) for r in requests])
    dataset = learners.Dataset(
        X=X, y=list(labels), feature_names=featurizer.feature_names(), label_domain=label_domain
    )
    grid = grid or DEFAULT_TASK_GRIDS[family]
    best_params, classifier, report = learners.grid_search_cv(
        family, dataset, grid, folds=folds, seed=seed
    )
    return TaskModel(
        task=task,
        classifier=classifier,
        featurizer=featurizer,
        best_params=best_params,
        report=report,
    )


def train_escalation(
    requests: Sequence[UserRequest],
    recipe: FeatureRecipe = DEFAULT_RECIPES["escalation"],
    family: str = "random_forest",
    seed: int = 0,
    folds: int = 5,
    grid: Optional[dict] = None,
    downsample_ratio: float = 1.0,
    provider: Optional[SummaryProvider] = None,
) -> TaskModel:
    """Downsample the majority class, build features, grid-search CV."""
    labeled = downsample_majority(requests, ratio=downsample_ratio, seed=seed)
    provider = provider or SummaryProvider(seed=seed)
    labels = [bool(r.escalated) for r in labeled]
    return _train_task(
        "escalation", labeled, labels, recipe, family, seed, folds, grid, provider,
        label_domain=(False, True),
    )


def predict_escalation(
    model: TaskModel, request: UserRequest, provider: Optional[SummaryProvider] = None
) -> tuple[bool, float]:
    vector = build_features(request, model.featurizer, provider or SummaryProvider())
    label, confidence = learners.predict(model.classifier, vector)
    return bool(label), confidence


def _gold_priority(request: UserRequest) -> Optional[str]:
    if request.ticket is not None and request.ticket.priority:
        return request.ticket.priority
    return None


def _gold_assignee(request: UserRequest) -> Optional[str]:
    if request.ticket is not None and request.ticket.assignee:
        return request.ticket.assignee
    return request.assignee or None


def train_priority(
    requests: Sequence[UserRequest],
    recipe: FeatureRecipe = DEFAULT_RECIPES["priority"],
    family: str = "naive_bayes",
    seed: int = 0,
    folds: int = 5,
    grid: Optional[dict] = None,
    provider: Optional[SummaryProvider] = None,
) -> TaskModel:
    """Five-level priority over the escalated, human-ticketed subset."""
    rows = [(r, _gold_priority(r)) for r in requests if r.escalated and _gold_priority(r)]
    if len({label for _, label in rows}) < 2:
        raise SingleClass("need at least two priority classes")
    provider = provider or SummaryProvider(seed=seed)
    return _train_task(
        "priority",
        [r for r, _ in rows],
        [label for _, label in rows],
        recipe,
        family,
        seed,
        folds,
        grid,
        provider,
        label_domain=PRIORITY_LEVELS,
    )


def train_assignment(
    requests: Sequence[UserRequest],
    recipe: FeatureRecipe = DEFAULT_RECIPES["assignment"],
    family: str = "naive_bayes",
    seed: int = 0,
    folds: int = 5,
    grid: Optional[dict] = None,
    provider: Optional[SummaryProvider] = None,
) -> TaskModel:
    """Developer assignment over the escalated subset."""
    rows = [(r, _gold_assignee(r)) for r in requests if r.escalated and _gold_assignee(r)]
    if len({label for _, label in rows}) < 2:
        raise SingleClass("need at least two assignees")
    provider = provider or SummaryProvider(seed=seed)
    return _train_task(
        "assignment",
        [r for r, _ in rows],
        [label for _, label in rows],
        recipe,
        family,
        seed,
        folds,
        grid,
        provider,
    )


def predict_task(
    model: TaskModel, request: UserRequest, provider: Optional[SummaryProvider] = None
) -> tuple[object, float]:
    vector = build_features(request, model.featurizer, provider or SummaryProvider())
    return learners.predict(model.classifier, vector)


# ---------------------------------------------------------------------------
# Ablation benchmark (family x recipe grids in the published table layout)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BenchmarkRow:
    family: str
    recipe_label: str
    precision: float
    recall: float
    f1: float


@dataclass
class BenchmarkReport:
    task: str
    seed: int
    rows: list[BenchmarkRow] = field(default_factory=list)

    def top_flags(self) -> dict[tuple[str, str], set[str]]:
        """(family, recipe_label) -> metric names holding the family top value."""
        flags: dict[tuple[str, str], set[str]] = {}
        families = {row.family for row in self.rows}
        for family in families:
            group = [r for r in self.rows if r.family == family]
            for metric in ("precision", "recall", "f1"):
                best = max(getattr(r, metric) for r in group)
                for row in group:
                    if getattr(row, metric) == best:
                        flags.setdefault((row.family, row.recipe_label), set()).add(metric)
        return flags

    def to_json(self) -> str:
        return json.dumps(
            {
                "task": self.task,
                "seed": self.seed,
                "rows": [
                    {
                        "family": r.family,
                        "recipe": r.recipe_label,
                        "precision": r.precision,
                        "recall": r.recall,
                        "f1": r.f1,
                    }
                    for r in self.rows
                ],
            },
            indent=2,
        )

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["family", "recipe", "precision", "recall", "f1"])
        for r in self.rows:
            writer.writerow([r.family, r.recipe_label, f"{r.precision:.6f}", f"{r.recall:.6f}", f"{r.f1:.6f}"])
        return out.getvalue()

    def to_text(self) -> str:
        flags = self.top_flags()
        lines = []
        width = max((len(r.recipe_label) for r in self.rows), default=20) + 2
        current_family = None
        for row in self.rows:
            if row.family != current_family:
                current_family = row.family
                lines.append(f"{current_family}{'':<{width - len(current_family)}}Precision  Recall  F1")
            marks = flags.get((row.family, row.recipe_label), set())
            cells = []
            for metric in ("precision", "recall", "f1"):
                value = getattr(row, metric)
                star = "*" if metric in marks else " "
                cells.append(f"{value:.2f}{star}")
            lines.append(f"  {row.recipe_label:<{width - 2}}{cells[0]:>9}{cells[1]:>8}{cells[2]:>6}")
        return "\n".join(lines)


_TASK_METRIC_CLASS = {"escalation": True}  # binary tasks report the positive class


def _task_metrics(task: str, report: learners.EvalReport):
    if task in _TASK_METRIC_CLASS:
        metrics = report.per_class.get(_TASK_METRIC_CLASS[task])
        if metrics is not None:
            return metrics.precision, metrics.recall, metrics.f1
    return report.weighted.precision, report.weighted.recall, report.weighted.f1


def ablation_benchmark(
    requests: Sequence[UserRequest],
    task: str,
    families: Sequence[str] = learners.FAMILIES,
    recipes: Optional[Sequence[FeatureRecipe]] = None,
    seed: int = 0,
    folds: int = 5,
    grid: Optional[dict] = None,
    downsample_ratio: float = 1.0,
) -> BenchmarkReport:
    """One row per recipe, one section per family, P/R/F1 from CV."""
    if recipes is None:
        recipes = TABLE_RECIPES[task]
    if not recipes:
        raise ValueError("recipe list must be non-empty")
    trainers = {
        "escalation": lambda recipe, family: train_escalation(
            requests, recipe, family, seed, folds, grid, downsample_ratio
        ),
        "priority": lambda recipe, family: train_priority(
            requests, recipe, family, seed, folds, grid
        ),
        "assignment": lambda recipe, family: train_assignment(
            requests, recipe, family, seed, folds, grid
        ),
    }
    if task not in trainers:
        raise ValueError(f"unknown task {task!r}")
    report = BenchmarkReport(task=task, seed=seed)
    for family in families:
        for recipe in recipes:
            model = trainers[task](recipe, family)
            precision, recall, f1 = _task_metrics(task, model.report)
            report.rows.append(
                BenchmarkRow(
                    family=family,
                    recipe_label=recipe.label(),
                    precision=precision,
                    recall=recall,
                    f1=f1,
                )
            )
    return report


# ---------------------------------------------------------------------------
# Attribute-level mRMR (re-derive the published feature findings)
# ---------------------------------------------------------------------------

MRMR_ATTRIBUTES = (
    "requester",
    "ticket_type",
    "via",
    "severity",
    "assignee",
    "time_open",
    "time_escalated",
    "time_to_assign",
    "subject",
    "brand_name",
    "organization",
    "tags",
)


def attribute_dataset(requests: Sequence[UserRequest], task: str = "escalation") -> learners.Dataset:
    """Encode the non-conversation attributes for mRMR screening."""
    if task == "escalation":
        labels = [bool(r.escalated) for r in requests]
    elif task == "priority":
        labels = [_gold_priority(r) or "" for r in requests]
    else:
        labels = [_gold_assignee(r) or "" for r in requests]

    codes: dict[str, dict[str, int]] = {}

    def encode(attr: str, value) -> float:
        if value is None:
            return -1.0
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
        if isinstance(value, frozenset):
            value = ",".join(sorted(value))
        table = codes.setdefault(attr, {})
        text = str(value)
        if text not in table:
            table[text] = len(table)
        return float(table[text])

    X = np.array(
        [[encode(attr, getattr(r, attr)) for attr in MRMR_ATTRIBUTES] for r in requests]
    )
    return learners.Dataset(X=X, y=labels, feature_names=list(MRMR_ATTRIBUTES))
