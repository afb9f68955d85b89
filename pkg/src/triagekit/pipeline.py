"""End-to-end orchestration: request in, triage suggestion out.

The five stages run in order: summarize, predict escalation, and, for
escalating requests, title generation, content transformation, and
priority + assignee prediction. Defaults wire up the recommended
configuration (supervised summarizer when gold summaries exist, else
the graph scorer; random forest for escalation; naive Bayes for
priority and assignment), every choice config-overridable.

Bundles persist as a directory: manifest.json with config, flags and
per-artifact sha256 checksums, plus one JSON artifact per component.
Loading verifies checksums (CorruptArtifact) and the format version
(VersionMismatch); a loaded bundle reproduces identical suggestions.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

from . import PIPELINE_VERSION, learners
from .corpus import DevelopmentTicket, SourceDocument, UserRequest
from .errors import (
    CorruptArtifact,
    EmptyInput,
    SingleClass,
    TriageKitError,
    VersionMismatch,
)
from .extractive import (
    DEFAULT_BUDGET,
    ExtractiveSummary,
    SentenceClassifierModel,
    conversation_sentences,
    summarize_request,
    supervised_summarize,
    supervised_train,
)
from .textproc import VectorizerModel, load_stopwords
from .ticketgen import Thesaurus, generate_title, transform_content
from .triage import (
    DEFAULT_RECIPES,
    FeatureRecipe,
    SummaryProvider,
    TaskFeaturizer,
    TaskModel,
    TriagePredictors,
    predict_task,
    train_assignment,
    train_escalation,
    train_priority,
)

BUNDLE_FORMAT_VERSION = 1


class TrainStageError(TriageKitError):
    """A training stage failed; carries which stage."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class PipelineConfig:
    summarizer_method: str = "auto"  # auto | supervised | textrank | sumbasic | ...
    budget: int = DEFAULT_BUDGET
    escalation_family: str = "random_forest"
    priority_family: str = "naive_bayes"
    assignment_family: str = "naive_bayes"
    escalation_recipe: FeatureRecipe = DEFAULT_RECIPES["escalation"]
    priority_recipe: FeatureRecipe = DEFAULT_RECIPES["priority"]
    assignment_recipe: FeatureRecipe = DEFAULT_RECIPES["assignment"]
    stopword_profile: str = "default"
    title_max_words: int = 11
    beam_width: int = 16
    downsample_ratio: float = 1.0
    folds: int = 5

    def to_dict(self) -> dict:
        payload = asdict(self)
        for key in ("escalation_recipe", "priority_recipe", "assignment_recipe"):
            payload[key] = asdict(getattr(self, key))
            payload[key]["text_sources"] = list(payload[key]["text_sources"])
            payload[key]["categorical_attrs"] = list(payload[key]["categorical_attrs"])
        return payload

    @staticmethod
    def from_dict(payload: dict) -> "PipelineConfig":
        kwargs = dict(payload)
        for key in ("escalation_recipe", "priority_recipe", "assignment_recipe"):
            if key in kwargs and isinstance(kwargs[key], dict):
                recipe = dict(kwargs[key])
                recipe["text_sources"] = tuple(recipe.get("text_sources", ()))
                recipe["categorical_attrs"] = tuple(recipe.get("categorical_attrs", ()))
                kwargs[key] = FeatureRecipe(**recipe)
        return PipelineConfig(**kwargs)


@dataclass(frozen=True)
class TriageSuggestion:
    """Full pipeline output for one request."""

    request_id: str
    summary: Optional[ExtractiveSummary]
    escalate: bool
    escalation_confidence: float
    ticket: Optional[DevelopmentTicket]
    priority_confidence: float
    assignment_confidence: float
    pipeline_version: str
    timings: dict[str, float]
    title_fallback: bool = False
    error: Optional[dict] = None  # {"step": ..., "message": ...}

    def to_dict(self, include_timings: bool = True) -> dict:
        payload = {
            "request_id": self.request_id,
            "summary": self.summary.to_record() if self.summary else None,
            "escalate": self.escalate,
            "escalation_confidence": self.escalation_confidence,
            "ticket": None,
            "priority_confidence": self.priority_confidence,
            "assignment_confidence": self.assignment_confidence,
            "pipeline_version": self.pipeline_version,
            "title_fallback": self.title_fallback,
            "error": self.error,
        }
        if self.ticket is not None:
            payload["ticket"] = {
                "request_id": self.ticket.request_id,
                "title": self.ticket.title,
                "content": self.ticket.content,
                "priority": self.ticket.priority,
                "assignee": self.ticket.assignee,
                "source": self.ticket.source,
            }
        if include_timings:
            payload["timings"] = self.timings
        return payload

    def content_json(self) -> str:
        """Canonical form with instrumentation stripped, for identity checks."""
        return json.dumps(self.to_dict(include_timings=False), sort_keys=True)


@dataclass
class PipelineBundle:
    config: PipelineConfig
    seed: int
    summarizer_method: str  # resolved (never 'auto')
    predictors: TriagePredictors
    thesaurus: Thesaurus
    sentence_model: Optional[SentenceClassifierModel] = None
    flags: dict = field(default_factory=dict)
    version: str = PIPELINE_VERSION

    def summarize(self, request: UserRequest) -> ExtractiveSummary:
        if self.summarizer_method == "supervised":
            sentences = conversation_sentences(request)
            if not sentences:
                raise EmptyInput("conversation has no sentences")
            return supervised_summarize(
                self.sentence_model, sentences, self.config.budget, request, request.id
            )
        return summarize_request(
            request,
            method=self.summarizer_method,
            budget=self.config.budget,
            stopword_profile=self.config.stopword_profile,
            seed=self.seed,
        )

    def provider(self) -> SummaryProvider:
        return SummaryProvider(summarizer=self.summarize, budget=self.config.budget, seed=self.seed)


def train_all(
    requests: Sequence[UserRequest],
    source_documents: Sequence[SourceDocument] = (),
    personnel_overrides: Optional[dict[str, str]] = None,
    config: PipelineConfig = PipelineConfig(),
    seed: int = 42,
) -> PipelineBundle:
    """Train every stage; aborts naming the failing stage."""
    flags: dict = {}

    def stage(name, fn):
        try:
            return fn()
        except TriageKitError as exc:
            raise TrainStageError(name, exc)

    if source_documents:
        from .ticketgen import build_thesaurus

        thesaurus = stage(
            "thesaurus", lambda: build_thesaurus(list(source_documents), personnel_overrides or {})
        )
    else:
        thesaurus = Thesaurus(entries={}, max_surface_tokens=1)
        flags["thesaurus_empty"] = True

    stopwords = load_stopwords(config.stopword_profile)
    sentence_model = None
    method = config.summarizer_method
    if method == "auto":
        gold_pairs = [(r, r.gold_summary) for r in requests if r.gold_summary is not None]
        if gold_pairs:
            sentence_model = stage(
                "summarizer", lambda: supervised_train(gold_pairs, stopwords, seed)
            )
            method = "supervised"
        else:
            method = "textrank"
            flags["summarizer_fallback"] = "textrank"
    elif method == "supervised":
        gold_pairs = [(r, r.gold_summary) for r in requests if r.gold_summary is not None]
        sentence_model = stage("summarizer", lambda: supervised_train(gold_pairs, stopwords, seed))

    bundle = PipelineBundle(
        config=replace(config, summarizer_method=method),
        seed=seed,
        summarizer_method=method,
        predictors=TriagePredictors(),
        thesaurus=thesaurus,
        sentence_model=sentence_model,
        flags=flags,
    )

    provider = bundle.provider()
    bundle.predictors.escalation = stage(
        "escalation",
        lambda: train_escalation(
            requests,
            recipe=config.escalation_recipe,
            family=config.escalation_family,
            seed=seed,
            folds=config.folds,
            downsample_ratio=config.downsample_ratio,
            provider=provider,
        ),
    )

    try:
        bundle.predictors.priority = train_priority(
            requests,
            recipe=config.priority_recipe,
            family=config.priority_family,
            seed=seed,
            folds=config.folds,
            provider=provider,
        )
    except SingleClass:
        flags["priority_model"] = "absent"
    try:
        bundle.predictors.assignment = train_assignment(
            requests,
            recipe=config.assignment_recipe,
            family=config.assignment_family,
            seed=seed,
            folds=config.folds,
            provider=provider,
        )
    except SingleClass:
        flags["assignment_model"] = "absent"
    return bundle


def process_request(bundle: PipelineBundle, request: UserRequest) -> TriageSuggestion:
    """Run the five stages; a stage failure produces an error record."""
    timings: dict[str, float] = {}
    total_start = time.perf_counter()

    def finish(summary=None, escalate=False, escalation_confidence=0.0, ticket=None,
               priority_confidence=0.0, assignment_confidence=0.0, title_fallback=False,
               error=None):
        timings["total"] = time.perf_counter() - total_start
        return TriageSuggestion(
            request_id=request.id,
            summary=summary,
            escalate=escalate,
            escalation_confidence=escalation_confidence,
            ticket=ticket,
            priority_confidence=priority_confidence,
            assignment_confidence=assignment_confidence,
            pipeline_version=bundle.version,
            timings=dict(timings),
            title_fallback=title_fallback,
            error=error,
        )

    def timed(step, fn):
        start = time.perf_counter()
        try:
            return fn()
        finally:
            timings[step] = time.perf_counter() - start

    try:
        summary = timed("summarize", lambda: bundle.summarize(request))
    except TriageKitError as exc:
        return finish(error={"step": "summarize", "message": str(exc)})

    provider = bundle.provider()
    provider.put_summary(request.id, summary)

    try:
        escalate, escalation_confidence = timed(
            "predict_escalation",
            lambda: predict_task(bundle.predictors.escalation, request, provider),
        )
        escalate = bool(escalate)
    except TriageKitError as exc:
        return finish(summary=summary, error={"step": "predict_escalation", "message": str(exc)})

    if not escalate:
        return finish(summary=summary, escalate=False, escalation_confidence=escalation_confidence)

    try:
        title = timed(
            "title",
            lambda: generate_title(
                summary.selected,
                max_words=bundle.config.title_max_words,
                beam_width=bundle.config.beam_width,
                seed=bundle.seed,
            ),
        )
        provider.put_title(request.id, title.text)
    except TriageKitError as exc:
        return finish(summary=summary, escalate=True,
                      escalation_confidence=escalation_confidence,
                      error={"step": "title", "message": str(exc)})

    try:
        content = timed(
            "content", lambda: transform_content(summary, request, bundle.thesaurus)
        )
    except TriageKitError as exc:
        return finish(summary=summary, escalate=True,
                      escalation_confidence=escalation_confidence,
                      title_fallback=title.fallback,
                      error={"step": "content", "message": str(exc)})

    priority, priority_confidence = "Major", 0.0
    assignee, assignment_confidence = "", 0.0
    try:
        if bundle.predictors.priority is not None:
            priority, priority_confidence = timed(
                "prioritize",
                lambda: predict_task(bundle.predictors.priority, request, provider),
            )
        if bundle.predictors.assignment is not None:
            assignee, assignment_confidence = timed(
                "assign",
                lambda: predict_task(bundle.predictors.assignment, request, provider),
            )
    except TriageKitError as exc:
        return finish(summary=summary, escalate=True,
                      escalation_confidence=escalation_confidence,
                      title_fallback=title.fallback,
                      error={"step": "prioritize_assign", "message": str(exc)})

    ticket = DevelopmentTicket(
        request_id=request.id,
        title=title.text,
        content=content,
        priority=str(priority),
        assignee=str(assignee),
        source="generated",
    )
    return finish(
        summary=summary,
        escalate=True,
        escalation_confidence=escalation_confidence,
        ticket=ticket,
        priority_confidence=priority_confidence,
        assignment_confidence=assignment_confidence,
        title_fallback=title.fallback,
    )


# ---------------------------------------------------------------------------
# Bundle persistence
# ---------------------------------------------------------------------------


def _vectorizer_to_dict(model: VectorizerModel) -> dict:
    return {
        "vocabulary": model.vocabulary,
        "document_frequency": model.document_frequency,
        "num_documents": model.num_documents,
        "mode": model.mode,
        "normalization": model.normalization,
        "stopwords": sorted(model.stopwords),
    }


def _vectorizer_from_dict(payload: dict) -> VectorizerModel:
    return VectorizerModel(
        vocabulary={k: int(v) for k, v in payload["vocabulary"].items()},
        document_frequency={k: int(v) for k, v in payload["document_frequency"].items()},
        num_documents=int(payload["num_documents"]),
        mode=payload["mode"],
        normalization=payload["normalization"],
        stopwords=frozenset(payload["stopwords"]),
    )


def _task_model_to_dict(model: TaskModel) -> dict:
    recipe = asdict(model.featurizer.recipe)
    recipe["text_sources"] = list(recipe["text_sources"])
    recipe["categorical_attrs"] = list(recipe["categorical_attrs"])
    return {
        "task": model.task,
        "classifier": learners.model_to_dict(model.classifier),
        "recipe": recipe,
        "vectorizer": _vectorizer_to_dict(model.featurizer.vectorizer),
        "categorical_values": {
            attr: list(values) for attr, values in model.featurizer.categorical_values.items()
        },
        "best_params": model.best_params,
    }


def _task_model_from_dict(payload: dict) -> TaskModel:
    recipe = dict(payload["recipe"])
    recipe["text_sources"] = tuple(recipe["text_sources"])
    recipe["categorical_attrs"] = tuple(recipe["categorical_attrs"])
    featurizer = TaskFeaturizer(
        recipe=FeatureRecipe(**recipe),
        vectorizer=_vectorizer_from_dict(payload["vectorizer"]),
        categorical_values={
            attr: tuple(values) for attr, values in payload["categorical_values"].items()
        },
    )
    return TaskModel(
        task=payload["task"],
        classifier=learners.model_from_dict(payload["classifier"]),
        featurizer=featurizer,
        best_params=payload["best_params"],
        report=learners.EvalReport(
            per_class={}, weighted=learners.ClassMetrics(0, 0, 0, 0), confusion={}, accuracy=0.0
        ),
    )


def _sentence_model_to_dict(model: SentenceClassifierModel) -> dict:
    return {
        "classifier": learners.model_to_dict(model.classifier),
        "vectorizer": _vectorizer_to_dict(model.vectorizer),
        "stopwords": sorted(model.stopwords),
        "feature_names": list(model.feature_names),
        "version": model.version,
    }


def _sentence_model_from_dict(payload: dict) -> SentenceClassifierModel:
    return SentenceClassifierModel(
        classifier=learners.model_from_dict(payload["classifier"]),
        vectorizer=_vectorizer_from_dict(payload["vectorizer"]),
        stopwords=frozenset(payload["stopwords"]),
        feature_names=tuple(payload["feature_names"]),
        version=int(payload["version"]),
    )


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def save_bundle(bundle: PipelineBundle, path: str | Path) -> None:
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    artifacts: dict[str, str] = {}

    def write(name: str, payload: dict | str) -> None:
        data = payload if isinstance(payload, str) else json.dumps(payload, sort_keys=True)
        raw = data.encode("utf-8")
        (root / name).write_bytes(raw)
        artifacts[name] = _sha256(raw)

    write("escalation.json", _task_model_to_dict(bundle.predictors.escalation))
    if bundle.predictors.priority is not None:
        write("priority.json", _task_model_to_dict(bundle.predictors.priority))
    if bundle.predictors.assignment is not None:
        write("assignment.json", _task_model_to_dict(bundle.predictors.assignment))
    if bundle.sentence_model is not None:
        write("sentence_model.json", _sentence_model_to_dict(bundle.sentence_model))
    write("thesaurus.json", bundle.thesaurus.to_json())

    manifest = {
        "format_version": BUNDLE_FORMAT_VERSION,
        "pipeline_version": bundle.version,
        "seed": bundle.seed,
        "summarizer_method": bundle.summarizer_method,
        "config": bundle.config.to_dict(),
        "flags": bundle.flags,
        "artifacts": artifacts,
    }
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True), "utf-8")


def load_bundle(path: str | Path) -> PipelineBundle:
    root = Path(path)
    manifest_path = root / "manifest.json"
    if not manifest_path.exists():
        raise CorruptArtifact("manifest.json missing")
    try:
        manifest = json.loads(manifest_path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise CorruptArtifact(f"manifest.json: {exc.msg}")
    if manifest.get("format_version") != BUNDLE_FORMAT_VERSION:
        raise VersionMismatch(
            f"bundle format {manifest.get('format_version')!r} unsupported"
        )

    def read(name: str) -> bytes:
        file_path = root / name
        if not file_path.exists():
            raise CorruptArtifact(f"{name} missing")
        raw = file_path.read_bytes()
        if _sha256(raw) != manifest["artifacts"].get(name):
            raise CorruptArtifact(f"{name}: checksum mismatch")
        return raw

    predictors = TriagePredictors(
        escalation=_task_model_from_dict(json.loads(read("escalation.json")))
    )
    if "priority.json" in manifest["artifacts"]:
        predictors.priority = _task_model_from_dict(json.loads(read("priority.json")))
    if "assignment.json" in manifest["artifacts"]:
        predictors.assignment = _task_model_from_dict(json.loads(read("assignment.json")))
    sentence_model = None
    if "sentence_model.json" in manifest["artifacts"]:
        sentence_model = _sentence_model_from_dict(json.loads(read("sentence_model.json")))
    thesaurus = Thesaurus.from_json(read("thesaurus.json").decode("utf-8"))

    return PipelineBundle(
        config=PipelineConfig.from_dict(manifest["config"]),
        seed=manifest["seed"],
        summarizer_method=manifest["summarizer_method"],
        predictors=predictors,
        thesaurus=thesaurus,
        sentence_model=sentence_model,
        flags=manifest.get("flags", {}),
        version=manifest["pipeline_version"],
    )
