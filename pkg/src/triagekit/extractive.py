"""Extractive condensing of a conversation to at most `budget` sentences.

Six scorers over the same contract: every selected sentence is verbatim
from the source, output preserves document order, ties break toward the
earlier sentence, and |selected| = min(budget, #sentences). The default
budget is 5 sentences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import learners
from ._kernels import gibbs_sweeps
from ._kernels.pure import splitmix64_next
from .corpus import GoldSummary, UserRequest
from .errors import DegenerateLabels, EmptyInput, SingleClass
from .textproc import (
    SentenceRecord,
    load_stopwords,
    sentence_split,
    transform,
    fit_vectorizer,
)

DEFAULT_BUDGET = 5

EXTRACTIVE_METHODS = (
    "sumbasic",
    "edmundson",
    "steinberger_lsa",
    "lda",
    "textrank",
    "supervised",
)


@dataclass(frozen=True)
class SentenceScoreTable:
    """Importance score per sentence origin, with method metadata."""

    scores: dict[tuple[int, int], float]
    method: str


@dataclass(frozen=True)
class ExtractiveSummary:
    request_id: str
    selected: tuple[SentenceRecord, ...]
    method: str
    scores: tuple[float, ...]  # aligned with selected
    table: SentenceScoreTable

    def tokens(self) -> list[str]:
        return [t for s in self.selected for t in s.normalized_tokens]

    def text(self) -> str:
        return " ".join(s.text for s in self.selected)

    def to_record(self) -> dict:
        return {
            "request_id": self.request_id,
            "method": self.method,
            "sentences": [
                {"origin": list(s.origin), "text": s.text, "score": score}
                for s, score in zip(self.selected, self.scores)
            ],
        }


def conversation_sentences(request: UserRequest) -> list[SentenceRecord]:
    """All sentences of the conversation, in utterance order."""
    sentences: list[SentenceRecord] = []
    for utterance in request.conversation:
        sentences.extend(sentence_split(utterance.text, utterance.index))
    return sentences


def _content_tokens(sentence: SentenceRecord, stopwords: frozenset[str]) -> list[str]:
    return [t for t in sentence.normalized_tokens if t not in stopwords]


def _select(
    sentences: Sequence[SentenceRecord],
    scores: Sequence[float],
    budget: int,
    method: str,
    request_id: str,
) -> ExtractiveSummary:
    """Top-budget by score, ties to the earlier sentence, document order out.

    Scores are quantized to 9 decimals for ranking so that symmetric
    inputs tie exactly regardless of float noise.
    """
    order = sorted(range(len(sentences)), key=lambda i: (-round(scores[i], 9), i))
    chosen = sorted(order[: max(budget, 0)])
    table = SentenceScoreTable(
        scores={s.origin: float(score) for s, score in zip(sentences, scores)},
        method=method,
    )
    return ExtractiveSummary(
        request_id=request_id,
        selected=tuple(sentences[i] for i in chosen),
        method=method,
        scores=tuple(float(scores[i]) for i in chosen),
        table=table,
    )


def _require_sentences(sentences):
    if not sentences:
        raise EmptyInput("no sentences to summarize")


# ---------------------------------------------------------------------------
# Frequency-driven scorer with reselection damping
# ---------------------------------------------------------------------------


def sumbasic(
    sentences: Sequence[SentenceRecord],
    budget: int = DEFAULT_BUDGET,
    stopwords: frozenset[str] = frozenset(),
    request_id: str = "",
) -> ExtractiveSummary:
    """Word-probability scoring; picked words are squared to damp repeats."""
    _require_sentences(sentences)
    contents = [_content_tokens(s, stopwords) for s in sentences]
    total = sum(len(c) for c in contents)
    prob: dict[str, float] = {}
    for content in contents:
        for word in content:
            prob[word] = prob.get(word, 0.0) + 1.0
    for word in prob:
        prob[word] /= max(total, 1)

    def sentence_score(content):
        if not content:
            return 0.0
        return sum(prob[w] for w in content) / len(content)

    initial = [sentence_score(c) for c in contents]
    remaining = list(range(len(sentences)))
    picked: list[int] = []
    pick_scores: dict[int, float] = {}
    while remaining and len(picked) < budget:
        best = max(remaining, key=lambda i: (round(sentence_score(contents[i]), 9), -i))
        picked.append(best)
        pick_scores[best] = sentence_score(contents[best])
        remaining.remove(best)
        for word in set(contents[best]):
            prob[word] = prob[word] ** 2

    chosen = sorted(picked)
    table = SentenceScoreTable(
        scores={s.origin: float(sc) for s, sc in zip(sentences, initial)},
        method="sumbasic",
    )
    return ExtractiveSummary(
        request_id=request_id,
        selected=tuple(sentences[i] for i in chosen),
        method="sumbasic",
        scores=tuple(pick_scores[i] for i in chosen),
        table=table,
    )


# ---------------------------------------------------------------------------
# Weighted-component scorer (cue / key / title / location)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentWeights:
    cue: float = 1.0
    key: float = 1.0
    title: float = 1.0
    location: float = 1.0


def edmundson(
    sentences: Sequence[SentenceRecord],
    weights: ComponentWeights = ComponentWeights(),
    cue_lexicon: Optional[frozenset[str]] = None,
    title_tokens: Sequence[str] = (),
    budget: int = DEFAULT_BUDGET,
    stopwords: frozenset[str] = frozenset(),
    request_id: str = "",
) -> ExtractiveSummary:
    """score = w_cue*cue hits + w_key*keyword hits + w_title*subject overlap
    + w_location*(first/last sentence of its utterance)."""
    _require_sentences(sentences)
    if cue_lexicon is None:
        cue_lexicon = _default_cue_lexicon()
    contents = [_content_tokens(s, stopwords) for s in sentences]
    freq: dict[str, int] = {}
    for content in contents:
        for word in content:
            freq[word] = freq.get(word, 0) + 1
    keywords = {w for w, c in freq.items() if c >= 2}
    title_set = {t.lower() for t in title_tokens if t.lower() not in stopwords}

    last_in_utterance: dict[int, int] = {}
    for s in sentences:
        utt, idx = s.origin
        last_in_utterance[utt] = max(last_in_utterance.get(utt, 0), idx)

    scores = []
    for s, content in zip(sentences, contents):
        cue_hits = sum(1 for t in s.normalized_tokens if t in cue_lexicon)
        key_hits = sum(1 for t in content if t in keywords)
        title_hits = sum(1 for t in content if t in title_set)
        utt, idx = s.origin
        location = 1.0 if idx == 0 or idx == last_in_utterance[utt] else 0.0
        scores.append(
            weights.cue * cue_hits
            + weights.key * key_hits
            + weights.title * title_hits
            + weights.location * location
        )
    return _select(sentences, scores, budget, "edmundson", request_id)


_CUE_LEXICON: Optional[frozenset[str]] = None


def _default_cue_lexicon() -> frozenset[str]:
    global _CUE_LEXICON
    if _CUE_LEXICON is None:
        from .textproc import _bundled_wordlist

        _CUE_LEXICON = _bundled_wordlist("cue_words.txt")
    return _CUE_LEXICON


# ---------------------------------------------------------------------------
# Latent-semantic scorer
# ---------------------------------------------------------------------------


def steinberger_lsa(
    sentences: Sequence[SentenceRecord],
    budget: int = DEFAULT_BUDGET,
    stopwords: frozenset[str] = frozenset(),
    request_id: str = "",
) -> ExtractiveSummary:
    """Sentence score = sqrt(sum_k sigma_k^2 v_{k,s}^2) over retained topics."""
    _require_sentences(sentences)
    contents = [_content_tokens(s, stopwords) for s in sentences]
    vocab = sorted({w for c in contents for w in c})
    if not vocab:
        return _select(sentences, [0.0] * len(sentences), budget, "steinberger_lsa", request_id)
    row = {w: i for i, w in enumerate(vocab)}
    matrix = np.zeros((len(vocab), len(sentences)))
    for j, content in enumerate(contents):
        for w in content:
            matrix[row[w], j] += 1.0
    _, sigma, vt = np.linalg.svd(matrix, full_matrices=False)
    tol = max(matrix.shape) * np.finfo(float).eps * (sigma[0] if sigma.size else 0.0)
    rank = int(np.sum(sigma > tol))
    k = min(rank, budget)
    if k == 0:
        scores = [0.0] * len(sentences)
    else:
        weighted = (sigma[:k, None] ** 2) * (vt[:k, :] ** 2)
        scores = np.sqrt(weighted.sum(axis=0)).tolist()
    return _select(sentences, scores, budget, "steinberger_lsa", request_id)


# ---------------------------------------------------------------------------
# Topic-model scorer (collapsed Gibbs)
# ---------------------------------------------------------------------------


def lda_summarize(
    sentences: Sequence[SentenceRecord],
    num_topics: int = 3,
    gibbs_iters: int = 500,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    stopwords: frozenset[str] = frozenset(),
    request_id: str = "",
) -> ExtractiveSummary:
    """Sentences as topic-model documents; score = mean probability of the
    sentence's words under the dominant conversation topic.

    Symmetric priors alpha = 50/K, beta = 0.01; deterministic for a fixed
    seed (the sampler RNG is seeded splitmix64, identical across backends).
    """
    _require_sentences(sentences)
    if num_topics < 1:
        raise ValueError("num_topics must be >= 1")
    contents = [_content_tokens(s, stopwords) for s in sentences]
    vocab = sorted({w for c in contents for w in c})
    if not vocab:
        return _select(sentences, [0.0] * len(sentences), budget, "lda", request_id)
    word_of = {w: i for i, w in enumerate(vocab)}

    doc_ids, word_ids = [], []
    for d, content in enumerate(contents):
        for w in content:
            doc_ids.append(d)
            word_ids.append(word_of[w])
    n_tokens = len(word_ids)
    doc_ids = np.asarray(doc_ids, dtype=np.int32)
    word_ids = np.asarray(word_ids, dtype=np.int32)

    alpha = 50.0 / num_topics
    beta = 0.01
    state = (seed or 1) & 0xFFFFFFFFFFFFFFFF
    topics = np.empty(n_tokens, dtype=np.int32)
    for i in range(n_tokens):
        state, z = splitmix64_next(state)
        topics[i] = z % num_topics

    doc_topic = np.zeros((len(sentences), num_topics), dtype=np.int32)
    topic_word = np.zeros((num_topics, len(vocab)), dtype=np.int32)
    topic_sum = np.zeros(num_topics, dtype=np.int32)
    for i in range(n_tokens):
        doc_topic[doc_ids[i], topics[i]] += 1
        topic_word[topics[i], word_ids[i]] += 1
        topic_sum[topics[i]] += 1

    gibbs_sweeps(
        doc_ids, word_ids, topics, doc_topic, topic_word, topic_sum,
        alpha, beta, gibbs_iters, state,
    )

    dominant = int(np.argmax(topic_sum))  # ties to the lowest topic id
    phi = (topic_word[dominant].astype(float) + beta) / (float(topic_sum[dominant]) + len(vocab) * beta)
    scores = []
    for content in contents:
        if not content:
            scores.append(0.0)
        else:
            scores.append(float(sum(phi[word_of[w]] for w in content) / len(content)))
    return _select(sentences, scores, budget, "lda", request_id)


# ---------------------------------------------------------------------------
# Graph scorer (similarity-weighted PageRank)
# ---------------------------------------------------------------------------


def sentence_similarity(
    a: SentenceRecord, b: SentenceRecord, stopwords: frozenset[str] = frozenset()
) -> float:
    """|shared content words| / (ln|a| + ln|b|); 0 when the denominator
    would be <= 0 (single-token sentences)."""
    set_a = set(_content_tokens(a, stopwords))
    set_b = set(_content_tokens(b, stopwords))
    overlap = len(set_a & set_b)
    if overlap == 0:
        return 0.0
    denom = math.log(len(a.tokens)) + math.log(len(b.tokens)) if min(len(a.tokens), len(b.tokens)) > 0 else 0.0
    if denom <= 0.0:
        return 0.0
    return overlap / denom


def pagerank_weighted(
    weights: np.ndarray,
    damping: float,
    epsilon: float,
    max_iters: int,
    residuals: Optional[list] = None,
) -> np.ndarray:
    """Power iteration on a weighted graph; ranks sum to 1, dangling nodes
    spread their mass uniformly. When a list is passed as `residuals` the
    per-iteration L1 changes are appended to it."""
    n = weights.shape[0]
    out = weights.sum(axis=1)
    rank = np.full(n, 1.0 / n)
    for _ in range(max_iters):
        incoming = np.zeros(n)
        dangling = 0.0
        for j in range(n):
            if out[j] > 0.0:
                incoming += rank[j] * weights[j] / out[j]
            else:
                dangling += rank[j]
        new_rank = (1.0 - damping) / n + damping * (incoming + dangling / n)
        residual = np.abs(new_rank - rank).sum()
        if residuals is not None:
            residuals.append(float(residual))
        rank = new_rank
        if residual < epsilon:
            break
    return rank


def textrank(
    sentences: Sequence[SentenceRecord],
    damping: float = 0.85,
    epsilon: float = 1e-4,
    max_iters: int = 100,
    budget: int = DEFAULT_BUDGET,
    stopwords: frozenset[str] = frozenset(),
    request_id: str = "",
) -> ExtractiveSummary:
    _require_sentences(sentences)
    n = len(sentences)
    weights = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            sim = sentence_similarity(sentences[i], sentences[j], stopwords)
            weights[i, j] = sim
            weights[j, i] = sim
    rank = pagerank_weighted(weights, damping, epsilon, max_iters)
    return _select(sentences, rank.tolist(), budget, "textrank", request_id)


# ---------------------------------------------------------------------------
# Supervised scorer (naive-Bayes indicator model over sentence features)
# ---------------------------------------------------------------------------

SENTENCE_FEATURES = (
    "relative_position",
    "token_length",
    "mean_tfidf",
    "subject_overlap",
    "is_customer",
)

SENTENCE_MODEL_VERSION = 1


@dataclass(frozen=True)
class SentenceClassifierModel:
    """Gaussian NB over per-sentence features + the tf-idf vectorizer used
    for the mean-tfidf feature. Feature list is versioned."""

    classifier: "learners.ClassifierModel"
    vectorizer: object
    stopwords: frozenset[str]
    feature_names: tuple[str, ...] = SENTENCE_FEATURES
    version: int = SENTENCE_MODEL_VERSION


def _sentence_features(
    sentence: SentenceRecord,
    position: int,
    total: int,
    request: UserRequest,
    vectorizer,
    stopwords: frozenset[str],
) -> np.ndarray:
    rel = position / (total - 1) if total > 1 else 0.0
    length = float(len(sentence.tokens))
    vec = transform(vectorizer, sentence.tokens)
    mean_tfidf = sum(vec.values()) / max(len(sentence.tokens), 1)
    subject = {t.lower() for t in request.subject.split() if t.lower() not in stopwords}
    content = set(_content_tokens(sentence, stopwords))
    overlap = len(subject & content) / max(len(subject), 1)
    utterance = request.conversation[_utterance_position(request, sentence.origin[0])]
    is_customer = 1.0 if utterance.speaker_role == "customer" else 0.0
    return np.array([rel, length, mean_tfidf, overlap, is_customer])


def _utterance_position(request: UserRequest, utterance_index: int) -> int:
    for pos, u in enumerate(request.conversation):
        if u.index == utterance_index:
            return pos
    raise KeyError(f"utterance index {utterance_index} not in request {request.id}")


def supervised_train(
    training: Sequence[tuple[UserRequest, GoldSummary]],
    stopwords: frozenset[str] = frozenset(),
    seed: int = 0,
) -> SentenceClassifierModel:
    """Train the in-summary/not-in-summary sentence classifier."""
    if not training:
        raise DegenerateLabels("no training examples")
    documents = []
    for request, _ in training:
        for sentence in conversation_sentences(request):
            documents.append(list(sentence.tokens))
    vectorizer = fit_vectorizer(documents, mode="tfidf", normalization="none", stopwords=stopwords)

    rows, labels = [], []
    for request, gold in training:
        sentences = conversation_sentences(request)
        gold_set = set(gold.sentence_indices)
        for position, sentence in enumerate(sentences):
            rows.append(
                _sentence_features(sentence, position, len(sentences), request, vectorizer, stopwords)
            )
            labels.append(sentence.origin in gold_set)
    if len(set(labels)) < 2:
        raise DegenerateLabels("training sentences must include both classes")
    dataset = learners.Dataset(
        X=np.array(rows), y=list(labels), feature_names=list(SENTENCE_FEATURES)
    )
    try:
        classifier = learners.train(
            "naive_bayes", dataset, {"distribution": "gaussian"}, seed=seed
        )
    except SingleClass as exc:
        raise DegenerateLabels(str(exc))
    return SentenceClassifierModel(
        classifier=classifier, vectorizer=vectorizer, stopwords=stopwords
    )


def supervised_summarize(
    model: SentenceClassifierModel,
    sentences: Sequence[SentenceRecord],
    budget: int = DEFAULT_BUDGET,
    request: Optional[UserRequest] = None,
    request_id: str = "",
) -> ExtractiveSummary:
    """Top-budget sentences by posterior in-summary probability."""
    _require_sentences(sentences)
    scores = []
    for position, sentence in enumerate(sentences):
        if request is not None:
            features = _sentence_features(
                sentence, position, len(sentences), request, model.vectorizer, model.stopwords
            )
        else:
            vec = transform(model.vectorizer, sentence.tokens)
            mean_tfidf = sum(vec.values()) / max(len(sentence.tokens), 1)
            rel = position / (len(sentences) - 1) if len(sentences) > 1 else 0.0
            features = np.array([rel, float(len(sentence.tokens)), mean_tfidf, 0.0, 1.0])
        posterior = learners.posteriors(model.classifier, features)
        scores.append(posterior.get(True, 0.0))
    return _select(
        sentences, scores, budget, "supervised", request_id or (request.id if request else "")
    )


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def summarize_request(
    request: UserRequest,
    method: str = "textrank",
    budget: int = DEFAULT_BUDGET,
    stopword_profile: str = "default",
    seed: int = 0,
    model: Optional[SentenceClassifierModel] = None,
    **params,
) -> ExtractiveSummary:
    """Summarize a request's conversation with the named method."""
    sentences = conversation_sentences(request)
    _require_sentences(sentences)
    stopwords = load_stopwords(stopword_profile)
    if method == "sumbasic":
        return sumbasic(sentences, budget, stopwords, request.id)
    if method == "edmundson":
        return edmundson(
            sentences,
            params.get("weights", ComponentWeights()),
            params.get("cue_lexicon"),
            request.subject.split(),
            budget,
            stopwords,
            request.id,
        )
    if method == "steinberger_lsa":
        return steinberger_lsa(sentences, budget, stopwords, request.id)
    if method == "lda":
        return lda_summarize(
            sentences,
            params.get("num_topics", 3),
            params.get("gibbs_iters", 500),
            seed,
            budget,
            stopwords,
            request.id,
        )
    if method == "textrank":
        return textrank(
            sentences,
            params.get("damping", 0.85),
            params.get("epsilon", 1e-4),
            params.get("max_iters", 100),
            budget,
            stopwords,
            request.id,
        )
    if method == "supervised":
        if model is None:
            raise ValueError("supervised method requires a trained model")
        return supervised_summarize(model, sentences, budget, request, request.id)
    raise ValueError(f"unknown method {method!r}")
