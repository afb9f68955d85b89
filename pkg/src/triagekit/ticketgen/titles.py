"""Abstractive title generation by word-graph sentence fusion.

Sentences are aligned on (lowercased word, coarse POS) nodes; edge
weights are transition frequencies with a small positional-smoothing
bonus toward early words. Start-to-end paths are scored by total edge
weight over word count and must contain at least one verb-like and one
noun-like token. Beam search approximates the exhaustive best path (an
exhaustive searcher is exported as the test oracle); when no valid path
fits the word cap, the fallback is the highest-TF-IDF sentence's prefix,
flagged in the result metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..errors import NoValidPath
from ..textproc import SentenceRecord, fit_vectorizer, transform
from .pos import coarse_pos

START = ("<s>", "", 0)
END = ("</s>", "", 0)

POSITION_BONUS = 0.1
DEFAULT_BEAM_WIDTH = 16
DEFAULT_MAX_WORDS = 11


@dataclass(frozen=True)
class TitleResult:
    text: str
    fallback: bool
    score: float

    def word_count(self) -> int:
        return len(self.text.split())


@dataclass
class TitleGraph:
    """Word graph with sentinel start/end nodes; every input sentence
    contributes one start-to-end path."""

    surfaces: dict[tuple, str] = field(default_factory=dict)
    positions: dict[tuple, list[tuple[int, int]]] = field(default_factory=dict)
    edges: dict[tuple[tuple, tuple], float] = field(default_factory=dict)
    adjacency: dict[tuple, list[tuple]] = field(default_factory=dict)

    def successors(self, key: tuple) -> list[tuple]:
        return self.adjacency.get(key, [])


def build_title_graph(sentences: Sequence[SentenceRecord]) -> TitleGraph:
    graph = TitleGraph()
    counts: dict[tuple[tuple, tuple], int] = {}
    min_pos: dict[tuple, int] = {}

    for s_idx, sentence in enumerate(sentences):
        seen: dict[tuple, int] = {}
        path = [START]
        for position, token in enumerate(sentence.tokens):
            word = token.lower()
            pos = coarse_pos(token)
            occurrence = seen.get((word, pos), 0)
            seen[(word, pos)] = occurrence + 1
            key = (word, pos, occurrence)
            if key not in graph.surfaces:
                graph.surfaces[key] = token
                graph.positions[key] = []
            graph.positions[key].append((s_idx, position))
            min_pos[key] = min(min_pos.get(key, position), position)
            path.append(key)
        path.append(END)
        for a, b in zip(path, path[1:]):
            counts[(a, b)] = counts.get((a, b), 0) + 1

    for (a, b), freq in counts.items():
        bonus = POSITION_BONUS / (1 + min_pos.get(b, 0))
        graph.edges[(a, b)] = freq + bonus
        graph.adjacency.setdefault(a, []).append(b)
    for key in graph.adjacency:
        graph.adjacency[key].sort()
    return graph


def _word_keys(path: Sequence[tuple]) -> list[tuple]:
    return [k for k in path if k not in (START, END)]


def path_score(graph: TitleGraph, path: Sequence[tuple]) -> float:
    words = _word_keys(path)
    if not words:
        return 0.0
    total = sum(graph.edges[(a, b)] for a, b in zip(path, path[1:]))
    return total / len(words)


def _is_valid(path: Sequence[tuple]) -> bool:
    has_verb = any(k[1] == "verb" for k in _word_keys(path))
    has_noun = any(k[1] in ("noun", "num") for k in _word_keys(path))
    return has_verb and has_noun


def _rank_key(graph: TitleGraph, path: tuple) -> tuple:
    words = _word_keys(path)
    return (
        round(path_score(graph, path), 12),
        -len(words),
        tuple(graph.surfaces[k] for k in words),
    )


def exhaustive_best_path(graph: TitleGraph, max_words: int) -> tuple:
    """Test oracle: enumerate every simple start-to-end path of at most
    max_words words and return the best-scoring valid one."""
    best: Optional[tuple] = None
    stack = [(START, (START,), frozenset())]
    while stack:
        node, path, visited = stack.pop()
        for succ in graph.successors(node):
            if succ == END:
                candidate = path + (END,)
                if _is_valid(candidate) and (
                    best is None or _rank_key(graph, candidate) > _rank_key(graph, best)
                ):
                    best = candidate
            elif succ not in visited and len(_word_keys(path)) < max_words:
                stack.append((succ, path + (succ,), visited | {succ}))
    if best is None:
        raise NoValidPath("no start-to-end path satisfies the constraints")
    return best


def beam_best_path(graph: TitleGraph, max_words: int, beam_width: int) -> tuple:
    """Beam search over partial paths, ranked by average edge weight."""
    beam: list[tuple] = [(START,)]
    complete: list[tuple] = []
    for _ in range(max_words):
        expansions: list[tuple] = []
        for path in beam:
            node = path[-1]
            visited = set(path)
            for succ in graph.successors(node):
                if succ == END:
                    candidate = path + (END,)
                    if _is_valid(candidate):
                        complete.append(candidate)
                elif succ not in visited:
                    expansions.append(path + (succ,))
        if not expansions:
            break
        expansions.sort(key=lambda p: _rank_key(graph, p), reverse=True)
        beam = expansions[:beam_width]
    # paths still open at the cap may legally end if END follows
    for path in beam:
        if path[-1] != END and END in graph.successors(path[-1]):
            candidate = path + (END,)
            if _is_valid(candidate):
                complete.append(candidate)
    if not complete:
        raise NoValidPath("no start-to-end path satisfies the constraints")
    return max(complete, key=lambda p: _rank_key(graph, p))


def _fallback_title(sentences: Sequence[SentenceRecord], max_words: int) -> TitleResult:
    vectorizer = fit_vectorizer([list(s.tokens) for s in sentences], mode="tfidf")
    best_idx, best_score = 0, float("-inf")
    for i, sentence in enumerate(sentences):
        vec = transform(vectorizer, sentence.tokens)
        score = sum(vec.values()) / max(len(sentence.tokens), 1)
        if score > best_score + 1e-12:
            best_idx, best_score = i, score
    tokens = list(sentences[best_idx].tokens)[:max_words]
    return TitleResult(text=" ".join(tokens), fallback=True, score=0.0)


def generate_title(
    sentences: Sequence[SentenceRecord],
    max_words: int = DEFAULT_MAX_WORDS,
    beam_width: int = DEFAULT_BEAM_WIDTH,
    seed: int = 0,
) -> TitleResult:
    """Fuse the summary sentences into a title of at most max_words words.

    Deterministic given inputs; the seed parameter is accepted for
    interface stability (the search itself is deterministic).
    """
    if not sentences:
        raise ValueError("need at least one input sentence")
    graph = build_title_graph(sentences)
    try:
        path = beam_best_path(graph, max_words, beam_width)
    except NoValidPath:
        return _fallback_title(sentences, max_words)
    words = [graph.surfaces[k] for k in _word_keys(path)][:max_words]
    return TitleResult(
        text=" ".join(words), fallback=False, score=path_score(graph, path)
    )
