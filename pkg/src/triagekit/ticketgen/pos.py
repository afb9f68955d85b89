"""Coarse part-of-speech guess from a closed-class lexicon, a common-verb
lemma list, and suffix heuristics. Tags: 'closed', 'verb', 'noun', 'num'."""

from __future__ import annotations

from typing import Optional

from ..textproc import _bundled_wordlist, lemmatize

_CLOSED: Optional[frozenset[str]] = None
_VERBS: Optional[frozenset[str]] = None


def _lexicons() -> tuple[frozenset[str], frozenset[str]]:
    global _CLOSED, _VERBS
    if _CLOSED is None:
        _CLOSED = _bundled_wordlist("closed_class.txt")
        _VERBS = _bundled_wordlist("verbs.txt")
    return _CLOSED, _VERBS


def is_closed_class(token: str) -> bool:
    closed, _ = _lexicons()
    return token.lower() in closed


def coarse_pos(token: str) -> str:
    closed, verbs = _lexicons()
    low = token.lower()
    if low in closed:
        return "closed"
    if low.isdigit():
        return "num"
    if low in verbs or lemmatize(low, pos_hint="verb") in verbs:
        return "verb"
    if len(low) > 4 and low.endswith(("ing", "ed")):
        return "verb"
    return "noun"


def is_verb_like(token: str) -> bool:
    return coarse_pos(token) == "verb"


def is_noun_like(token: str) -> bool:
    return coarse_pos(token) in ("noun", "num")
