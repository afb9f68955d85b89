"""Rule-based named-entity detection: longest-match gazetteer lookup over
the thesaurus plus pattern rules (emails, phone numbers, capitalized runs
away from the sentence start). Overlaps resolve longest-match-first,
then leftmost; gazetteer hits outrank pattern hits of equal length."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..textproc import SentenceRecord
from .thesaurus import Thesaurus

_EMAIL_RE = re.compile(r"^[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}$")
_DIGITS_RE = re.compile(r"^\d[\d-]*$")


@dataclass(frozen=True)
class EntityMention:
    span: tuple[int, int]  # token [start, end)
    surface: str
    kind: str  # resolved entity kind or 'unknown'
    pattern: str  # 'gazetteer' | 'email' | 'phone' | 'capitalized'


def _gazetteer_mentions(tokens: list[str], thesaurus: Thesaurus) -> list[EntityMention]:
    mentions = []
    n = len(tokens)
    limit = thesaurus.max_surface_tokens
    for start in range(n):
        for length in range(min(limit, n - start), 0, -1):
            surface = " ".join(tokens[start : start + length])
            entry = thesaurus.lookup(surface)
            if entry is not None:
                mentions.append(
                    EntityMention(
                        span=(start, start + length),
                        surface=surface,
                        kind=entry.kind,
                        pattern="gazetteer",
                    )
                )
    return mentions


def _pattern_mentions(tokens: list[str]) -> list[EntityMention]:
    mentions = []
    n = len(tokens)
    for i, token in enumerate(tokens):
        if _EMAIL_RE.match(token):
            mentions.append(EntityMention((i, i + 1), token, "unknown", "email"))
    # phone numbers: maximal runs of digit-group tokens with >= 7 digits
    i = 0
    while i < n:
        if _DIGITS_RE.match(tokens[i]):
            j = i
            while j + 1 < n and _DIGITS_RE.match(tokens[j + 1]):
                j += 1
            digits = sum(len(re.sub(r"\D", "", t)) for t in tokens[i : j + 1])
            if digits >= 7:
                mentions.append(
                    EntityMention((i, j + 1), " ".join(tokens[i : j + 1]), "unknown", "phone")
                )
            i = j + 1
        else:
            i += 1
    # capitalized runs not at sentence start; capitalized function words
    # ("I", a mid-sentence "The") are not name material
    from .pos import is_closed_class

    def name_like(token: str) -> bool:
        return token[:1].isupper() and not is_closed_class(token)

    i = 1
    while i < n:
        if name_like(tokens[i]):
            j = i
            while j + 1 < n and name_like(tokens[j + 1]):
                j += 1
            mentions.append(
                EntityMention((i, j + 1), " ".join(tokens[i : j + 1]), "unknown", "capitalized")
            )
            i = j + 1
        else:
            i += 1
    return mentions


_PATTERN_RANK = {"gazetteer": 0, "email": 1, "phone": 2, "capitalized": 3}


def ner_detect(sentence: SentenceRecord, thesaurus: Thesaurus) -> list[EntityMention]:
    """Non-overlapping mentions for one sentence, in token order."""
    tokens = list(sentence.tokens)
    candidates = _gazetteer_mentions(tokens, thesaurus) + _pattern_mentions(tokens)
    candidates.sort(
        key=lambda m: (-(m.span[1] - m.span[0]), m.span[0], _PATTERN_RANK[m.pattern])
    )
    taken: list[EntityMention] = []
    occupied: set[int] = set()
    for mention in candidates:
        positions = set(range(*mention.span))
        if positions & occupied:
            continue
        occupied |= positions
        taken.append(mention)
    taken.sort(key=lambda m: m.span)
    return taken
