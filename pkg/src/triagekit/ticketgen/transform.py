"""Rewrite an extractive summary into developer-ticket content.

Three rules: (i) the first sentence gets an "In the {brand} system; "
prefix, (ii) first-person references to the requester become the
requester's role, (iii) person names resolve to their role behind an
indefinite article, and specific names that resolve to nothing are
deleted. Every other token is preserved verbatim, in order.
"""

from __future__ import annotations

import re
from typing import Optional

from ..corpus import UserRequest
from ..errors import UnknownBrand
from ..extractive import ExtractiveSummary
from ..textproc import SentenceRecord, tokens_with_spans
from .ner import ner_detect
from .thesaurus import Thesaurus

_FIRST_PERSON = {"i": "a", "me": "a", "we": "a"}
_FIRST_PERSON_POSSESSIVE = {"my": "a", "our": "a"}

_VOWELS = "aeiou"


def indefinite(phrase: str) -> str:
    article = "an" if phrase[:1].lower() in _VOWELS else "a"
    return f"{article} {phrase}"


def resolve_brand(request: UserRequest, thesaurus: Thesaurus, summary: ExtractiveSummary) -> str:
    """brand_name attribute first, then any brand entry found in the
    subject or summary text."""
    if request.brand_name:
        return request.brand_name
    brands = thesaurus.entries_of_kind("brand")
    if brands:
        haystack = (request.subject + " " + summary.text()).lower()
        for entry in sorted(brands, key=lambda e: (-len(e.surface), e.surface)):
            if entry.surface in haystack:
                return entry.canonical
    raise UnknownBrand(f"request {request.id}: no resolvable brand name")


def resolve_requester_role(request: UserRequest, thesaurus: Thesaurus) -> Optional[str]:
    for candidate in (request.requester, *request.requester.split()):
        if not candidate:
            continue
        entry = thesaurus.lookup(candidate)
        if entry is not None and entry.kind == "person_role":
            return entry.canonical
    return None


def _transform_sentence(
    sentence: SentenceRecord, thesaurus: Thesaurus, requester_role: Optional[str]
) -> str:
    spans = tokens_with_spans(sentence.text)
    edits: list[tuple[int, int, Optional[str]]] = []  # (char start, char end, replacement)
    edited_tokens: set[int] = set()

    for mention in ner_detect(sentence, thesaurus):
        start, end = mention.span
        char_start = spans[start][1]
        char_end = spans[end - 1][2]
        if mention.kind == "person_role":
            entry = thesaurus.lookup(mention.surface)
            edits.append((char_start, char_end, indefinite(entry.canonical)))
            edited_tokens.update(range(start, end))
        elif mention.kind == "unknown" and mention.pattern == "capitalized":
            edits.append((char_start, char_end, None))
            edited_tokens.update(range(start, end))

    if requester_role is not None:
        for i, (token, char_start, char_end) in enumerate(spans):
            if i in edited_tokens:
                continue
            low = token.lower()
            if low in _FIRST_PERSON:
                edits.append((char_start, char_end, indefinite(requester_role)))
            elif low in _FIRST_PERSON_POSSESSIVE:
                edits.append((char_start, char_end, indefinite(requester_role) + "'s"))

    text = sentence.text
    for char_start, char_end, replacement in sorted(edits, reverse=True):
        if replacement is None:
            text = text[:char_start] + text[char_end:]
        else:
            text = text[:char_start] + replacement + text[char_end:]
    # deletions can leave doubled spaces or space-before-punctuation
    text = re.sub(r" {2,}", " ", text)
    text = re.sub(r"\s+([,.;:!?])", r"\1", text)
    return text.strip()


def transform_content(
    summary: ExtractiveSummary, request: UserRequest, thesaurus: Thesaurus
) -> str:
    """Ticket content for an extractive summary; raises UnknownBrand when
    no brand is resolvable."""
    brand = resolve_brand(request, thesaurus, summary)
    requester_role = resolve_requester_role(request, thesaurus)
    pieces = []
    for position, sentence in enumerate(summary.selected):
        transformed = _transform_sentence(sentence, thesaurus, requester_role)
        if position == 0:
            transformed = f"In the {brand} system; {transformed}"
        pieces.append(transformed)
    return " ".join(pieces)
