"""Thesaurus: user-language surface forms mapped to developer-language
canonical entities.

Automatic candidates come from capitalized token runs (with organization
suffix words absorbed, e.g. "Crowfoot clinic") and from adjacent word
pairs whose windowed PMI clears a threshold; the entity kind is inferred
from the source document kind. The personnel_overrides mapping is the
manual-curation step: each multi-part name expands into three surface
forms (first name, surname, full name), all pointing at the same role.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from ..corpus import SourceDocument
from ..errors import EmptyDocuments
from ..textproc import sentence_split, word_tokens

DOC_KIND_TO_ENTITY = {
    "org_description": "organization",
    "brand_description": "brand",
    "release_note": "product_term",
    "user_story": "product_term",
    "team_description": "general_entity",
}

# lowercase words a capitalized run absorbs to complete an entity name
ORG_SUFFIX_WORDS = frozenset(
    {
        "clinic", "hospital", "center", "centre", "corp", "inc", "ltd",
        "lab", "labs", "group", "team", "systems", "system", "platform",
        "portal", "app", "suite", "office", "practice", "pharmacy",
    }
)

DEFAULT_PMI_THRESHOLD = 2.0
DEFAULT_PMI_WINDOW = 5


@dataclass(frozen=True)
class ThesaurusEntry:
    surface: str  # lowercase lookup key
    canonical: str
    kind: str
    sources: tuple[str, ...]


@dataclass(frozen=True)
class Thesaurus:
    entries: dict[str, ThesaurusEntry]
    max_surface_tokens: int

    def lookup(self, surface: str) -> Optional[ThesaurusEntry]:
        return self.entries.get(surface.lower())

    def __len__(self) -> int:
        return len(self.entries)

    def entries_of_kind(self, kind: str) -> list[ThesaurusEntry]:
        return [e for e in self.entries.values() if e.kind == kind]

    def to_json(self) -> str:
        payload = {
            "entries": [
                {
                    "surface": e.surface,
                    "canonical": e.canonical,
                    "kind": e.kind,
                    "sources": list(e.sources),
                }
                for e in sorted(self.entries.values(), key=lambda e: e.surface)
            ]
        }
        return json.dumps(payload, indent=2, ensure_ascii=False)

    @staticmethod
    def from_json(text: str) -> "Thesaurus":
        payload = json.loads(text)
        entries = {}
        max_tokens = 1
        for item in payload["entries"]:
            entry = ThesaurusEntry(
                surface=item["surface"].lower(),
                canonical=item["canonical"],
                kind=item["kind"],
                sources=tuple(item.get("sources", ())),
            )
            entries[entry.surface] = entry
            max_tokens = max(max_tokens, len(entry.surface.split()))
        return Thesaurus(entries=entries, max_surface_tokens=max_tokens)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @staticmethod
    def load(path: str | Path) -> "Thesaurus":
        return Thesaurus.from_json(Path(path).read_text(encoding="utf-8"))


def _capitalized_candidates(tokens: Sequence[str]) -> list[tuple[int, int]]:
    """(start, end) token spans: capitalized runs, plus an absorbed
    organization suffix word when one follows."""
    spans = []
    i = 0
    while i < len(tokens):
        if tokens[i][:1].isupper():
            j = i
            while j + 1 < len(tokens) and tokens[j + 1][:1].isupper():
                j += 1
            end = j + 1
            if end < len(tokens) and tokens[end].lower() in ORG_SUFFIX_WORDS:
                end += 1
            # single capitalized word at sentence start is too ambiguous
            if end - i >= 2 or i > 0:
                spans.append((i, end))
            i = end
        else:
            i += 1
    return spans


def _pmi_candidates(tokens: Sequence[str], threshold: float, window: int) -> list[tuple[int, int]]:
    """Adjacent pairs whose windowed PMI clears the threshold."""
    lowered = [t.lower() for t in tokens]
    n = len(lowered)
    if n < 2:
        return []
    unigram = Counter(lowered)
    cooc: Counter = Counter()
    for i in range(n):
        for j in range(i + 1, min(n, i + window + 1)):
            cooc[frozenset((lowered[i], lowered[j]))] += 1
    spans = []
    for i in range(n - 1):
        a, b = lowered[i], lowered[i + 1]
        if a == b:
            continue
        p_ab = cooc[frozenset((a, b))] / n
        p_a = unigram[a] / n
        p_b = unigram[b] / n
        if p_ab == 0:
            continue
        pmi = math.log(p_ab / (p_a * p_b))
        if pmi >= threshold:
            spans.append((i, i + 2))
    return spans


def build_thesaurus(
    documents: Sequence[SourceDocument],
    personnel_overrides: Optional[dict[str, str]] = None,
    pmi_threshold: float = DEFAULT_PMI_THRESHOLD,
    pmi_window: int = DEFAULT_PMI_WINDOW,
) -> Thesaurus:
    """Derive entries from source documents, then inject manual overrides."""
    if not documents:
        raise EmptyDocuments("thesaurus needs at least one source document")
    entries: dict[str, ThesaurusEntry] = {}

    def add(surface: str, canonical: str, kind: str, source: str, overwrite=False):
        key = surface.lower()
        if not key:
            return
        if overwrite or key not in entries:
            existing = entries.get(key)
            sources = tuple(
                dict.fromkeys((existing.sources if existing else ()) + (source,))
            )
            entries[key] = ThesaurusEntry(
                surface=key, canonical=canonical, kind=kind, sources=sources
            )

    for doc_idx, document in enumerate(documents):
        kind = DOC_KIND_TO_ENTITY[document.kind]
        source = f"doc:{doc_idx}"
        for sentence in sentence_split(document.text):
            tokens = list(sentence.tokens)
            for start, end in _capitalized_candidates(tokens):
                surface = " ".join(tokens[start:end])
                add(surface, surface, kind, source)
            for start, end in _pmi_candidates(tokens, pmi_threshold, pmi_window):
                if any(tokens[k][:1].isupper() for k in range(start, end)):
                    continue  # capitalized runs already handled
                surface = " ".join(tokens[start:end])
                add(surface, surface, kind, source)

    for name, role in (personnel_overrides or {}).items():
        parts = word_tokens(name)
        surfaces = {name}
        if len(parts) >= 2:
            surfaces.add(parts[0])
            surfaces.add(parts[-1])
        for surface in surfaces:
            add(surface, role, "person_role", "override", overwrite=True)

    max_tokens = max((len(k.split()) for k in entries), default=1)
    return Thesaurus(entries=entries, max_surface_tokens=max_tokens)
