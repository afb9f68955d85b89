"""Ticket drafting: thesaurus construction, rule-based entity detection,
content transformation, and abstractive title generation."""

from .ner import EntityMention, ner_detect
from .pos import coarse_pos, is_noun_like, is_verb_like
from .thesaurus import (
    DEFAULT_PMI_THRESHOLD,
    DEFAULT_PMI_WINDOW,
    Thesaurus,
    ThesaurusEntry,
    build_thesaurus,
)
from .titles import (
    DEFAULT_BEAM_WIDTH,
    DEFAULT_MAX_WORDS,
    TitleGraph,
    TitleResult,
    beam_best_path,
    build_title_graph,
    exhaustive_best_path,
    generate_title,
    path_score,
)
from .transform import indefinite, resolve_brand, resolve_requester_role, transform_content

__all__ = [
    "DEFAULT_BEAM_WIDTH",
    "DEFAULT_MAX_WORDS",
    "DEFAULT_PMI_THRESHOLD",
    "DEFAULT_PMI_WINDOW",
    "EntityMention",
    "Thesaurus",
    "ThesaurusEntry",
    "TitleGraph",
    "TitleResult",
    "beam_best_path",
    "build_thesaurus",
    "build_title_graph",
    "coarse_pos",
    "exhaustive_best_path",
    "generate_title",
    "indefinite",
    "is_noun_like",
    "is_verb_like",
    "ner_detect",
    "path_score",
    "resolve_brand",
    "resolve_requester_role",
    "transform_content",
]
