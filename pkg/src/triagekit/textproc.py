"""Tokenization, normalization and vector-space features.

Shared by every downstream stage: sentence segmentation, word tokens,
Porter stemming, rule-based lemmatization, n-grams and skip-bigrams,
and BOW / TF-IDF vectorization.

Conventions fixed here (and relied on by the golden numbers elsewhere):
idf(w) = ln(N / df(w)) with no smoothing; tf = count / document length,
where document length counts all normalized tokens including
out-of-vocabulary ones. Normalization order is lowercase, then stopword
removal, then stemming or lemmatization.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import EmptyCorpus

_EMAIL = r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}"
_WORD = r"[A-Za-z0-9]+(?:['’-][A-Za-z0-9]+)*"
_TOKEN_RE = re.compile(_EMAIL + "|" + _WORD)

_VOWELS = "aeiou"


def _data_file(name: str) -> str:
    return resources.files("triagekit.data").joinpath(name).read_text(encoding="utf-8")


def _parse_wordlist(text: str) -> frozenset[str]:
    entries = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.add(line.lower())
    return frozenset(entries)


def _bundled_wordlist(name: str) -> frozenset[str]:
    return _parse_wordlist(_data_file(name))


def load_wordlist(path: str | Path) -> frozenset[str]:
    """One entry per line, ``#`` comments, case-folded."""
    return _parse_wordlist(Path(path).read_text(encoding="utf-8"))


def load_stopwords(profile: str = "default") -> frozenset[str]:
    """Stopword profiles: 'default' (base + domain), 'en', 'none', or a file path."""
    if profile == "none":
        return frozenset()
    if profile == "en":
        return _bundled_wordlist("stopwords_en.txt")
    if profile == "default":
        return _bundled_wordlist("stopwords_en.txt") | _bundled_wordlist(
            "stopwords_domain.txt"
        )
    return load_wordlist(Path(profile))


_ABBREVIATIONS = None


def _abbreviations() -> frozenset[str]:
    global _ABBREVIATIONS
    if _ABBREVIATIONS is None:
        _ABBREVIATIONS = _bundled_wordlist("abbreviations.txt")
    return _ABBREVIATIONS


def word_tokens(text: str) -> list[str]:
    """Word tokens in order; emails kept whole, hyphens/apostrophes internal."""
    return _TOKEN_RE.findall(text)


def tokens_with_spans(text: str) -> list[tuple[str, int, int]]:
    """Tokens with their (start, end) character offsets."""
    return [(m.group(0), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


@dataclass(frozen=True)
class SentenceRecord:
    """One sentence of a conversation, the unit of extraction."""

    text: str
    tokens: tuple[str, ...]
    normalized_tokens: tuple[str, ...]
    origin: tuple[int, int]  # (utterance index, sentence index)


def _preceding_word(text: str, period_index: int) -> str:
    """Word (possibly dotted, e.g. 'e.g') immediately before text[period_index]."""
    i = period_index
    j = i
    while j > 0 and (text[j - 1].isalpha() or text[j - 1] == "."):
        j -= 1
    return text[j:i].strip(".")


def sentence_split(text: str, utterance_index: int = 0) -> list[SentenceRecord]:
    """Split on {., !, ?} followed by whitespace and an uppercase letter or EOL.

    Dotted abbreviations from the bundled exception list never end a
    sentence. Joining the returned texts reconstructs the input modulo
    whitespace.
    """
    sentences: list[SentenceRecord] = []
    if not text or not text.strip():
        return sentences

    boundaries: list[int] = []
    n = len(text)
    i = 0
    while i < n:
        ch = text[i]
        if ch in ".!?":
            # consume a run of terminal punctuation
            j = i
            while j + 1 < n and text[j + 1] in ".!?":
                j += 1
            after = j + 1
            k = after
            while k < n and text[k] in " \t":
                k += 1
            at_eol = k >= n or text[k] == "\n"
            next_upper = k < n and text[k].isupper()
            is_boundary = at_eol or (k > after and next_upper)
            if ch == "." and i == j:
                word = _preceding_word(text, i)
                if word and word.lower() in _abbreviations():
                    is_boundary = False
            if is_boundary:
                boundaries.append(after)
            i = j + 1
        else:
            i += 1

    start = 0
    index = 0
    for b in boundaries + [n]:
        if b <= start:
            continue
        chunk = text[start:b].strip()
        start = b
        if not chunk:
            continue
        tokens = tuple(word_tokens(chunk))
        if not tokens:
            continue
        sentences.append(
            SentenceRecord(
                text=chunk,
                tokens=tokens,
                normalized_tokens=tuple(t.lower() for t in tokens),
                origin=(utterance_index, index),
            )
        )
        index += 1
    return sentences


# ---------------------------------------------------------------------------
# Porter stemmer
# ---------------------------------------------------------------------------


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of VC sequences: [C](VC)^m[V]."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        if _is_consonant(stem, i):
            if prev_vowel:
                m += 1
            prev_vowel = False
        else:
            prev_vowel = True
    return m


def _contains_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(stem: str) -> bool:
    return (
        len(stem) >= 2
        and stem[-1] == stem[-2]
        and _is_consonant(stem, len(stem) - 1)
    )


def _ends_cvc(stem: str) -> bool:
    if len(stem) < 3:
        return False
    if not (
        _is_consonant(stem, len(stem) - 3)
        and not _is_consonant(stem, len(stem) - 2)
        and _is_consonant(stem, len(stem) - 1)
    ):
        return False
    return stem[-1] not in "wxy"


def _apply_rules(word: str, rules, min_measure: int) -> Optional[str]:
    """Longest matching suffix wins; its measure condition decides alone."""
    best = None
    for suffix, replacement in rules:
        if word.endswith(suffix) and (best is None or len(suffix) > len(best[0])):
            best = (suffix, replacement)
    if best is None:
        return None
    suffix, replacement = best
    stem = word[: len(word) - len(suffix)]
    if _measure(stem) > min_measure:
        return stem + replacement
    return word


_STEP2 = [
    ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
    ("izer", "ize"), ("abli", "able"), ("alli", "al"), ("entli", "ent"),
    ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
    ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
    ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
]

_STEP3 = [
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
]

_STEP4 = [
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
]


def porter_stem(token: str) -> str:
    """Porter stemming algorithm, steps 1a through 5b."""
    word = token.lower()
    if len(word) < 3:
        return word

    # step 1a
    if word.endswith("sses"):
        word = word[:-2]
    elif word.endswith("ies"):
        word = word[:-2]
    elif word.endswith("ss"):
        pass
    elif word.endswith("s"):
        word = word[:-1]

    # step 1b
    flag_1b = False
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            word = word[:-1]
    elif word.endswith("ed"):
        if _contains_vowel(word[:-2]):
            word = word[:-2]
            flag_1b = True
    elif word.endswith("ing"):
        if _contains_vowel(word[:-3]):
            word = word[:-3]
            flag_1b = True
    if flag_1b:
        if word.endswith(("at", "bl", "iz")):
            word = word + "e"
        elif _ends_double_consonant(word) and word[-1] not in "lsz":
            word = word[:-1]
        elif _measure(word) == 1 and _ends_cvc(word):
            word = word + "e"

    # step 1c
    if word.endswith("y") and _contains_vowel(word[:-1]):
        word = word[:-1] + "i"

    # steps 2 and 3
    word = _apply_rules(word, _STEP2, 0) or word
    word = _apply_rules(word, _STEP3, 0) or word

    # step 4 (ion needs a preceding s or t)
    best = None
    for suffix in _STEP4:
        if word.endswith(suffix) and (best is None or len(suffix) > len(best)):
            best = suffix
    if best is not None:
        stem = word[: len(word) - len(best)]
        if _measure(stem) > 1 and (best != "ion" or stem.endswith(("s", "t"))):
            word = stem

    # step 5a
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            word = stem

    # step 5b
    if _ends_double_consonant(word) and word[-1] == "l" and _measure(word) > 1:
        word = word[:-1]

    return word


# ---------------------------------------------------------------------------
# Lemmatizer: exception table, then suffix rules
# ---------------------------------------------------------------------------

_LEMMA_EXCEPTIONS: Optional[dict[str, str]] = None

_DEDOUBLE = {"bb", "dd", "gg", "mm", "nn", "pp", "rr", "tt"}


def _lemma_exceptions() -> dict[str, str]:
    global _LEMMA_EXCEPTIONS
    if _LEMMA_EXCEPTIONS is None:
        table = {}
        for line in _data_file("lemma_exceptions.txt").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            surface, lemma = line.split()
            table[surface] = lemma
        _LEMMA_EXCEPTIONS = table
    return _LEMMA_EXCEPTIONS


def _strip_participle(word: str, suffix: str) -> Optional[str]:
    stem = word[: -len(suffix)]
    if len(stem) < 2 or not any(c in _VOWELS for c in stem):
        return None
    if len(stem) >= 3 and stem[-2:] in _DEDOUBLE:
        return stem[:-1]
    if _ends_cvc(stem) and len(stem) <= 5:
        return stem + "e"
    return stem


def lemmatize(token: str, pos_hint: Optional[str] = None) -> str:
    """Dictionary lookup, then suffix rules; unknown tokens unchanged.

    pos_hint in {'noun', 'verb'} restricts the rule families; None tries
    plural rules first, then verb inflections.
    """
    word = token.lower()
    table = _lemma_exceptions()
    if word in table:
        return table[word]
    if len(word) < 3:
        return word

    noun_ok = pos_hint in (None, "noun")
    verb_ok = pos_hint in (None, "verb")

    if noun_ok or verb_ok:
        if word.endswith("sses"):
            return word[:-2]
        if word.endswith("ies") and len(word) > 4:
            return word[:-3] + "y"
        if word.endswith("es") and word[-3] in "xz" or word.endswith(("ches", "shes")):
            return word[:-2]
        if word.endswith("ses") and len(word) > 4:
            return word[:-1]
        if word.endswith("s") and not word.endswith(("ss", "us", "is")):
            return word[:-1]

    if verb_ok:
        if word.endswith("ied") and len(word) > 4:
            return word[:-3] + "y"
        if word.endswith("eed"):
            return word[:-1] if _measure(word[:-3]) > 0 else word
        if word.endswith("ed"):
            stripped = _strip_participle(word, "ed")
            if stripped and stripped.endswith("e") and word[:-2] + "e" == stripped:
                return stripped
            if word[:-2].endswith("e"):  # e.g. 'saved' -> 'save'
                return word[:-1]
            if stripped:
                return stripped
        if word.endswith("ing") and len(word) > 5:
            stripped = _strip_participle(word, "ing")
            if stripped:
                return stripped

    return word


def normalize_tokens(
    tokens: Iterable[str],
    normalization: str = "none",
    stopwords: frozenset[str] = frozenset(),
) -> list[str]:
    """Lowercase, drop stopwords, then apply the selected normalization."""
    out = []
    for token in tokens:
        low = token.lower()
        if low in stopwords:
            continue
        if normalization == "stem":
            low = porter_stem(low)
        elif normalization == "lemmatize":
            low = lemmatize(low)
        elif normalization != "none":
            raise ValueError(f"unknown normalization {normalization!r}")
        out.append(low)
    return out


# ---------------------------------------------------------------------------
# n-grams
# ---------------------------------------------------------------------------


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    """All contiguous length-n windows, with multiplicity."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def skip_bigrams(tokens: Sequence[str], max_skip: Optional[int] = None) -> Counter:
    """Ordered pairs (tokens[i], tokens[j]), i < j, with at most max_skip
    tokens between them; None means unlimited."""
    pairs = Counter()
    n = len(tokens)
    for i in range(n):
        upper = n if max_skip is None else min(n, i + max_skip + 2)
        for j in range(i + 1, upper):
            pairs[(tokens[i], tokens[j])] += 1
    return pairs


# ---------------------------------------------------------------------------
# Vectorizer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VectorizerModel:
    """Fitted vocabulary + document frequencies; immutable after fit."""

    vocabulary: dict[str, int]
    document_frequency: dict[str, int]
    num_documents: int
    mode: str  # 'bow' | 'tfidf'
    normalization: str  # 'none' | 'stem' | 'lemmatize'
    stopwords: frozenset[str] = field(default_factory=frozenset)

    @property
    def width(self) -> int:
        return len(self.vocabulary)

    def idf(self, word: str) -> float:
        import math

        df = self.document_frequency.get(word)
        if not df:
            return 0.0
        return math.log(self.num_documents / df)


def fit_vectorizer(
    documents: Sequence[Sequence[str]],
    mode: str = "tfidf",
    normalization: str = "none",
    stopwords: frozenset[str] = frozenset(),
) -> VectorizerModel:
    """Fit vocabulary and document frequencies over token-list documents."""
    if mode not in ("bow", "tfidf"):
        raise ValueError(f"unknown mode {mode!r}")
    normalized = [normalize_tokens(doc, normalization, stopwords) for doc in documents]
    normalized = [doc for doc in normalized if doc]
    if not normalized:
        raise EmptyCorpus("no non-empty documents")
    df: Counter = Counter()
    for doc in normalized:
        df.update(set(doc))
    vocabulary = {word: col for col, word in enumerate(sorted(df))}
    return VectorizerModel(
        vocabulary=vocabulary,
        document_frequency=dict(df),
        num_documents=len(normalized),
        mode=mode,
        normalization=normalization,
        stopwords=stopwords,
    )


def transform(model: VectorizerModel, document: Sequence[str]) -> dict[int, float]:
    """Sparse feature vector {column: value}; OOV tokens ignored.

    bow: raw counts. tfidf: (count / doc length) * ln(N / df), the length
    counting every normalized token, in or out of vocabulary.
    """
    tokens = normalize_tokens(document, model.normalization, model.stopwords)
    counts = Counter(t for t in tokens if t in model.vocabulary)
    if model.mode == "bow":
        return {model.vocabulary[w]: float(c) for w, c in counts.items()}
    length = len(tokens)
    if length == 0:
        return {}
    return {
        model.vocabulary[w]: (c / length) * model.idf(w)
        for w, c in counts.items()
        if model.idf(w) != 0.0
    }


def transform_dense(model: VectorizerModel, document: Sequence[str]):
    """Dense numpy counterpart of transform."""
    import numpy as np

    vec = np.zeros(model.width)
    for col, value in transform(model, document).items():
        vec[col] = value
    return vec
