"""Compiled and pure kernels must agree bit-for-bit."""

import random

import numpy as np
import pytest

from triagekit._kernels import KERNEL_BACKEND, pure

try:
    from triagekit._kernels import _speedups
except ImportError:
    _speedups = None

needs_ext = pytest.mark.skipif(_speedups is None, reason="extension not built")


def _random_lda_state(rng, n_docs=6, vocab=12, n_topics=3, n_tokens=80):
    doc_ids = np.array([rng.randrange(n_docs) for _ in range(n_tokens)], dtype=np.int32)
    doc_ids.sort()
    word_ids = np.array([rng.randrange(vocab) for _ in range(n_tokens)], dtype=np.int32)
    topics = np.array([rng.randrange(n_topics) for _ in range(n_tokens)], dtype=np.int32)
    doc_topic = np.zeros((n_docs, n_topics), dtype=np.int32)
    topic_word = np.zeros((n_topics, vocab), dtype=np.int32)
    topic_sum = np.zeros(n_topics, dtype=np.int32)
    for d, w, k in zip(doc_ids, word_ids, topics):
        doc_topic[d, k] += 1
        topic_word[k, w] += 1
        topic_sum[k] += 1
    return doc_ids, word_ids, topics, doc_topic, topic_word, topic_sum


@needs_ext
def test_gibbs_backends_identical():
    rng = random.Random(7)
    for trial in range(5):
        arrays = _random_lda_state(rng)
        copies = tuple(a.copy() for a in arrays)
        state_pure = pure.gibbs_sweeps(*arrays, 0.5, 0.01, 20, 12345 + trial)
        state_ext = _speedups.gibbs_sweeps(*copies, 0.5, 0.01, 20, 12345 + trial)
        assert state_pure == state_ext
        for a, b in zip(arrays, copies):
            assert np.array_equal(a, b)


@needs_ext
def test_levenshtein_backends_identical():
    rng = random.Random(11)
    for _ in range(200):
        a = np.array([rng.randrange(5) for _ in range(rng.randrange(12))], dtype=np.int32)
        b = np.array([rng.randrange(5) for _ in range(rng.randrange(12))], dtype=np.int32)
        assert pure.levenshtein_ids(a, b) == _speedups.levenshtein_ids(a, b)


def test_levenshtein_known_values():
    lev = pure.levenshtein_ids
    assert lev(np.array([1, 2, 3], dtype=np.int32), np.array([1, 9, 3], dtype=np.int32)) == 1
    assert lev(np.array([], dtype=np.int32), np.array([1, 2], dtype=np.int32)) == 2
    assert lev(np.array([1, 2], dtype=np.int32), np.array([1, 2], dtype=np.int32)) == 0
    # kitten -> sitting, classic distance 3, over char codes
    a = np.array([ord(c) for c in "kitten"], dtype=np.int32)
    b = np.array([ord(c) for c in "sitting"], dtype=np.int32)
    assert lev(a, b) == 3


def test_rng_doubles_in_unit_interval():
    state = 42
    for _ in range(1000):
        state, u = pure.rng_double(state)
        assert 0.0 <= u < 1.0


def test_backend_name_reported():
    assert KERNEL_BACKEND in {"compiled", "pure"}
