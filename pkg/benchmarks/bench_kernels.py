#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-Python twins.

Also asserts both backends produce identical outputs, which is the
contract that lets the fallback activate silently.

Usage: python3 benchmarks/bench_kernels.py
"""

import random
import time

import numpy as np

from triagekit._kernels import pure

try:
    from triagekit._kernels import _speedups
except ImportError:
    _speedups = None


def lda_workload(n_docs=80, vocab=400, n_topics=8, tokens_per_doc=60, seed=3):
    rng = random.Random(seed)
    doc_ids, word_ids = [], []
    for d in range(n_docs):
        for _ in range(tokens_per_doc):
            doc_ids.append(d)
            word_ids.append(rng.randrange(vocab))
    doc_ids = np.array(doc_ids, dtype=np.int32)
    word_ids = np.array(word_ids, dtype=np.int32)
    topics = np.array([rng.randrange(n_topics) for _ in range(len(word_ids))], dtype=np.int32)
    doc_topic = np.zeros((n_docs, n_topics), dtype=np.int32)
    topic_word = np.zeros((n_topics, vocab), dtype=np.int32)
    topic_sum = np.zeros(n_topics, dtype=np.int32)
    for d, w, k in zip(doc_ids, word_ids, topics):
        doc_topic[d, k] += 1
        topic_word[k, w] += 1
        topic_sum[k] += 1
    return doc_ids, word_ids, topics, doc_topic, topic_word, topic_sum


def levenshtein_workload(pairs=3000, max_len=40, seed=5):
    rng = random.Random(seed)
    out = []
    for _ in range(pairs):
        a = np.array([rng.randrange(50) for _ in range(rng.randrange(max_len))], dtype=np.int32)
        b = np.array([rng.randrange(50) for _ in range(rng.randrange(max_len))], dtype=np.int32)
        out.append((a, b))
    return out


def bench_gibbs(backend, sweeps=20):
    arrays = lda_workload()
    copies = tuple(a.copy() for a in arrays)
    start = time.perf_counter()
    state = backend.gibbs_sweeps(*copies, 0.5, 0.01, sweeps, 12345)
    elapsed = time.perf_counter() - start
    return elapsed, state, copies


def bench_levenshtein(backend, pairs):
    start = time.perf_counter()
    totals = [backend.levenshtein_ids(a, b) for a, b in pairs]
    elapsed = time.perf_counter() - start
    return elapsed, totals


def main():
    print(f"compiled extension available: {_speedups is not None}")
    rows = []

    pure_time, pure_state, pure_arrays = bench_gibbs(pure)
    if _speedups is not None:
        ext_time, ext_state, ext_arrays = bench_gibbs(_speedups)
        assert pure_state == ext_state, "gibbs RNG state diverged between backends"
        for a, b in zip(pure_arrays, ext_arrays):
            assert np.array_equal(a, b), "gibbs arrays diverged between backends"
        rows.append(("gibbs_sweeps (80 docs x 60 tokens, K=8, 20 sweeps)", pure_time, ext_time))
    else:
        rows.append(("gibbs_sweeps (80 docs x 60 tokens, K=8, 20 sweeps)", pure_time, None))

    pairs = levenshtein_workload()
    pure_time, pure_totals = bench_levenshtein(pure, pairs)
    if _speedups is not None:
        ext_time, ext_totals = bench_levenshtein(_speedups, pairs)
        assert pure_totals == ext_totals, "levenshtein outputs diverged between backends"
        rows.append(("levenshtein_ids (3000 pairs, len<=40)", pure_time, ext_time))
    else:
        rows.append(("levenshtein_ids (3000 pairs, len<=40)", pure_time, None))

    print(f"{'kernel':<52}{'pure (s)':>10}{'compiled (s)':>14}{'speedup':>9}")
    for name, pure_time, ext_time in rows:
        if ext_time is None:
            print(f"{name:<52}{pure_time:>10.3f}{'-':>14}{'-':>9}")
        else:
            print(f"{name:<52}{pure_time:>10.3f}{ext_time:>14.3f}{pure_time / ext_time:>8.1f}x")


if __name__ == "__main__":
    main()
