# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Must stay bit-identical to ``pure.py``."""

from libc.stdlib cimport free, malloc

ctypedef unsigned long long u64

cdef inline u64 _splitmix64(u64 *state) nogil:
    cdef u64 z
    state[0] = state[0] + <u64>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EB
    return z ^ (z >> 31)

cdef inline double _rng_double(u64 *state) nogil:
    return (_splitmix64(state) >> 11) * (1.0 / 9007199254740992.0)


def gibbs_sweeps(
    int[::1] doc_ids,
    int[::1] word_ids,
    int[::1] topics,
    int[:, ::1] doc_topic,
    int[:, ::1] topic_word,
    int[::1] topic_sum,
    double alpha,
    double beta,
    int n_sweeps,
    rng_state,
):
    cdef Py_ssize_t n_tokens = word_ids.shape[0]
    cdef int num_topics = <int>topic_sum.shape[0]
    cdef int vocab_size = <int>topic_word.shape[1]
    cdef double vbeta = vocab_size * beta
    cdef u64 state = <u64>rng_state
    cdef double *cumulative = <double *>malloc(num_topics * sizeof(double))
    if cumulative == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    cdef int sweep, d, w, k, k_old, k_new
    cdef double total, weight, target, u

    try:
        with nogil:
            for sweep in range(n_sweeps):
                for i in range(n_tokens):
                    d = doc_ids[i]
                    w = word_ids[i]
                    k_old = topics[i]
                    doc_topic[d, k_old] -= 1
                    topic_word[k_old, w] -= 1
                    topic_sum[k_old] -= 1

                    total = 0.0
                    for k in range(num_topics):
                        weight = (
                            (doc_topic[d, k] + alpha)
                            * (topic_word[k, w] + beta)
                            / (topic_sum[k] + vbeta)
                        )
                        total += weight
                        cumulative[k] = total

                    u = _rng_double(&state)
                    target = u * total
                    k_new = num_topics - 1
                    for k in range(num_topics):
                        if target < cumulative[k]:
                            k_new = k
                            break

                    topics[i] = k_new
                    doc_topic[d, k_new] += 1
                    topic_word[k_new, w] += 1
                    topic_sum[k_new] += 1
    finally:
        free(cumulative)

    return int(state)


def levenshtein_ids(int[::1] a, int[::1] b):
    cdef Py_ssize_t la = a.shape[0]
    cdef Py_ssize_t lb = b.shape[0]
    if la == 0:
        return int(lb)
    if lb == 0:
        return int(la)
    cdef int *prev = <int *>malloc((lb + 1) * sizeof(int))
    cdef int *curr = <int *>malloc((lb + 1) * sizeof(int))
    if prev == NULL or curr == NULL:
        if prev != NULL:
            free(prev)
        if curr != NULL:
            free(curr)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef int cost, best, up, left, ai
    cdef int *tmp
    cdef int result

    with nogil:
        for j in range(lb + 1):
            prev[j] = <int>j
        for i in range(1, la + 1):
            curr[0] = <int>i
            ai = a[i - 1]
            for j in range(1, lb + 1):
                cost = 0 if ai == b[j - 1] else 1
                best = prev[j - 1] + cost
                up = prev[j] + 1
                if up < best:
                    best = up
                left = curr[j - 1] + 1
                if left < best:
                    best = left
                curr[j] = best
            tmp = prev
            prev = curr
            curr = tmp
        result = prev[lb]

    free(prev)
    free(curr)
    return int(result)
