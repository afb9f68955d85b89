"""Pure-Python kernels, the fallback twins of ``_speedups.pyx``.

Both implementations must stay bit-identical: same loop order, same
float arithmetic, same RNG. Any change here must be mirrored in the
Cython source.
"""

from __future__ import annotations

_MASK64 = 0xFFFFFFFFFFFFFFFF
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance one splitmix64 step; returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    z = z ^ (z >> 31)
    return state, z


def rng_double(state: int) -> tuple[int, float]:
    """Uniform double in [0, 1) from a splitmix64 step."""
    state, z = splitmix64_next(state)
    return state, (z >> 11) * _INV_2_53


def gibbs_sweeps(
    doc_ids,
    word_ids,
    topics,
    doc_topic,
    topic_word,
    topic_sum,
    alpha: float,
    beta: float,
    n_sweeps: int,
    rng_state: int,
) -> int:
    """Run collapsed Gibbs sweeps over all tokens, updating arrays in place.

    doc_ids/word_ids/topics are flat int32 arrays of equal length;
    doc_topic is (D, K), topic_word is (K, V), topic_sum is (K,), all int32.
    Returns the advanced RNG state.
    """
    n_tokens = len(word_ids)
    num_topics = topic_sum.shape[0]
    vocab_size = topic_word.shape[1]
    vbeta = vocab_size * beta
    cumulative = [0.0] * num_topics

    for _ in range(n_sweeps):
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

            rng_state, u = rng_double(rng_state)
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

    return rng_state


def levenshtein_ids(a, b) -> int:
    """Edit distance (ins+del+sub) between two int sequences."""
    la = len(a)
    lb = len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev = list(range(lb + 1))
    curr = [0] * (lb + 1)
    for i in range(1, la + 1):
        curr[0] = i
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
        prev, curr = curr, prev
    return prev[lb]
