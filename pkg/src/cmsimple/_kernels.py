"""Compiled sampling kernels.

Each chunk of samples owns a xoshiro256** state (four uint64 words) that
is passed in explicitly, so results never depend on which thread runs
which chunk.  A sample is a Fisher-Yates shuffle of the half-edge labels
whose consecutive positions (2i, 2i+1) form the edges.  Repeated edges
are detected with an open-addressing table keyed by ``v * n + w`` whose
slots are stamped with the sample number instead of being cleared.
"""

import numpy as np
from numba import njit

_HASH_MUL = np.uint64(0x9E3779B97F4A7C15)


@njit(inline="always")
def _rotl(x, k):
    return (x << np.uint64(k)) | (x >> np.uint64(64 - k))


@njit(nogil=True, cache=True)
def next_u64(state):
    s0, s1, s2, s3 = state[0], state[1], state[2], state[3]
    result = _rotl(s1 * np.uint64(5), 7) * np.uint64(9)
    t = s1 << np.uint64(17)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = _rotl(s3, 45)
    state[0], state[1], state[2], state[3] = s0, s1, s2, s3
    return result


_LOW32 = np.uint64(0xFFFFFFFF)
_TWO32 = np.uint64(1) << np.uint64(32)


@njit(nogil=True, cache=True)
def _lemire(state, r32, bound):
    """Map a 32-bit draw to [0, bound) without bias (Lemire's method)."""
    b = np.uint64(bound)
    prod = r32 * b
    low = prod & _LOW32
    if low < b:
        threshold = (_TWO32 - b) % b
        while low < threshold:
            r32 = next_u64(state) >> np.uint64(32)
            prod = r32 * b
            low = prod & _LOW32
    return np.int64(prod >> np.uint64(32))


@njit(nogil=True, cache=True)
def below(state, bound):
    """Uniform integer in [0, bound), bound < 2**32."""
    return _lemire(state, next_u64(state) >> np.uint64(32), bound)


def table_size(edges):
    size = 4
    while size < 2 * edges:
        size *= 2
    return size


@njit(inline="always")
def _slot(key, shift):
    return np.int64((np.uint64(key) * _HASH_MUL) >> np.uint64(shift))


@njit(nogil=True, cache=True)
def _place_pair(perm, state, i):
    """Fisher-Yates steps i and i+1; one 64-bit draw supplies both."""
    m = perm.shape[0]
    r = next_u64(state)
    j = i + _lemire(state, r >> np.uint64(32), m - i)
    perm[i], perm[j] = perm[j], perm[i]
    j = i + 1 + _lemire(state, r & _LOW32, m - i - 1)
    perm[i + 1], perm[j] = perm[j], perm[i + 1]


@njit(nogil=True, cache=True)
def count_simple(vertex_of, n, state, samples, size, early_exit):
    """Number of simple multigraphs among ``samples`` draws.

    With ``early_exit`` the shuffle stops at the first loop or repeated
    edge; the revealed prefix is identical to that of the full shuffle.
    """
    m = vertex_of.shape[0]
    perm = np.arange(m, dtype=np.int32)
    shift = 64 - int(np.log2(size))
    mask = size - 1
    keys = np.empty(size, dtype=np.int64)
    stamp = np.zeros(size, dtype=np.int64)
    successes = 0
    for s in range(samples):
        sid = s + 1
        simple = True
        for i in range(0, m, 2):
            _place_pair(perm, state, i)
            if not simple:
                continue
            a = vertex_of[perm[i]]
            b = vertex_of[perm[i + 1]]
            if a == b:
                simple = False
            else:
                key = a * n + b if a < b else b * n + a
                h = _slot(key, shift)
                while stamp[h] == sid:
                    if keys[h] == key:
                        simple = False
                        break
                    h = (h + 1) & mask
                if simple:
                    stamp[h] = sid
                    keys[h] = key
            if not simple and early_exit:
                break
        if simple:
            successes += 1
    return successes


@njit(nogil=True, cache=True)
def _pair_statistics(perm, vertex_of, n, keys, counts, stamp, loop_seen, sid, shift, out):
    """Fill out[:] with (Y, Ytilde, loops, parallel pairs) for one matching."""
    mask = keys.shape[0] - 1
    m = perm.shape[0]
    y = 0
    loops = 0
    pairs = 0
    for i in range(0, m, 2):
        a = vertex_of[perm[i]]
        b = vertex_of[perm[i + 1]]
        if a == b:
            loops += 1
            if loop_seen[a] != sid:
                loop_seen[a] = sid
                y += 1
            continue
        key = a * n + b if a < b else b * n + a
        h = _slot(key, shift)
        while stamp[h] == sid and keys[h] != key:
            h = (h + 1) & mask
        if stamp[h] == sid:
            c = counts[h]
            # the (c+1)-th parallel edge forms c new pairs
            pairs += c
            if c == 1:
                y += 1
            counts[h] = c + 1
        else:
            stamp[h] = sid
            keys[h] = key
            counts[h] = 1
    out[0] = y
    out[1] = loops + pairs
    out[2] = loops
    out[3] = pairs


@njit(nogil=True, cache=True)
def sample_statistics(vertex_of, n, state, samples, size, out):
    """Draw ``samples`` full matchings; row s of ``out`` gets their statistics."""
    m = vertex_of.shape[0]
    perm = np.arange(m, dtype=np.int32)
    shift = 64 - int(np.log2(size))
    keys = np.empty(size, dtype=np.int64)
    counts = np.zeros(size, dtype=np.int64)
    stamp = np.zeros(size, dtype=np.int64)
    loop_seen = np.zeros(n, dtype=np.int64)
    for s in range(samples):
        for i in range(0, m, 2):
            _place_pair(perm, state, i)
        _pair_statistics(perm, vertex_of, n, keys, counts, stamp, loop_seen, s + 1, shift, out[s])


@njit(nogil=True, cache=True)
def classify_matchings(vertex_of, n, matchings, size, out):
    """Statistics for given matchings (rows of paired-neighbour permutations)."""
    shift = 64 - int(np.log2(size))
    keys = np.empty(size, dtype=np.int64)
    counts = np.zeros(size, dtype=np.int64)
    stamp = np.zeros(size, dtype=np.int64)
    loop_seen = np.zeros(n, dtype=np.int64)
    for s in range(matchings.shape[0]):
        _pair_statistics(matchings[s], vertex_of, n, keys, counts, stamp, loop_seen, s + 1, shift,
                         out[s])


@njit(nogil=True, cache=True)
def draw_matchings(m, state, samples):
    """Raw shuffles, for testing the sampler itself."""
    perm = np.arange(m, dtype=np.int32)
    out = np.empty((samples, m), dtype=np.int64)
    for s in range(samples):
        for i in range(0, m, 2):
            _place_pair(perm, state, i)
        out[s] = perm
    return out
